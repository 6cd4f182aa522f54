// SPDX-License-Identifier: Apache-2.0
#include "canopy/lzw.hpp"

#include <algorithm>

namespace canopy {

namespace {

constexpr int kClearCode = 256;
constexpr int kEoiCode = 257;
constexpr int kFirstFree = 258;
constexpr int kTableSize = 4096;

struct BitReader {
    const std::uint8_t* data;
    std::size_t len;
    std::size_t bit_pos = 0;

    // MSB-first; returns -1 on exhausted input.
    int next(int bits) {
        if (bit_pos + static_cast<std::size_t>(bits) > len * 8)
            return -1;
        int v = 0;
        for (int i = 0; i < bits; ++i) {
            std::size_t p = bit_pos + static_cast<std::size_t>(i);
            v = (v << 1) | ((data[p >> 3] >> (7 - (p & 7))) & 1);
        }
        bit_pos += static_cast<std::size_t>(bits);
        return v;
    }
};

} // namespace

bool lzw_decode(const std::uint8_t* src, std::size_t src_len,
                std::vector<std::uint8_t>& out, std::size_t max_out) {
    // prefix chain + appended byte per code; lengths let us emit back-to-front.
    std::vector<int> prefix(kTableSize, -1);
    std::vector<std::uint8_t> suffix(kTableSize, 0);
    std::vector<std::uint32_t> length(kTableSize, 0);
    for (int i = 0; i < 256; ++i) {
        suffix[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(i);
        length[static_cast<std::size_t>(i)] = 1;
    }

    BitReader br{src, src_len};
    int bits = 9;
    int next_free = kFirstFree;

    auto emit = [&](int code) {
        std::uint32_t n = length[static_cast<std::size_t>(code)];
        std::size_t pos = out.size();
        // never write past max_out; surplus bytes of the final entry are dropped
        std::size_t take = std::min<std::size_t>(n, max_out - pos);
        out.resize(pos + take);
        int c = code;
        for (std::uint32_t i = n; i-- > 0;) {
            if (i < take)
                out[pos + i] = suffix[static_cast<std::size_t>(c)];
            c = prefix[static_cast<std::size_t>(c)];
        }
    };
    auto first_byte = [&](int code) -> std::uint8_t {
        while (prefix[static_cast<std::size_t>(code)] >= 0)
            code = prefix[static_cast<std::size_t>(code)];
        return suffix[static_cast<std::size_t>(code)];
    };

    int old_code = -1;
    while (out.size() < max_out) {
        int code = br.next(bits);
        if (code < 0)
            break; // input exhausted; segment byte counts bound the stream
        if (code == kEoiCode)
            break;
        if (code == kClearCode) {
            bits = 9;
            next_free = kFirstFree;
            old_code = -1;
            continue;
        }
        if (old_code < 0) {
            if (code >= kFirstFree)
                return false;
            emit(code);
            old_code = code;
            continue;
        }
        if (code < next_free) {
            emit(code);
            if (next_free < kTableSize) {
                prefix[static_cast<std::size_t>(next_free)] = old_code;
                suffix[static_cast<std::size_t>(next_free)] = first_byte(code);
                length[static_cast<std::size_t>(next_free)] =
                    length[static_cast<std::size_t>(old_code)] + 1;
                ++next_free;
            }
        } else if (code == next_free && next_free < kTableSize) {
            // KwKwK: string is old + first byte of old
            prefix[static_cast<std::size_t>(next_free)] = old_code;
            suffix[static_cast<std::size_t>(next_free)] = first_byte(old_code);
            length[static_cast<std::size_t>(next_free)] =
                length[static_cast<std::size_t>(old_code)] + 1;
            ++next_free;
            emit(next_free - 1);
        } else {
            return false;
        }
        // early change: the code after filling slot (1<<bits)-2 is wider
        if (next_free == (1 << bits) - 1 && bits < 12)
            ++bits;
        old_code = code;
    }
    return true;
}

} // namespace canopy

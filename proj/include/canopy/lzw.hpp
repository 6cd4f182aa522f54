// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace canopy {

// TIFF-variant LZW: MSB-first bit packing, 9..12 bit codes, Clear=256,
// EOI=257, early code-width change at table size (1<<bits)-1.
// Appends decoded bytes to `out` until EOI, end of input, or `max_out`
// bytes have been produced. Returns false on a malformed stream.
bool lzw_decode(const std::uint8_t* src, std::size_t src_len,
                std::vector<std::uint8_t>& out, std::size_t max_out);

} // namespace canopy

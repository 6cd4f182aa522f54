// SPDX-License-Identifier: Apache-2.0
#include "canopy/tiff_reader.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <unordered_set>

#include <zlib.h>

#include "canopy/error.hpp"
#include "canopy/lzw.hpp"

namespace canopy::tiff {

namespace {

// TIFF 6.0 / BigTIFF tag and type codes used here
constexpr std::uint16_t kTagImageWidth = 256;
constexpr std::uint16_t kTagImageLength = 257;
constexpr std::uint16_t kTagBitsPerSample = 258;
constexpr std::uint16_t kTagCompression = 259;
constexpr std::uint16_t kTagStripOffsets = 273;
constexpr std::uint16_t kTagSamplesPerPixel = 277;
constexpr std::uint16_t kTagRowsPerStrip = 278;
constexpr std::uint16_t kTagStripByteCounts = 279;
constexpr std::uint16_t kTagPlanarConfig = 284;
constexpr std::uint16_t kTagTileWidth = 322;
constexpr std::uint16_t kTagTileLength = 323;
constexpr std::uint16_t kTagTileOffsets = 324;
constexpr std::uint16_t kTagTileByteCounts = 325;
constexpr std::uint16_t kTagSampleFormat = 339;
constexpr std::uint16_t kTagModelPixelScale = 33550;

constexpr std::uint16_t kTypeByte = 1;
constexpr std::uint16_t kTypeShort = 3;
constexpr std::uint16_t kTypeLong = 4;
constexpr std::uint16_t kTypeDouble = 12;
constexpr std::uint16_t kTypeLong8 = 16;

constexpr std::uint16_t kCompressionNone = 1;
constexpr std::uint16_t kCompressionLzw = 5;
constexpr std::uint16_t kCompressionDeflate = 8;
constexpr std::uint16_t kCompressionDeflateLegacy = 32946;

std::size_t type_size(std::uint16_t type) {
    switch (type) {
        case kTypeByte: return 1;
        case kTypeShort: return 2;
        case kTypeLong: return 4;
        case kTypeDouble: return 8;
        case kTypeLong8: return 8;
        default: return 0;
    }
}

// Endian-explicit scalar reads; throws `on_short` when the file ends early.
struct Cursor {
    const ByteSource& src;
    ByteOrder order;
    ErrorCode on_short;

    void fetch(std::uint64_t at, std::size_t n, std::uint8_t* out) const {
        if (!src.read_at(at, n, out))
            throw Error(on_short, "read of " + std::to_string(n) + " bytes at offset " +
                                      std::to_string(at) + " past end of file");
    }

    std::uint16_t u16(std::uint64_t at) const {
        std::uint8_t b[2];
        fetch(at, 2, b);
        return order == ByteOrder::little
                   ? static_cast<std::uint16_t>(b[0] | (b[1] << 8))
                   : static_cast<std::uint16_t>(b[1] | (b[0] << 8));
    }

    std::uint32_t u32(std::uint64_t at) const {
        std::uint8_t b[4];
        fetch(at, 4, b);
        if (order == ByteOrder::little)
            return std::uint32_t(b[0]) | (std::uint32_t(b[1]) << 8) |
                   (std::uint32_t(b[2]) << 16) | (std::uint32_t(b[3]) << 24);
        return std::uint32_t(b[3]) | (std::uint32_t(b[2]) << 8) |
               (std::uint32_t(b[1]) << 16) | (std::uint32_t(b[0]) << 24);
    }

    std::uint64_t u64(std::uint64_t at) const {
        std::uint8_t b[8];
        fetch(at, 8, b);
        std::uint64_t v = 0;
        if (order == ByteOrder::little) {
            for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
        } else {
            for (int i = 0; i < 8; ++i) v = (v << 8) | b[i];
        }
        return v;
    }

    double f64(std::uint64_t at) const { return std::bit_cast<double>(u64(at)); }
};

struct TagEntry {
    std::uint16_t tag = 0;
    std::uint16_t type = 0;
    std::uint64_t count = 0;
    std::uint64_t value_pos = 0; // file offset of the inline value/offset field
};

struct IfdLayout {
    std::uint64_t entry_count_size;  // 2 classic, 8 bigtiff
    std::uint64_t entry_size;        // 12 classic, 20 bigtiff
    std::uint64_t inline_capacity;   // 4 classic, 8 bigtiff
};

IfdLayout ifd_layout(Variant variant) {
    return variant == Variant::classic ? IfdLayout{2, 12, 4} : IfdLayout{8, 20, 8};
}

std::uint64_t read_ifd_entry_count(const Cursor& cur, Variant variant, std::uint64_t ifd_offset) {
    if (variant == Variant::classic)
        return cur.u16(ifd_offset);
    std::uint64_t n = cur.u64(ifd_offset);
    if (n > 0xFFFF)
        throw Error(ErrorCode::CorruptDirectory, "implausible directory entry count");
    return n;
}

std::uint64_t read_offset_field(const Cursor& cur, Variant variant, std::uint64_t at) {
    return variant == Variant::classic ? cur.u32(at) : cur.u64(at);
}

// Resolves where the tag's element data lives (inline or out-of-line).
std::uint64_t element_data_pos(const Cursor& cur, Variant variant, const TagEntry& e) {
    std::size_t ts = type_size(e.type);
    std::uint64_t total = e.count * ts;
    if (total <= ifd_layout(variant).inline_capacity)
        return e.value_pos;
    return read_offset_field(cur, variant, e.value_pos);
}

std::vector<std::uint64_t> read_uint_array(const Cursor& cur, Variant variant, const TagEntry& e) {
    std::size_t ts = type_size(e.type);
    if (ts == 0 || (e.type != kTypeShort && e.type != kTypeLong && e.type != kTypeLong8 &&
                    e.type != kTypeByte))
        throw Error(ErrorCode::CorruptDirectory,
                    "tag " + std::to_string(e.tag) + " has non-integer type " +
                        std::to_string(e.type));
    if (e.count > (std::uint64_t(1) << 28))
        throw Error(ErrorCode::CorruptDirectory, "implausible tag value count");
    std::uint64_t pos = element_data_pos(cur, variant, e);
    std::vector<std::uint64_t> out(static_cast<std::size_t>(e.count));
    for (std::size_t i = 0; i < out.size(); ++i) {
        switch (e.type) {
            case kTypeByte: {
                std::uint8_t b;
                cur.fetch(pos + i, 1, &b);
                out[i] = b;
                break;
            }
            case kTypeShort: out[i] = cur.u16(pos + i * 2); break;
            case kTypeLong: out[i] = cur.u32(pos + i * 4); break;
            default: out[i] = cur.u64(pos + i * 8); break;
        }
    }
    return out;
}

std::uint64_t read_uint_scalar(const Cursor& cur, Variant variant, const TagEntry& e) {
    auto values = read_uint_array(cur, variant, e);
    if (values.empty())
        throw Error(ErrorCode::CorruptDirectory,
                    "tag " + std::to_string(e.tag) + " has no value");
    return values[0];
}

std::vector<double> read_double_array(const Cursor& cur, Variant variant, const TagEntry& e) {
    if (e.type != kTypeDouble || e.count > 1024)
        return {};
    std::uint64_t pos = element_data_pos(cur, variant, e);
    std::vector<double> out(static_cast<std::size_t>(e.count));
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = cur.f64(pos + i * 8);
    return out;
}

ContainerInfo open_impl(std::shared_ptr<const ByteSource> source, std::string name) {
    ContainerInfo info;
    info.path = std::move(name);
    info.source = std::move(source);
    const ByteSource& src = *info.source;

    std::uint8_t head[4];
    if (src.size() < 8 || !src.read_at(0, 4, head))
        throw Error(ErrorCode::TruncatedHeader, "file shorter than a TIFF header");

    if (head[0] == 'I' && head[1] == 'I')
        info.byte_order = ByteOrder::little;
    else if (head[0] == 'M' && head[1] == 'M')
        info.byte_order = ByteOrder::big;
    else
        throw Error(ErrorCode::BadMagic, "byte-order mark is neither II nor MM");

    Cursor cur{src, info.byte_order, ErrorCode::TruncatedHeader};
    std::uint16_t magic = cur.u16(2);
    std::uint64_t first_ifd = 0;
    if (magic == 42) {
        info.variant = Variant::classic;
        first_ifd = cur.u32(4);
    } else if (magic == 43) {
        info.variant = Variant::bigtiff;
        // the 16-byte BigTIFF signature fixes offset size 8 and a zero pad
        if (cur.u16(4) != 8 || cur.u16(6) != 0)
            throw Error(ErrorCode::BadMagic, "malformed BigTIFF offset-size bytes");
        first_ifd = cur.u64(8);
    } else {
        throw Error(ErrorCode::BadMagic, "magic number " + std::to_string(magic) +
                                             " is neither 42 nor 43");
    }

    const IfdLayout layout = ifd_layout(info.variant);
    std::unordered_set<std::uint64_t> visited;
    std::uint64_t ifd = first_ifd;
    while (ifd != 0) {
        if (!visited.insert(ifd).second)
            throw Error(ErrorCode::CyclicDirectoryChain,
                        "directory offset " + std::to_string(ifd) + " repeats");
        info.page_offsets.push_back(ifd);
        std::uint64_t n = read_ifd_entry_count(cur, info.variant, ifd);
        std::uint64_t next_pos = ifd + layout.entry_count_size + n * layout.entry_size;
        ifd = read_offset_field(cur, info.variant, next_pos);
    }
    if (info.page_offsets.empty())
        throw Error(ErrorCode::CorruptDirectory, "container has no pages");
    return info;
}

std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

// Expected raw (decompressed) byte size of segment `idx`.
std::uint64_t segment_raw_size(const PageDescriptor& page, std::uint64_t idx) {
    const std::uint64_t spp = page.samples_per_pixel;
    if (page.layout.tiled)
        return std::uint64_t(page.layout.tile_width) * page.layout.tile_height * spp;
    const std::uint64_t rps = page.layout.rows_per_strip;
    const std::uint64_t top = idx * rps;
    const std::uint64_t rows = std::min<std::uint64_t>(rps, page.height - top);
    return rows * page.width * spp;
}

void inflate_segment(const std::uint8_t* src, std::size_t src_len,
                     std::uint8_t* dst, std::size_t dst_len) {
    z_stream zs{};
    if (inflateInit(&zs) != Z_OK)
        throw Error(ErrorCode::CorruptSegment, "inflate init failed");
    zs.next_in = const_cast<Bytef*>(src);
    zs.avail_in = static_cast<uInt>(src_len);
    zs.next_out = dst;
    zs.avail_out = static_cast<uInt>(dst_len);
    int rc = inflate(&zs, Z_FINISH);
    std::size_t produced = dst_len - zs.avail_out;
    inflateEnd(&zs);
    if ((rc != Z_STREAM_END && rc != Z_OK && rc != Z_BUF_ERROR) || produced < dst_len)
        throw Error(ErrorCode::CorruptSegment, "deflate stream did not yield a full segment");
}

} // namespace

const char* byte_order_name(ByteOrder order) {
    return order == ByteOrder::little ? "little" : "big";
}

const char* variant_name(Variant variant) {
    return variant == Variant::classic ? "classic" : "bigtiff";
}

const char* compression_name(Compression compression) {
    switch (compression) {
        case Compression::none: return "none";
        case Compression::lzw: return "lzw";
        case Compression::deflate: return "deflate";
    }
    return "?";
}

ContainerInfo open_container(const std::filesystem::path& path) {
    return open_impl(std::make_shared<FileByteSource>(path), path.string());
}

ContainerInfo open_container(std::shared_ptr<const ByteSource> source, std::string display_name) {
    return open_impl(std::move(source), std::move(display_name));
}

PageDescriptor read_page(const ContainerInfo& container, std::uint32_t index) {
    if (index >= container.page_count())
        throw Error(ErrorCode::BandOutOfRange,
                    "page " + std::to_string(index) + " of " +
                        std::to_string(container.page_count()));

    const ByteSource& src = *container.source;
    Cursor cur{src, container.byte_order, ErrorCode::CorruptDirectory};
    const Variant variant = container.variant;
    const IfdLayout layout = ifd_layout(variant);
    const std::uint64_t ifd = container.page_offsets[index];

    std::uint64_t n = read_ifd_entry_count(cur, variant, ifd);
    std::vector<TagEntry> entries;
    entries.reserve(static_cast<std::size_t>(n));
    for (std::uint64_t i = 0; i < n; ++i) {
        std::uint64_t at = ifd + layout.entry_count_size + i * layout.entry_size;
        TagEntry e;
        e.tag = cur.u16(at);
        e.type = cur.u16(at + 2);
        e.count = variant == Variant::classic ? cur.u32(at + 4) : cur.u64(at + 4);
        e.value_pos = at + (variant == Variant::classic ? 8 : 12);
        entries.push_back(e);
    }
    auto find = [&](std::uint16_t tag) -> const TagEntry* {
        for (const auto& e : entries)
            if (e.tag == tag) return &e;
        return nullptr;
    };

    PageDescriptor page;
    page.index = index;
    page.source = container.source;

    const TagEntry* width_tag = find(kTagImageWidth);
    const TagEntry* height_tag = find(kTagImageLength);
    if (!width_tag || !height_tag)
        throw Error(ErrorCode::CorruptDirectory, "page lacks width/height tags");
    std::uint64_t w = read_uint_scalar(cur, variant, *width_tag);
    std::uint64_t h = read_uint_scalar(cur, variant, *height_tag);
    if (w == 0 || h == 0 || w > 0x7FFFFFFF || h > 0x7FFFFFFF)
        throw Error(ErrorCode::CorruptDirectory, "implausible page dimensions");
    page.width = static_cast<std::uint32_t>(w);
    page.height = static_cast<std::uint32_t>(h);

    std::uint64_t spp = 1;
    if (const TagEntry* e = find(kTagSamplesPerPixel))
        spp = read_uint_scalar(cur, variant, *e);
    if (spp < 3 || spp > 16)
        throw Error(ErrorCode::UnsupportedSampleFormat,
                    "need interleaved RGB (>= 3 samples), got " + std::to_string(spp));
    page.samples_per_pixel = static_cast<std::uint16_t>(spp);

    std::vector<std::uint64_t> bits;
    if (const TagEntry* e = find(kTagBitsPerSample))
        bits = read_uint_array(cur, variant, *e);
    else
        bits = {1};
    for (std::uint64_t b : bits)
        if (b != 8)
            throw Error(ErrorCode::UnsupportedSampleFormat,
                        "only 8-bit samples supported, got " + std::to_string(b) + " bits");
    page.bits_per_sample = 8;

    if (const TagEntry* e = find(kTagSampleFormat)) {
        for (std::uint64_t f : read_uint_array(cur, variant, *e))
            if (f != 1)
                throw Error(ErrorCode::UnsupportedSampleFormat,
                            "only unsigned integer samples supported");
    }

    std::uint64_t planar = 1;
    if (const TagEntry* e = find(kTagPlanarConfig))
        planar = read_uint_scalar(cur, variant, *e);
    if (planar != 1)
        throw Error(ErrorCode::UnsupportedPlanarConfig,
                    "planar (non-interleaved) pages not supported");

    std::uint64_t comp = kCompressionNone;
    if (const TagEntry* e = find(kTagCompression))
        comp = read_uint_scalar(cur, variant, *e);
    switch (comp) {
        case kCompressionNone: page.compression = Compression::none; break;
        case kCompressionLzw: page.compression = Compression::lzw; break;
        case kCompressionDeflate:
        case kCompressionDeflateLegacy: page.compression = Compression::deflate; break;
        default:
            throw Error(ErrorCode::UnsupportedCompression,
                        "compression code " + std::to_string(comp));
    }

    const TagEntry* strip_offsets = find(kTagStripOffsets);
    const TagEntry* tile_offsets = find(kTagTileOffsets);
    std::uint64_t expected = 0;
    if (tile_offsets) {
        const TagEntry* tw_tag = find(kTagTileWidth);
        const TagEntry* th_tag = find(kTagTileLength);
        const TagEntry* counts_tag = find(kTagTileByteCounts);
        if (!tw_tag || !th_tag || !counts_tag)
            throw Error(ErrorCode::CorruptDirectory, "tiled page lacks tile geometry tags");
        std::uint64_t tw = read_uint_scalar(cur, variant, *tw_tag);
        std::uint64_t th = read_uint_scalar(cur, variant, *th_tag);
        if (tw == 0 || th == 0)
            throw Error(ErrorCode::CorruptDirectory, "zero tile dimensions");
        page.layout.tiled = true;
        page.layout.tile_width = static_cast<std::uint32_t>(tw);
        page.layout.tile_height = static_cast<std::uint32_t>(th);
        page.segment_offsets = read_uint_array(cur, variant, *tile_offsets);
        page.segment_byte_counts = read_uint_array(cur, variant, *counts_tag);
        expected = ceil_div(page.width, tw) * ceil_div(page.height, th);
    } else if (strip_offsets) {
        const TagEntry* counts_tag = find(kTagStripByteCounts);
        if (!counts_tag)
            throw Error(ErrorCode::CorruptDirectory, "strip page lacks StripByteCounts");
        std::uint64_t rps = page.height;
        if (const TagEntry* e = find(kTagRowsPerStrip))
            rps = std::min<std::uint64_t>(read_uint_scalar(cur, variant, *e), page.height);
        if (rps == 0)
            throw Error(ErrorCode::CorruptDirectory, "zero RowsPerStrip");
        page.layout.tiled = false;
        page.layout.rows_per_strip = static_cast<std::uint32_t>(rps);
        page.segment_offsets = read_uint_array(cur, variant, *strip_offsets);
        page.segment_byte_counts = read_uint_array(cur, variant, *counts_tag);
        expected = ceil_div(page.height, rps);
    } else {
        throw Error(ErrorCode::CorruptDirectory, "page has neither strip nor tile offsets");
    }

    if (page.segment_offsets.size() != expected ||
        page.segment_byte_counts.size() != expected)
        throw Error(ErrorCode::CorruptDirectory,
                    "segment table length " + std::to_string(page.segment_offsets.size()) +
                        " != expected " + std::to_string(expected));

    if (const TagEntry* e = find(kTagModelPixelScale)) {
        auto scale = read_double_array(cur, variant, *e);
        if (scale.size() >= 2 && std::isfinite(scale[0]) && std::isfinite(scale[1]) &&
            scale[0] > 0 && scale[1] > 0)
            page.geo_scale = PixelScale{scale[0], scale[1]};
    }
    return page;
}

PageDescriptor select_band(const ContainerInfo& container, std::uint32_t band) {
    if (band >= container.page_count())
        throw Error(ErrorCode::BandOutOfRange,
                    "band " + std::to_string(band) + " of a " +
                        std::to_string(container.page_count()) + "-page container");
    return read_page(container, band);
}

std::uint64_t segment_count(const PageDescriptor& page) {
    if (page.layout.tiled)
        return ceil_div(page.width, page.layout.tile_width) *
               ceil_div(page.height, page.layout.tile_height);
    return ceil_div(page.height, page.layout.rows_per_strip);
}

std::uint64_t segments_overlapping(const PageDescriptor& page, std::uint32_t x0,
                                   std::uint32_t y0, std::uint32_t width,
                                   std::uint32_t height) {
    if (width == 0 || height == 0)
        return 0;
    if (page.layout.tiled) {
        std::uint64_t tx0 = x0 / page.layout.tile_width;
        std::uint64_t tx1 = (std::uint64_t(x0) + width - 1) / page.layout.tile_width;
        std::uint64_t ty0 = y0 / page.layout.tile_height;
        std::uint64_t ty1 = (std::uint64_t(y0) + height - 1) / page.layout.tile_height;
        return (tx1 - tx0 + 1) * (ty1 - ty0 + 1);
    }
    std::uint64_t s0 = y0 / page.layout.rows_per_strip;
    std::uint64_t s1 = (std::uint64_t(y0) + height - 1) / page.layout.rows_per_strip;
    return s1 - s0 + 1;
}

RasterWindow decode_window(const PageDescriptor& page, std::uint32_t x0, std::uint32_t y0,
                           std::uint32_t width, std::uint32_t height) {
    if (width == 0 || height == 0 || std::uint64_t(x0) + width > page.width ||
        std::uint64_t(y0) + height > page.height)
        throw Error(ErrorCode::WindowOutOfBounds,
                    "window (" + std::to_string(x0) + "," + std::to_string(y0) + ")+" +
                        std::to_string(width) + "x" + std::to_string(height) +
                        " exceeds page " + std::to_string(page.width) + "x" +
                        std::to_string(page.height));

    RasterWindow window;
    window.x0 = x0;
    window.y0 = y0;
    window.width = width;
    window.height = height;
    window.pixels.assign(std::size_t(width) * height * 3, 0);

    const std::uint32_t spp = page.samples_per_pixel;
    std::vector<std::uint8_t> compressed; // reused across segments
    std::vector<std::uint8_t> raw;

    // Fetches and decompresses one segment with a single source read.
    auto fetch_segment = [&](std::uint64_t idx) -> const std::uint8_t* {
        const std::uint64_t offset = page.segment_offsets[static_cast<std::size_t>(idx)];
        const std::uint64_t count = page.segment_byte_counts[static_cast<std::size_t>(idx)];
        const std::uint64_t need = segment_raw_size(page, idx);
        if (offset + count > page.source->size())
            throw Error(ErrorCode::SegmentOutOfFile,
                        "segment " + std::to_string(idx) + " at " + std::to_string(offset) +
                            "+" + std::to_string(count) + " exceeds file size " +
                            std::to_string(page.source->size()));
        if (page.compression == Compression::none) {
            if (count < need)
                throw Error(ErrorCode::CorruptSegment,
                            "uncompressed segment " + std::to_string(idx) + " too short");
            raw.resize(static_cast<std::size_t>(need));
            if (!page.source->read_at(offset, static_cast<std::size_t>(need), raw.data()))
                throw Error(ErrorCode::SegmentOutOfFile, "segment read failed");
            return raw.data();
        }
        compressed.resize(static_cast<std::size_t>(count));
        if (!page.source->read_at(offset, static_cast<std::size_t>(count), compressed.data()))
            throw Error(ErrorCode::SegmentOutOfFile, "segment read failed");
        if (page.compression == Compression::deflate) {
            raw.resize(static_cast<std::size_t>(need));
            inflate_segment(compressed.data(), compressed.size(), raw.data(),
                            raw.size());
            return raw.data();
        }
        raw.clear();
        raw.reserve(static_cast<std::size_t>(need));
        if (!lzw_decode(compressed.data(), compressed.size(), raw,
                        static_cast<std::size_t>(need)) ||
            raw.size() < need)
            throw Error(ErrorCode::CorruptSegment,
                        "LZW segment " + std::to_string(idx) + " malformed or short");
        return raw.data();
    };

    // Copies one row span, dropping samples beyond RGB.
    auto copy_row = [&](const std::uint8_t* src_row, std::uint32_t span,
                        std::uint8_t* dst_row) {
        if (spp == 3) {
            std::memcpy(dst_row, src_row, std::size_t(span) * 3);
        } else {
            for (std::uint32_t i = 0; i < span; ++i)
                std::memcpy(dst_row + std::size_t(i) * 3, src_row + std::size_t(i) * spp, 3);
        }
    };

    if (page.layout.tiled) {
        const std::uint32_t tw = page.layout.tile_width;
        const std::uint32_t th = page.layout.tile_height;
        const std::uint64_t tile_cols = ceil_div(page.width, tw);
        const std::uint64_t tile_row_bytes = std::uint64_t(tw) * spp;
        for (std::uint64_t ty = y0 / th; ty <= (std::uint64_t(y0) + height - 1) / th; ++ty) {
            for (std::uint64_t tx = x0 / tw; tx <= (std::uint64_t(x0) + width - 1) / tw; ++tx) {
                const std::uint8_t* data = fetch_segment(ty * tile_cols + tx);
                const std::uint32_t xlo = std::max<std::uint32_t>(x0, static_cast<std::uint32_t>(tx * tw));
                const std::uint32_t xhi = std::min<std::uint32_t>(x0 + width, static_cast<std::uint32_t>((tx + 1) * tw));
                const std::uint32_t ylo = std::max<std::uint32_t>(y0, static_cast<std::uint32_t>(ty * th));
                const std::uint32_t yhi = std::min<std::uint32_t>(y0 + height, static_cast<std::uint32_t>((ty + 1) * th));
                for (std::uint32_t y = ylo; y < yhi; ++y) {
                    const std::uint8_t* src_row = data +
                        (y - ty * th) * tile_row_bytes + std::uint64_t(xlo - tx * tw) * spp;
                    std::uint8_t* dst_row = window.pixels.data() +
                        (std::size_t(y - y0) * width + (xlo - x0)) * 3;
                    copy_row(src_row, xhi - xlo, dst_row);
                }
            }
        }
    } else {
        const std::uint32_t rps = page.layout.rows_per_strip;
        const std::uint64_t row_bytes = std::uint64_t(page.width) * spp;
        for (std::uint64_t s = y0 / rps; s <= (std::uint64_t(y0) + height - 1) / rps; ++s) {
            const std::uint8_t* data = fetch_segment(s);
            const std::uint32_t strip_top = static_cast<std::uint32_t>(s * rps);
            const std::uint32_t ylo = std::max(y0, strip_top);
            const std::uint32_t yhi = std::min<std::uint32_t>(
                y0 + height, std::min(page.height, strip_top + rps));
            for (std::uint32_t y = ylo; y < yhi; ++y) {
                const std::uint8_t* src_row =
                    data + (y - strip_top) * row_bytes + std::uint64_t(x0) * spp;
                std::uint8_t* dst_row =
                    window.pixels.data() + std::size_t(y - y0) * width * 3;
                copy_row(src_row, width, dst_row);
            }
        }
    }
    return window;
}

} // namespace canopy::tiff

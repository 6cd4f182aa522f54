// SPDX-License-Identifier: Apache-2.0
#pragma once

// Test-side TIFF/BigTIFF writer, implemented from the published byte layouts
// and deliberately sharing no code with the reader under test. Fixtures are
// generated segment by segment, so huge pages never materialize in memory.

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <vector>

namespace fixtures {

// Fills a tightly packed w*h*samples_per_pixel region with pixel data.
using RegionGenerator =
    std::function<void(std::uint32_t x0, std::uint32_t y0, std::uint32_t w,
                       std::uint32_t h, std::uint8_t* out)>;

struct PageSpec {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::uint16_t samples_per_pixel = 3;
    std::uint16_t compression = 1; // 1 none, 5 LZW, 8 Deflate, 32946 legacy Deflate
    bool tiled = false;
    std::uint32_t rows_per_strip = 0; // 0 = one strip for the whole page
    std::uint32_t tile_width = 0;
    std::uint32_t tile_height = 0;
    std::optional<std::array<double, 3>> pixel_scale; // ModelPixelScale values
    RegionGenerator generate;
};

struct FileSpec {
    bool bigtiff = false;
    bool big_endian = false;
    std::vector<PageSpec> pages;
};

// File positions recorded for corruption tests.
struct WrittenPage {
    std::uint64_t ifd_offset = 0;
    std::uint64_t next_field_pos = 0;         // position of the next-IFD pointer
    std::uint64_t offsets_array_pos = 0;      // first element of the offsets array
    std::uint64_t byte_counts_array_pos = 0;  // first element of the counts array
    std::vector<std::uint64_t> segment_offsets;
    std::vector<std::uint64_t> segment_byte_counts;
};

struct WrittenFile {
    std::uint64_t first_ifd_field_pos = 0; // header field pointing at IFD 0
    std::vector<WrittenPage> pages;
};

WrittenFile write_tiff(const std::filesystem::path& path, const FileSpec& spec);

// Independent TIFF-flavor LZW encoder (MSB-first, early code-width change).
std::vector<std::uint8_t> lzw_encode(const std::uint8_t* data, std::size_t size);

// Deterministic pseudo-random RGB content; same seed, same pixels.
RegionGenerator noise_generator(std::uint32_t seed, std::uint16_t samples_per_pixel = 3);

// Constant-color content.
RegionGenerator solid_generator(std::uint8_t r, std::uint8_t g, std::uint8_t b,
                                std::uint16_t samples_per_pixel = 3);

// Copies from a caller-owned full-page buffer (w*h*spp, row-major).
RegionGenerator buffer_generator(const std::vector<std::uint8_t>* pixels,
                                 std::uint32_t page_width,
                                 std::uint16_t samples_per_pixel = 3);

// Renders the full page a generator would produce (for small oracles).
std::vector<std::uint8_t> render_page(const PageSpec& page);

} // namespace fixtures

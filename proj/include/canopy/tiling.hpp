// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "canopy/tiff_reader.hpp"

namespace canopy {

inline constexpr std::uint32_t kDefaultChunkSize = 640;

// Tiling plan over a page; every page pixel belongs to exactly one chunk.
struct ChunkGrid {
    std::uint32_t page_width = 0;
    std::uint32_t page_height = 0;
    std::uint32_t chunk_size = kDefaultChunkSize;
    std::uint32_t rows = 0;
    std::uint32_t cols = 0;

    std::uint64_t chunk_count() const { return std::uint64_t(rows) * cols; }
};

// One grid cell. in_width/in_height are the in-bounds extent (>= 1, <= chunk_size).
struct ChunkRef {
    std::string file_name;
    std::uint32_t row = 0;
    std::uint32_t col = 0;
    std::uint32_t x0 = 0;
    std::uint32_t y0 = 0;
    std::uint32_t in_width = 0;
    std::uint32_t in_height = 0;

    bool operator==(const ChunkRef&) const = default;
};

// chunk_size x chunk_size RGB block; pixels at x >= in_width or y >= in_height are (0,0,0).
struct PaddedChunk {
    ChunkRef ref;
    std::uint32_t chunk_size = kDefaultChunkSize;
    std::vector<std::uint8_t> pixels; // row-major, 3 bytes per pixel

    const std::uint8_t* pixel(std::uint32_t x, std::uint32_t y) const {
        return pixels.data() + (std::size_t(y) * chunk_size + x) * 3;
    }
};

// In-bounds pixel tallies; padding never enters either count.
struct PixelAccount {
    std::uint64_t total_pixels = 0;
    std::uint64_t covered_pixels = 0;
};

ChunkGrid plan_grid(std::uint32_t page_width, std::uint32_t page_height,
                    std::uint32_t chunk_size = kDefaultChunkSize);

// Builds the ref for one grid cell; row/col must lie inside the grid.
ChunkRef make_chunk_ref(const ChunkGrid& grid, const std::string& file_name,
                        std::uint32_t row, std::uint32_t col);

// Decodes the in-bounds window (exactly one decode_window call) into a zero-padded block.
PaddedChunk extract_chunk(const tiff::PageDescriptor& page, const ChunkRef& ref,
                          std::uint32_t chunk_size = kDefaultChunkSize);

// total = in_width * in_height; covered = in-bounds pixels with any nonzero channel.
PixelAccount account_chunk(const PaddedChunk& chunk);

// True iff the chunk has no covered pixels. Skipped chunks still add total_pixels
// to the file ledger.
bool is_skippable(const PaddedChunk& chunk);

} // namespace canopy

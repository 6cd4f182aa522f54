// SPDX-License-Identifier: Apache-2.0
#include "canopy/tiling.hpp"

#include <algorithm>
#include <cstring>

#include "canopy/error.hpp"

namespace canopy {

ChunkGrid plan_grid(std::uint32_t page_width, std::uint32_t page_height,
                    std::uint32_t chunk_size) {
    if (page_width == 0 || page_height == 0 || chunk_size == 0)
        throw Error(ErrorCode::ZeroDimension,
                    "grid over " + std::to_string(page_width) + "x" +
                        std::to_string(page_height) + " with chunk size " +
                        std::to_string(chunk_size));
    ChunkGrid grid;
    grid.page_width = page_width;
    grid.page_height = page_height;
    grid.chunk_size = chunk_size;
    grid.rows = (page_height + chunk_size - 1) / chunk_size;
    grid.cols = (page_width + chunk_size - 1) / chunk_size;
    return grid;
}

ChunkRef make_chunk_ref(const ChunkGrid& grid, const std::string& file_name,
                        std::uint32_t row, std::uint32_t col) {
    if (row >= grid.rows || col >= grid.cols)
        throw Error(ErrorCode::ZeroDimension,
                    "chunk (" + std::to_string(row) + "," + std::to_string(col) +
                        ") outside a " + std::to_string(grid.rows) + "x" +
                        std::to_string(grid.cols) + " grid");
    ChunkRef ref;
    ref.file_name = file_name;
    ref.row = row;
    ref.col = col;
    ref.x0 = col * grid.chunk_size;
    ref.y0 = row * grid.chunk_size;
    ref.in_width = std::min(grid.chunk_size, grid.page_width - ref.x0);
    ref.in_height = std::min(grid.chunk_size, grid.page_height - ref.y0);
    return ref;
}

PaddedChunk extract_chunk(const tiff::PageDescriptor& page, const ChunkRef& ref,
                          std::uint32_t chunk_size) {
    PaddedChunk chunk;
    chunk.ref = ref;
    chunk.chunk_size = chunk_size;
    chunk.pixels.assign(std::size_t(chunk_size) * chunk_size * 3, 0);

    tiff::RasterWindow window =
        tiff::decode_window(page, ref.x0, ref.y0, ref.in_width, ref.in_height);
    const std::size_t src_row_bytes = std::size_t(ref.in_width) * 3;
    for (std::uint32_t y = 0; y < ref.in_height; ++y)
        std::memcpy(chunk.pixels.data() + std::size_t(y) * chunk_size * 3,
                    window.pixels.data() + std::size_t(y) * src_row_bytes, src_row_bytes);
    return chunk;
}

PixelAccount account_chunk(const PaddedChunk& chunk) {
    PixelAccount account;
    account.total_pixels = std::uint64_t(chunk.ref.in_width) * chunk.ref.in_height;
    for (std::uint32_t y = 0; y < chunk.ref.in_height; ++y) {
        const std::uint8_t* row =
            chunk.pixels.data() + std::size_t(y) * chunk.chunk_size * 3;
        for (std::uint32_t x = 0; x < chunk.ref.in_width; ++x) {
            const std::uint8_t* p = row + std::size_t(x) * 3;
            if (p[0] | p[1] | p[2])
                ++account.covered_pixels;
        }
    }
    return account;
}

bool is_skippable(const PaddedChunk& chunk) {
    for (std::uint32_t y = 0; y < chunk.ref.in_height; ++y) {
        const std::uint8_t* row =
            chunk.pixels.data() + std::size_t(y) * chunk.chunk_size * 3;
        for (std::uint32_t x = 0; x < chunk.ref.in_width; ++x) {
            const std::uint8_t* p = row + std::size_t(x) * 3;
            if (p[0] | p[1] | p[2])
                return false;
        }
    }
    return true;
}

} // namespace canopy

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "canopy/byte_source.hpp"

namespace canopy::tiff {

enum class ByteOrder { little, big };
enum class Variant { classic, bigtiff };
enum class Compression { none, lzw, deflate };

const char* byte_order_name(ByteOrder order);
const char* variant_name(Variant variant);
const char* compression_name(Compression compression);

// Ground meters per pixel, from GeoTIFF ModelPixelScale (tag 33550).
struct PixelScale {
    double sx = 0.0;
    double sy = 0.0;
};

struct ContainerInfo {
    std::string path;
    ByteOrder byte_order = ByteOrder::little;
    Variant variant = Variant::classic;
    std::vector<std::uint64_t> page_offsets; // IFD offsets, chain order
    std::shared_ptr<const ByteSource> source;

    std::uint32_t page_count() const { return static_cast<std::uint32_t>(page_offsets.size()); }
};

struct SegmentLayout {
    bool tiled = false;
    std::uint32_t rows_per_strip = 0; // strips only
    std::uint32_t tile_width = 0;     // tiles only
    std::uint32_t tile_height = 0;
};

// One page ("band" in pipeline terms), fully resolved for windowed decoding.
// Immutable after read_page; safe to share across threads.
struct PageDescriptor {
    std::uint32_t index = 0;
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::uint16_t samples_per_pixel = 0;
    std::uint16_t bits_per_sample = 0;
    Compression compression = Compression::none;
    SegmentLayout layout;
    std::vector<std::uint64_t> segment_offsets;
    std::vector<std::uint64_t> segment_byte_counts;
    std::optional<PixelScale> geo_scale;
    std::shared_ptr<const ByteSource> source;

    std::uint64_t total_pixels() const {
        return std::uint64_t(width) * std::uint64_t(height);
    }
};

// Row-major 8-bit RGB pixels of a page sub-rectangle.
struct RasterWindow {
    std::uint32_t x0 = 0;
    std::uint32_t y0 = 0;
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::vector<std::uint8_t> pixels; // width*height*3

    const std::uint8_t* pixel(std::uint32_t x, std::uint32_t y) const {
        return pixels.data() + (std::size_t(y) * width + x) * 3;
    }
};

// Validates the header and walks the IFD chain; reads no pixel data.
ContainerInfo open_container(const std::filesystem::path& path);
ContainerInfo open_container(std::shared_ptr<const ByteSource> source,
                             std::string display_name = "<memory>");

// Resolves every tag needed for decoding. geo_scale is set iff tag 33550
// is present with positive x/y scales.
PageDescriptor read_page(const ContainerInfo& container, std::uint32_t index);

// Pages model the pipeline's bands; 0-based, default 2.
PageDescriptor select_band(const ContainerInfo& container, std::uint32_t band = 2);

// Decompresses exactly the segments overlapping the window. One source read
// per touched segment; scratch memory is one segment plus the window.
RasterWindow decode_window(const PageDescriptor& page, std::uint32_t x0,
                           std::uint32_t y0, std::uint32_t width,
                           std::uint32_t height);

// Analytic segment geometry (also the instrumentation oracle).
std::uint64_t segment_count(const PageDescriptor& page);
std::uint64_t segments_overlapping(const PageDescriptor& page, std::uint32_t x0,
                                   std::uint32_t y0, std::uint32_t width,
                                   std::uint32_t height);

} // namespace canopy::tiff

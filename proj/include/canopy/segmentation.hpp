// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "canopy/tiling.hpp"

namespace canopy {

class Store;

inline constexpr int kDefaultTau = 40;

// Per-chunk binary canopy labeling. Imported masks may mark padding pixels;
// accounting later intersects with in-bounds covered pixels.
struct CanopyMask {
    ChunkRef ref;
    std::uint32_t chunk_size = kDefaultChunkSize;
    std::vector<std::uint8_t> bits; // chunk_size * chunk_size, 0 or 1

    bool at(std::uint32_t x, std::uint32_t y) const {
        return bits[std::size_t(y) * chunk_size + x] != 0;
    }
};

// Normalized center-format rectangle, `classId cx cy w h [confidence]`.
struct DetectionBox {
    long class_id = 0;
    double cx = 0;
    double cy = 0;
    double w = 0;
    double h = 0;
    std::optional<double> confidence;
};

enum class EstimatorKind { threshold, mask_import, box_import };

const char* estimator_kind_name(EstimatorKind kind);
EstimatorKind estimator_kind_from_name(const std::string& name);

// Everything that changes what an estimator marks; recorded in manifests so a
// resumed run can tell whether stored results still apply.
struct EstimatorConfig {
    EstimatorKind kind = EstimatorKind::threshold;
    int tau = kDefaultTau;
    std::optional<double> confidence_floor;

    bool operator==(const EstimatorConfig&) const = default;
};

// Marks in-bounds covered pixels whose excess green 2G - R - B exceeds tau.
CanopyMask segment_threshold(const PaddedChunk& chunk, int tau = kDefaultTau);

// Loads the stored mask for ref; nonzero stored pixel = canopy.
CanopyMask import_mask(const Store& store, const ChunkRef& ref,
                       std::uint32_t chunk_size = kDefaultChunkSize);

// Parses `classId cx cy w h [confidence]` lines; cx/cy/w/h/confidence clamped to
// their unit ranges; a line that cannot yield a box is an error, not a skip.
std::vector<DetectionBox> parse_detections(const std::string& text);

// Union of the boxes' pixel rectangles. Edges map through
// round(chunk_size * coordinate), half away from zero, right/bottom exclusive.
CanopyMask rasterize_boxes(const std::vector<DetectionBox>& boxes, const ChunkRef& ref,
                           std::uint32_t chunk_size = kDefaultChunkSize);

} // namespace canopy

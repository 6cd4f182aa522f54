// SPDX-License-Identifier: Apache-2.0
#include "canopy/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "canopy/error.hpp"
#include "canopy/store.hpp"

namespace canopy {

namespace {

double clamp_unit(double v) { return std::clamp(v, 0.0, 1.0); }

// round(chunk_size * t), half away from zero, clamped to [0, chunk_size]
std::uint32_t edge_to_pixel(double t, std::uint32_t chunk_size) {
    long long p = std::llround(double(chunk_size) * t);
    return static_cast<std::uint32_t>(std::clamp<long long>(p, 0, chunk_size));
}

} // namespace

const char* estimator_kind_name(EstimatorKind kind) {
    switch (kind) {
        case EstimatorKind::threshold: return "threshold";
        case EstimatorKind::mask_import: return "mask";
        case EstimatorKind::box_import: return "boxes";
    }
    return "?";
}

EstimatorKind estimator_kind_from_name(const std::string& name) {
    if (name == "threshold") return EstimatorKind::threshold;
    if (name == "mask") return EstimatorKind::mask_import;
    if (name == "boxes") return EstimatorKind::box_import;
    throw Error(ErrorCode::InvalidConfig, "unknown estimator '" + name + "'");
}

CanopyMask segment_threshold(const PaddedChunk& chunk, int tau) {
    if (tau < -510 || tau > 510)
        throw Error(ErrorCode::InvalidConfig,
                    "tau " + std::to_string(tau) + " outside [-510, 510]");
    CanopyMask mask;
    mask.ref = chunk.ref;
    mask.chunk_size = chunk.chunk_size;
    mask.bits.assign(std::size_t(chunk.chunk_size) * chunk.chunk_size, 0);
    for (std::uint32_t y = 0; y < chunk.ref.in_height; ++y) {
        for (std::uint32_t x = 0; x < chunk.ref.in_width; ++x) {
            const std::uint8_t* p = chunk.pixel(x, y);
            if ((p[0] | p[1] | p[2]) == 0)
                continue;
            int exg = 2 * int(p[1]) - int(p[0]) - int(p[2]);
            if (exg > tau)
                mask.bits[std::size_t(y) * mask.chunk_size + x] = 1;
        }
    }
    return mask;
}

CanopyMask import_mask(const Store& store, const ChunkRef& ref, std::uint32_t chunk_size) {
    GrayImage image = store.read_mask(ref.file_name, ref.row, ref.col);
    if (image.width != chunk_size || image.height != chunk_size)
        throw Error(ErrorCode::MaskShapeMismatch,
                    "stored mask is " + std::to_string(image.width) + "x" +
                        std::to_string(image.height) + ", chunk is " +
                        std::to_string(chunk_size) + "x" + std::to_string(chunk_size));
    CanopyMask mask;
    mask.ref = ref;
    mask.chunk_size = chunk_size;
    mask.bits.resize(image.pixels.size());
    for (std::size_t i = 0; i < image.pixels.size(); ++i)
        mask.bits[i] = image.pixels[i] != 0 ? 1 : 0;
    return mask;
}

std::vector<DetectionBox> parse_detections(const std::string& text) {
    std::vector<DetectionBox> boxes;
    std::istringstream lines(text);
    std::string line;
    std::uint64_t line_number = 0;
    while (std::getline(lines, line)) {
        ++line_number;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        std::istringstream fields(line);
        DetectionBox box;
        double conf = 0;
        if (!(fields >> box.class_id >> box.cx >> box.cy >> box.w >> box.h))
            throw Error(ErrorCode::MalformedLine,
                        "line " + std::to_string(line_number) +
                            ": expected `classId cx cy w h [confidence]`");
        if (fields >> conf)
            box.confidence = clamp_unit(conf);
        std::string trailing;
        if (fields >> trailing)
            throw Error(ErrorCode::MalformedLine,
                        "line " + std::to_string(line_number) + ": trailing field '" +
                            trailing + "'");
        box.cx = clamp_unit(box.cx);
        box.cy = clamp_unit(box.cy);
        box.w = std::min(box.w, 1.0);
        box.h = std::min(box.h, 1.0);
        if (!(box.w > 0) || !(box.h > 0))
            throw Error(ErrorCode::MalformedLine,
                        "line " + std::to_string(line_number) + ": nonpositive box size");
        boxes.push_back(box);
    }
    return boxes;
}

CanopyMask rasterize_boxes(const std::vector<DetectionBox>& boxes, const ChunkRef& ref,
                           std::uint32_t chunk_size) {
    CanopyMask mask;
    mask.ref = ref;
    mask.chunk_size = chunk_size;
    mask.bits.assign(std::size_t(chunk_size) * chunk_size, 0);
    for (const DetectionBox& box : boxes) {
        std::uint32_t left = edge_to_pixel(box.cx - box.w / 2, chunk_size);
        std::uint32_t right = edge_to_pixel(box.cx + box.w / 2, chunk_size);
        std::uint32_t top = edge_to_pixel(box.cy - box.h / 2, chunk_size);
        std::uint32_t bottom = edge_to_pixel(box.cy + box.h / 2, chunk_size);
        for (std::uint32_t y = top; y < bottom; ++y)
            std::fill(mask.bits.begin() + std::size_t(y) * chunk_size + left,
                      mask.bits.begin() + std::size_t(y) * chunk_size + right,
                      std::uint8_t(1));
    }
    return mask;
}

} // namespace canopy

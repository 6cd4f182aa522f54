// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "canopy/png_io.hpp"
#include "canopy/segmentation.hpp"
#include "canopy/tiling.hpp"

namespace canopy {

struct ManifestChunk {
    std::uint32_t row = 0;
    std::uint32_t col = 0;
    std::uint32_t in_width = 0;
    std::uint32_t in_height = 0;
    std::uint64_t covered_pixels = 0;
    std::uint64_t canopy_pixels = 0;
    bool skipped = false;

    bool operator==(const ManifestChunk&) const = default;
};

// Per-file audit record; entry count must equal rows * cols.
struct Manifest {
    std::string file_name;
    std::uint32_t page_index = 0;
    std::uint32_t page_width = 0;
    std::uint32_t page_height = 0;
    std::uint32_t chunk_size = kDefaultChunkSize;
    std::uint32_t rows = 0;
    std::uint32_t cols = 0;
    EstimatorConfig estimator;
    std::vector<ManifestChunk> chunks;

    bool operator==(const Manifest&) const = default;
};

// Filesystem artifact layout:
//   <root>/<fileName>/{chunks,masks,detections,overlays,reports}/
//   <root>/<fileName>/manifest.json
//   <root>/reports/
// Chunk-level artifacts are named r<RRRRR>_c<CCCCC> with 5-digit indices.
// All writes go through a temp file plus rename, so readers never see a
// partially written artifact.
class Store {
public:
    explicit Store(std::filesystem::path root);

    const std::filesystem::path& root() const { return root_; }

    static std::string artifact_stem(std::uint32_t row, std::uint32_t col);

    std::filesystem::path file_dir(const std::string& file_name) const;
    std::filesystem::path chunk_path(const std::string& file_name, std::uint32_t row,
                                     std::uint32_t col) const;
    std::filesystem::path mask_path(const std::string& file_name, std::uint32_t row,
                                    std::uint32_t col) const;
    std::filesystem::path detections_path(const std::string& file_name, std::uint32_t row,
                                          std::uint32_t col) const;
    std::filesystem::path overlay_path(const std::string& file_name, std::uint32_t row,
                                       std::uint32_t col) const;
    std::filesystem::path manifest_path(const std::string& file_name) const;
    std::filesystem::path file_reports_dir(const std::string& file_name) const;
    std::filesystem::path run_reports_dir() const;

    std::filesystem::path write_chunk(const PaddedChunk& chunk) const;
    RgbImage read_chunk(const std::string& file_name, std::uint32_t row,
                        std::uint32_t col) const;

    std::filesystem::path write_mask(const CanopyMask& mask) const;
    GrayImage read_mask(const std::string& file_name, std::uint32_t row,
                        std::uint32_t col) const;

    std::filesystem::path write_overlay(const PaddedChunk& chunk, const CanopyMask& mask,
                                        double alpha = 0.4) const;

    std::filesystem::path write_detections(const std::string& file_name, std::uint32_t row,
                                           std::uint32_t col, const std::string& text) const;
    // Absent file means "no detections for this chunk", not an error.
    std::optional<std::string> read_detections(const std::string& file_name,
                                               std::uint32_t row, std::uint32_t col) const;

    std::filesystem::path write_manifest(const Manifest& manifest) const;
    bool has_manifest(const std::string& file_name) const;
    Manifest read_manifest(const std::string& file_name) const;

    std::filesystem::path write_text(const std::filesystem::path& path,
                                     const std::string& text) const;
    std::filesystem::path write_bytes(const std::filesystem::path& path,
                                      const std::vector<std::uint8_t>& bytes) const;

private:
    std::filesystem::path root_;
};

} // namespace canopy

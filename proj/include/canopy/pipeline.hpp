// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "canopy/metrics.hpp"
#include "canopy/store.hpp"
#include "canopy/tiff_reader.hpp"

namespace canopy {

struct RunConfig {
    std::vector<std::filesystem::path> input_paths;
    std::uint32_t band = 2;
    std::uint32_t chunk_size = kDefaultChunkSize;
    EstimatorConfig estimator;
    std::filesystem::path store_root;
    unsigned worker_count = 1;
    bool write_overlays = false;
    double overlay_alpha = 0.4;
};

struct FileRunResult {
    FileCoverageRow row;
    std::optional<tiff::PixelScale> geo_scale;
    std::uint64_t chunk_count = 0;
    std::uint64_t skipped_chunks = 0;
    bool resumed = false;
};

struct FileFailure {
    std::string input;
    std::string message;
    int exit_code = 1;
};

struct RunResult {
    std::vector<FileRunResult> files;
    std::vector<FileFailure> failures;
    std::optional<OverallSummary> summary;
    std::filesystem::path csv_path;
    std::filesystem::path summary_path;

    bool all_succeeded() const { return failures.empty(); }
};

// Chunks one page through the configured estimator and writes every artifact
// for that file. A manifest matching the run configuration short-circuits the
// whole decode (resume); outputs are identical for any worker count.
FileRunResult run_file(const Store& store, const tiff::ContainerInfo& container,
                       const RunConfig& config, std::ostream* progress = nullptr);

// Full pipeline over config.input_paths; per-file failures are collected, not
// fatal. Writes <root>/reports/coverage.csv and <root>/reports/summary.json.
RunResult run_pipeline(const RunConfig& config, std::ostream* progress = nullptr);

// Estimator name and headline canopy percent of a completed run's store.
struct RunSummaryInfo {
    std::string estimator_name;
    double canopy_percent = 0;
};

RunSummaryInfo read_run_summary(const std::filesystem::path& store_root);

} // namespace canopy

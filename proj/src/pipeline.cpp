// SPDX-License-Identifier: Apache-2.0
#include "canopy/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "canopy/error.hpp"

namespace canopy {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

struct ChunkOutcome {
    PixelAccount account;
    std::uint64_t canopy_pixels = 0;
    std::uint32_t in_width = 0;
    std::uint32_t in_height = 0;
    bool skipped = false;
};

double round_2dp(double v) { return std::llround(v * 100.0) / 100.0; }

ordered_json percent_or_null(const std::optional<double>& v) {
    return v ? ordered_json(round_2dp(*v)) : ordered_json(nullptr);
}

std::string input_file_name(const std::string& container_path) {
    std::string stem = fs::path(container_path).stem().string();
    return stem.empty() ? "input" : stem;
}

void validate_config(const RunConfig& config) {
    if (config.input_paths.empty())
        throw Error(ErrorCode::EmptyInput, "no input files");
    if (config.worker_count < 1)
        throw Error(ErrorCode::InvalidConfig, "worker count must be >= 1");
    if (config.chunk_size < 1)
        throw Error(ErrorCode::InvalidConfig, "chunk size must be >= 1");
    if (config.estimator.tau < -510 || config.estimator.tau > 510)
        throw Error(ErrorCode::InvalidConfig,
                    "tau " + std::to_string(config.estimator.tau) +
                        " outside [-510, 510]");
    if (config.estimator.confidence_floor &&
        !(*config.estimator.confidence_floor >= 0.0 &&
          *config.estimator.confidence_floor <= 1.0))
        throw Error(ErrorCode::InvalidConfig, "confidence floor outside [0, 1]");
    if (!(config.overlay_alpha >= 0.0 && config.overlay_alpha <= 1.0))
        throw Error(ErrorCode::InvalidConfig, "overlay alpha outside [0, 1]");
}

CanopyMask apply_estimator(const Store& store, const PaddedChunk& chunk,
                           const RunConfig& config) {
    switch (config.estimator.kind) {
        case EstimatorKind::threshold:
            return segment_threshold(chunk, config.estimator.tau);
        case EstimatorKind::mask_import:
            return import_mask(store, chunk.ref, chunk.chunk_size);
        case EstimatorKind::box_import: {
            std::vector<DetectionBox> boxes;
            if (auto text = store.read_detections(chunk.ref.file_name, chunk.ref.row,
                                                  chunk.ref.col))
                boxes = parse_detections(*text);
            if (config.estimator.confidence_floor) {
                double floor = *config.estimator.confidence_floor;
                std::erase_if(boxes, [floor](const DetectionBox& b) {
                    return b.confidence && *b.confidence < floor;
                });
            }
            return rasterize_boxes(boxes, chunk.ref, chunk.chunk_size);
        }
    }
    throw Error(ErrorCode::InvalidConfig, "unhandled estimator kind");
}

bool manifest_matches(const Manifest& m, const RunConfig& config,
                      const tiff::PageDescriptor& page, const ChunkGrid& grid) {
    return m.page_index == config.band && m.page_width == page.width &&
           m.page_height == page.height && m.chunk_size == config.chunk_size &&
           m.rows == grid.rows && m.cols == grid.cols &&
           m.estimator == config.estimator;
}

FileRunResult result_from_manifest(const Manifest& m) {
    FileRunResult result;
    result.resumed = true;
    result.chunk_count = m.chunks.size();
    std::vector<PixelAccount> accounts;
    std::vector<std::uint64_t> counts;
    accounts.reserve(m.chunks.size());
    counts.reserve(m.chunks.size());
    for (const ManifestChunk& c : m.chunks) {
        accounts.push_back({std::uint64_t(c.in_width) * c.in_height, c.covered_pixels});
        counts.push_back(c.canopy_pixels);
        if (c.skipped)
            ++result.skipped_chunks;
    }
    result.row = file_report(m.file_name, accounts, counts);
    return result;
}

void write_file_report(const Store& store, const FileCoverageRow& row) {
    store.write_text(store.file_reports_dir(row.file_name) / "coverage.csv",
                     coverage_csv({row}));
}

} // namespace

FileRunResult run_file(const Store& store, const tiff::ContainerInfo& container,
                       const RunConfig& config, std::ostream* progress) {
    const std::string file_name = input_file_name(container.path);
    const tiff::PageDescriptor page = tiff::select_band(container, config.band);
    const ChunkGrid grid = plan_grid(page.width, page.height, config.chunk_size);

    if (store.has_manifest(file_name)) {
        Manifest existing = store.read_manifest(file_name);
        if (manifest_matches(existing, config, page, grid)) {
            FileRunResult result = result_from_manifest(existing);
            result.geo_scale = page.geo_scale;
            write_file_report(store, result.row);
            if (progress)
                *progress << file_name << ": manifest matches, resuming without decode\n";
            return result;
        }
    }

    const std::uint64_t n = grid.chunk_count();
    std::vector<ChunkOutcome> outcomes(static_cast<std::size_t>(n));
    std::atomic<std::uint64_t> next{0};
    std::atomic<std::uint64_t> done{0};
    std::atomic<bool> stop{false};
    std::mutex error_mutex;
    std::exception_ptr first_error;

    auto worker = [&] {
        try {
            while (!stop.load(std::memory_order_relaxed)) {
                std::uint64_t idx = next.fetch_add(1);
                if (idx >= n)
                    break;
                std::uint32_t row = static_cast<std::uint32_t>(idx / grid.cols);
                std::uint32_t col = static_cast<std::uint32_t>(idx % grid.cols);
                ChunkRef ref = make_chunk_ref(grid, file_name, row, col);
                PaddedChunk chunk = extract_chunk(page, ref, config.chunk_size);
                ChunkOutcome& out = outcomes[static_cast<std::size_t>(idx)];
                out.account = account_chunk(chunk);
                out.in_width = ref.in_width;
                out.in_height = ref.in_height;
                if (out.account.covered_pixels == 0) {
                    out.skipped = true;
                } else {
                    store.write_chunk(chunk);
                    CanopyMask mask = apply_estimator(store, chunk, config);
                    out.canopy_pixels = canopy_count(mask, chunk);
                    if (config.estimator.kind != EstimatorKind::mask_import)
                        store.write_mask(mask);
                    if (config.write_overlays)
                        store.write_overlay(chunk, mask, config.overlay_alpha);
                }
                done.fetch_add(1);
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error)
                first_error = std::current_exception();
            stop.store(true);
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(config.worker_count);
    for (unsigned i = 0; i < config.worker_count; ++i)
        pool.emplace_back(worker);
    if (progress) {
        while (done.load() < n && !stop.load()) {
            *progress << "\r" << file_name << ": " << done.load() << "/" << n
                      << " chunks" << std::flush;
            std::this_thread::sleep_for(std::chrono::milliseconds(200));
        }
    }
    for (std::thread& t : pool)
        t.join();
    if (first_error)
        std::rethrow_exception(first_error);
    if (progress)
        *progress << "\r" << file_name << ": " << n << "/" << n << " chunks\n";

    Manifest manifest;
    manifest.file_name = file_name;
    manifest.page_index = config.band;
    manifest.page_width = page.width;
    manifest.page_height = page.height;
    manifest.chunk_size = config.chunk_size;
    manifest.rows = grid.rows;
    manifest.cols = grid.cols;
    manifest.estimator = config.estimator;
    manifest.chunks.reserve(outcomes.size());

    FileRunResult result;
    result.chunk_count = n;
    result.geo_scale = page.geo_scale;
    std::vector<PixelAccount> accounts;
    std::vector<std::uint64_t> counts;
    accounts.reserve(outcomes.size());
    counts.reserve(outcomes.size());
    for (std::uint64_t idx = 0; idx < n; ++idx) {
        const ChunkOutcome& out = outcomes[static_cast<std::size_t>(idx)];
        ManifestChunk entry;
        entry.row = static_cast<std::uint32_t>(idx / grid.cols);
        entry.col = static_cast<std::uint32_t>(idx % grid.cols);
        entry.in_width = out.in_width;
        entry.in_height = out.in_height;
        entry.covered_pixels = out.account.covered_pixels;
        entry.canopy_pixels = out.canopy_pixels;
        entry.skipped = out.skipped;
        manifest.chunks.push_back(entry);
        accounts.push_back(out.account);
        counts.push_back(out.canopy_pixels);
        if (out.skipped)
            ++result.skipped_chunks;
    }
    store.write_manifest(manifest);
    result.row = file_report(file_name, accounts, counts);
    write_file_report(store, result.row);
    return result;
}

RunResult run_pipeline(const RunConfig& config, std::ostream* progress) {
    validate_config(config);
    Store store(config.store_root);

    RunResult result;
    for (const fs::path& input : config.input_paths) {
        try {
            tiff::ContainerInfo container = tiff::open_container(input);
            result.files.push_back(run_file(store, container, config, progress));
        } catch (const Error& e) {
            result.failures.push_back({input.string(), e.what(), exit_class(e.code())});
            if (progress)
                *progress << input.string() << ": FAILED: " << e.what() << "\n";
        } catch (const std::exception& e) {
            result.failures.push_back({input.string(), e.what(), 1});
            if (progress)
                *progress << input.string() << ": FAILED: " << e.what() << "\n";
        }
    }

    std::vector<FileCoverageRow> rows;
    rows.reserve(result.files.size());
    for (const FileRunResult& f : result.files)
        rows.push_back(f.row);

    result.csv_path = store.run_reports_dir() / "coverage.csv";
    store.write_text(result.csv_path, coverage_csv(rows));

    if (!rows.empty())
        result.summary = aggregate(rows);

    ordered_json j;
    j["band"] = config.band;
    j["chunkSize"] = config.chunk_size;
    ordered_json estimator;
    estimator["kind"] = estimator_kind_name(config.estimator.kind);
    estimator["tau"] = config.estimator.tau;
    if (config.estimator.confidence_floor)
        estimator["confidenceFloor"] = *config.estimator.confidence_floor;
    else
        estimator["confidenceFloor"] = nullptr;
    j["estimator"] = estimator;
    j["fileCount"] = config.input_paths.size();
    j["failedCount"] = result.failures.size();
    if (result.summary) {
        j["totalPixels"] = result.summary->total_pixels;
        j["coveredPixels"] = result.summary->covered_pixels;
        j["segmentationPixels"] = result.summary->segmentation_pixels;
        j["areaCoveredPercent"] = round_2dp(result.summary->area_covered_percent());
        j["canopyPercent"] = percent_or_null(result.summary->canopy_percent());
    } else {
        j["totalPixels"] = nullptr;
        j["coveredPixels"] = nullptr;
        j["segmentationPixels"] = nullptr;
        j["areaCoveredPercent"] = nullptr;
        j["canopyPercent"] = nullptr;
    }
    j["files"] = ordered_json::array();
    for (const FileRunResult& f : result.files) {
        ordered_json entry;
        entry["fileName"] = f.row.file_name;
        entry["totalPixels"] = f.row.total_pixels;
        entry["coveredPixels"] = f.row.covered_pixels;
        entry["segmentationPixels"] = f.row.segmentation_pixels;
        entry["coverPercentage"] = round_2dp(f.row.cover_percentage());
        entry["segmentationPercentage"] = percent_or_null(f.row.segmentation_percentage());
        entry["chunkCount"] = f.chunk_count;
        entry["skippedChunks"] = f.skipped_chunks;
        entry["resumed"] = f.resumed;
        if (f.geo_scale) {
            Area canopy_area = pixels_to_area(f.row.segmentation_pixels, f.geo_scale);
            entry["canopyAreaSquareMeters"] = canopy_area.square_meters;
            entry["canopyAreaAcres"] = canopy_area.acres;
        }
        j["files"].push_back(std::move(entry));
    }
    j["failures"] = ordered_json::array();
    for (const FileFailure& failure : result.failures) {
        ordered_json entry;
        entry["input"] = failure.input;
        entry["error"] = failure.message;
        j["failures"].push_back(std::move(entry));
    }
    result.summary_path = store.run_reports_dir() / "summary.json";
    store.write_text(result.summary_path, j.dump(2) + "\n");
    return result;
}

RunSummaryInfo read_run_summary(const fs::path& store_root) {
    fs::path path = store_root / "reports" / "summary.json";
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::MissingRun, "no run summary at " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    try {
        ordered_json j = ordered_json::parse(text.str());
        if (j.at("canopyPercent").is_null())
            throw Error(ErrorCode::MissingRun,
                        path.string() + " has no canopy percentage");
        RunSummaryInfo info;
        info.estimator_name = j.at("estimator").at("kind").get<std::string>();
        info.canopy_percent = j.at("canopyPercent").get<double>();
        return info;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::MissingRun, path.string() + ": " + e.what());
    }
}

} // namespace canopy

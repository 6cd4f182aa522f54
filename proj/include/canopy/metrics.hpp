// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "canopy/segmentation.hpp"
#include "canopy/tiff_reader.hpp"
#include "canopy/tiling.hpp"

namespace canopy {

// Per-file ledger row. Percentages are derived from the integer counts;
// segmentation_percentage is undefined while covered_pixels is zero.
struct FileCoverageRow {
    std::string file_name;
    std::uint64_t total_pixels = 0;
    std::uint64_t covered_pixels = 0;
    std::uint64_t segmentation_pixels = 0;

    double cover_percentage() const;
    std::optional<double> segmentation_percentage() const;
};

// Cross-file sums; ratios always come from the sums, never from row percentages.
struct OverallSummary {
    std::uint64_t total_pixels = 0;
    std::uint64_t covered_pixels = 0;
    std::uint64_t segmentation_pixels = 0;

    double area_covered_percent() const;
    std::optional<double> canopy_percent() const;
};

struct ComparisonRow {
    std::string site_name;
    double ground_truth_percent = 0;
    std::vector<std::pair<std::string, double>> estimates; // estimator name -> percent

    double delta(std::size_t i) const {
        return estimates[i].second - ground_truth_percent;
    }
};

struct Area {
    double square_meters = 0;
    double acres = 0;
};

inline constexpr char kCoverageCsvHeader[] =
    "fileName,totalPixels,coveredPixels,segmentationPixels,coverPercentage,"
    "segmentationPercentage";

// Pixels that are mask-true, in-bounds, and covered at once.
std::uint64_t canopy_count(const CanopyMask& mask, const PaddedChunk& chunk);

// Sums aligned per-chunk accounts and canopy counts into one ledger row.
FileCoverageRow file_report(const std::string& file_name,
                            const std::vector<PixelAccount>& accounts,
                            const std::vector<std::uint64_t>& canopy_counts);

OverallSummary aggregate(const std::vector<FileCoverageRow>& rows);

ComparisonRow compare_estimates(const std::string& site_name, double ground_truth_percent,
                                std::vector<std::pair<std::string, double>> estimates);

Area pixels_to_area(std::uint64_t count, const std::optional<tiff::PixelScale>& scale);

// Display formatting: half-up to 2 decimals, sign preserved; absent values as "NaN".
std::string format_percent(double value);
std::string format_percent(const std::optional<double>& value);

std::string csv_line(const FileCoverageRow& row);
std::string coverage_csv(const std::vector<FileCoverageRow>& rows);
std::string comparison_csv(const ComparisonRow& row);

} // namespace canopy

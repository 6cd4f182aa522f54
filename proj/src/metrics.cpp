// SPDX-License-Identifier: Apache-2.0
#include "canopy/metrics.hpp"

#include <cmath>
#include <cstdio>

#include "canopy/error.hpp"

namespace canopy {

namespace {

constexpr double kSquareMetersPerAcre = 4046.8564224;

std::string format_hundredths(long long hundredths, bool forced_sign) {
    unsigned long long mag = hundredths < 0
                                 ? static_cast<unsigned long long>(-hundredths)
                                 : static_cast<unsigned long long>(hundredths);
    const char* sign = hundredths < 0 ? "-" : (forced_sign ? "+" : "");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%s%llu.%02llu", sign, mag / 100, mag % 100);
    return buf;
}

void require_percent_range(double value, const char* what) {
    if (!(value >= 0.0 && value <= 100.0))
        throw Error(ErrorCode::InvalidConfig,
                    std::string(what) + " " + std::to_string(value) +
                        " outside [0, 100]");
}

} // namespace

double FileCoverageRow::cover_percentage() const {
    return total_pixels == 0 ? 0.0
                             : 100.0 * double(covered_pixels) / double(total_pixels);
}

std::optional<double> FileCoverageRow::segmentation_percentage() const {
    if (covered_pixels == 0)
        return std::nullopt;
    return 100.0 * double(segmentation_pixels) / double(covered_pixels);
}

double OverallSummary::area_covered_percent() const {
    return total_pixels == 0 ? 0.0
                             : 100.0 * double(covered_pixels) / double(total_pixels);
}

std::optional<double> OverallSummary::canopy_percent() const {
    if (covered_pixels == 0)
        return std::nullopt;
    return 100.0 * double(segmentation_pixels) / double(covered_pixels);
}

std::uint64_t canopy_count(const CanopyMask& mask, const PaddedChunk& chunk) {
    if (!(mask.ref == chunk.ref) || mask.chunk_size != chunk.chunk_size)
        throw Error(ErrorCode::RefMismatch,
                    "mask for (" + std::to_string(mask.ref.row) + "," +
                        std::to_string(mask.ref.col) + ") applied to chunk (" +
                        std::to_string(chunk.ref.row) + "," +
                        std::to_string(chunk.ref.col) + ")");
    std::uint64_t count = 0;
    for (std::uint32_t y = 0; y < chunk.ref.in_height; ++y) {
        for (std::uint32_t x = 0; x < chunk.ref.in_width; ++x) {
            if (!mask.at(x, y))
                continue;
            const std::uint8_t* p = chunk.pixel(x, y);
            if (p[0] | p[1] | p[2])
                ++count;
        }
    }
    return count;
}

FileCoverageRow file_report(const std::string& file_name,
                            const std::vector<PixelAccount>& accounts,
                            const std::vector<std::uint64_t>& canopy_counts) {
    if (accounts.size() != canopy_counts.size())
        throw Error(ErrorCode::InvalidConfig,
                    "account list length " + std::to_string(accounts.size()) +
                        " != canopy list length " + std::to_string(canopy_counts.size()));
    FileCoverageRow row;
    row.file_name = file_name;
    for (std::size_t i = 0; i < accounts.size(); ++i) {
        row.total_pixels += accounts[i].total_pixels;
        row.covered_pixels += accounts[i].covered_pixels;
        row.segmentation_pixels += canopy_counts[i];
    }
    return row;
}

OverallSummary aggregate(const std::vector<FileCoverageRow>& rows) {
    if (rows.empty())
        throw Error(ErrorCode::EmptyInput, "no coverage rows to aggregate");
    OverallSummary summary;
    for (const FileCoverageRow& row : rows) {
        summary.total_pixels += row.total_pixels;
        summary.covered_pixels += row.covered_pixels;
        summary.segmentation_pixels += row.segmentation_pixels;
    }
    return summary;
}

ComparisonRow compare_estimates(const std::string& site_name, double ground_truth_percent,
                                std::vector<std::pair<std::string, double>> estimates) {
    require_percent_range(ground_truth_percent, "ground truth");
    for (const auto& [name, value] : estimates)
        require_percent_range(value, name.c_str());
    ComparisonRow row;
    row.site_name = site_name;
    row.ground_truth_percent = ground_truth_percent;
    row.estimates = std::move(estimates);
    return row;
}

Area pixels_to_area(std::uint64_t count, const std::optional<tiff::PixelScale>& scale) {
    if (!scale)
        throw Error(ErrorCode::MissingScale, "page carries no pixel-scale tag");
    Area area;
    area.square_meters = double(count) * scale->sx * scale->sy;
    area.acres = area.square_meters / kSquareMetersPerAcre;
    return area;
}

std::string format_percent(double value) {
    return format_hundredths(std::llround(value * 100.0), false);
}

std::string format_percent(const std::optional<double>& value) {
    return value ? format_percent(*value) : "NaN";
}

std::string csv_line(const FileCoverageRow& row) {
    return row.file_name + "," + std::to_string(row.total_pixels) + "," +
           std::to_string(row.covered_pixels) + "," +
           std::to_string(row.segmentation_pixels) + "," +
           format_percent(row.cover_percentage()) + "," +
           format_percent(row.segmentation_percentage());
}

std::string coverage_csv(const std::vector<FileCoverageRow>& rows) {
    std::string out = kCoverageCsvHeader;
    out += '\n';
    for (const FileCoverageRow& row : rows) {
        out += csv_line(row);
        out += '\n';
    }
    return out;
}

std::string comparison_csv(const ComparisonRow& row) {
    std::string out = "site,estimator,estimatePercent,groundTruthPercent,deltaPercent\n";
    for (std::size_t i = 0; i < row.estimates.size(); ++i) {
        out += row.site_name + "," + row.estimates[i].first + "," +
               format_percent(row.estimates[i].second) + "," +
               format_percent(row.ground_truth_percent) + "," +
               format_hundredths(std::llround(row.delta(i) * 100.0), true) + "\n";
    }
    return out;
}

} // namespace canopy

// SPDX-License-Identifier: Apache-2.0
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "canopy/error.hpp"
#include "canopy/metrics.hpp"
#include "canopy/pipeline.hpp"
#include "canopy/tiff_reader.hpp"

namespace {

using canopy::Error;
using canopy::ErrorCode;

void print_page(std::uint32_t index, const canopy::tiff::PageDescriptor& page) {
    std::cout << "page " << index << ": " << page.width << "x" << page.height << ", "
              << page.samples_per_pixel << " samples/pixel, " << page.bits_per_sample
              << "-bit, compression " << canopy::tiff::compression_name(page.compression);
    if (page.layout.tiled)
        std::cout << ", tiles " << page.layout.tile_width << "x"
                  << page.layout.tile_height;
    else
        std::cout << ", strips (rowsPerStrip " << page.layout.rows_per_strip << ")";
    std::cout << ", " << page.segment_offsets.size() << " segments";
    if (page.geo_scale)
        std::cout << ", pixelScale " << page.geo_scale->sx << "x" << page.geo_scale->sy;
    std::cout << "\n";
}

int cmd_inspect(const std::string& path) {
    canopy::tiff::ContainerInfo container = canopy::tiff::open_container(path);
    std::cout << "file: " << container.path << "\n"
              << "variant: " << canopy::tiff::variant_name(container.variant) << "\n"
              << "byteOrder: " << canopy::tiff::byte_order_name(container.byte_order)
              << "\n"
              << "pages: " << container.page_count() << "\n";
    for (std::uint32_t i = 0; i < container.page_count(); ++i) {
        try {
            print_page(i, canopy::tiff::read_page(container, i));
        } catch (const Error& e) {
            std::cout << "page " << i << ": unreadable (" << e.what() << ")\n";
        }
    }
    return 0;
}

int cmd_run(const canopy::RunConfig& config) {
    canopy::RunResult result = canopy::run_pipeline(config, &std::cerr);
    std::cout << canopy::coverage_csv([&] {
        std::vector<canopy::FileCoverageRow> rows;
        for (const canopy::FileRunResult& f : result.files)
            rows.push_back(f.row);
        return rows;
    }());
    if (result.summary) {
        std::cout << "areaCoveredPercent,"
                  << canopy::format_percent(result.summary->area_covered_percent())
                  << "\n"
                  << "canopyPercent,"
                  << canopy::format_percent(result.summary->canopy_percent()) << "\n";
    }
    std::cerr << "reports: " << result.csv_path.string() << ", "
              << result.summary_path.string() << "\n";
    if (!result.failures.empty()) {
        for (const canopy::FileFailure& failure : result.failures)
            std::cerr << "failed: " << failure.input << ": " << failure.message << "\n";
        return result.failures.front().exit_code;
    }
    return 0;
}

int cmd_compare(const std::string& site, double ground_truth,
                const std::vector<std::string>& estimate_args,
                const std::string& out_path) {
    std::vector<std::pair<std::string, double>> estimates;
    for (const std::string& arg : estimate_args) {
        auto eq = arg.find('=');
        if (eq != std::string::npos) {
            std::string name = arg.substr(0, eq);
            std::string value = arg.substr(eq + 1);
            try {
                estimates.emplace_back(name, std::stod(value));
            } catch (const std::exception&) {
                throw Error(ErrorCode::InvalidConfig,
                            "estimate '" + arg + "' is not name=percent");
            }
        } else {
            canopy::RunSummaryInfo info = canopy::read_run_summary(arg);
            estimates.emplace_back(info.estimator_name, info.canopy_percent);
        }
    }
    canopy::ComparisonRow row =
        canopy::compare_estimates(site, ground_truth, std::move(estimates));
    std::string csv = canopy::comparison_csv(row);
    std::cout << csv;
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
        out << csv;
        if (!out)
            throw Error(ErrorCode::IoFailure, "cannot write " + out_path);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Green-canopy coverage over large aerial TIFF imagery"};
    app.require_subcommand(1);

    std::string inspect_path;
    CLI::App* inspect =
        app.add_subcommand("inspect", "Print container and page structure");
    inspect->add_option("file", inspect_path, "TIFF/BigTIFF file")->required();

    canopy::RunConfig config;
    std::vector<std::string> inputs;
    std::string estimator_name = "threshold";
    double confidence_floor = -1;
    CLI::App* run =
        app.add_subcommand("run", "Chunk, estimate canopy, and write reports");
    run->add_option("inputs", inputs, "input TIFF files")->required();
    run->add_option("--store", config.store_root, "artifact store root")->required();
    run->add_option("--band", config.band, "page index to analyze (default 2)");
    run->add_option("--chunk-size", config.chunk_size, "chunk edge in pixels");
    run->add_option("--estimator", estimator_name, "threshold|mask|boxes");
    run->add_option("--tau", config.estimator.tau, "excess-green cutoff");
    run->add_option("--workers", config.worker_count, "worker thread count");
    run->add_option("--confidence-floor", confidence_floor,
                    "drop boxes with confidence below this");
    run->add_flag("--overlays", config.write_overlays, "write overlay PNGs");
    run->add_option("--overlay-alpha", config.overlay_alpha, "overlay blend factor");
    run->set_config("--config", "", "read options from an INI file");

    std::string site = "site";
    double ground_truth = 0;
    std::vector<std::string> estimate_args;
    std::string out_path;
    CLI::App* compare =
        app.add_subcommand("compare", "Compare run estimates against ground truth");
    compare->add_option("--ground-truth", ground_truth, "validated canopy percent")
        ->required();
    compare->add_option("--site", site, "site label for the report");
    compare->add_option("--out", out_path, "also write the CSV here");
    compare
        ->add_option("estimates", estimate_args,
                     "run store roots or literal name=percent pairs")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*inspect)
            return cmd_inspect(inspect_path);
        if (*run) {
            config.estimator.kind = canopy::estimator_kind_from_name(estimator_name);
            if (confidence_floor >= 0)
                config.estimator.confidence_floor = confidence_floor;
            for (const std::string& input : inputs)
                config.input_paths.emplace_back(input);
            return cmd_run(config);
        }
        if (*compare)
            return cmd_compare(site, ground_truth, estimate_args, out_path);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return canopy::exit_class(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

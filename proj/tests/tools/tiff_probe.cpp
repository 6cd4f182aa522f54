// SPDX-License-Identifier: Apache-2.0

// Cross-validation shim: "decode" dumps a page's pixels through the library
// reader; "write" emits a fixture plus the raw pixels it is expected to hold,
// so an external TIFF implementation can check either direction.

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "canopy/error.hpp"
#include "canopy/tiff_reader.hpp"
#include "tiff_fixture_writer.hpp"

namespace {

int usage() {
    std::cerr << "usage:\n"
              << "  tiff_probe decode <tiff> <page> <out.raw>\n"
              << "  tiff_probe write <out.tif> <out.raw> <width> <height>"
              << " <compression> <layout> <variant> <order> <seed>\n"
              << "    layout: strips:<rowsPerStrip> | tiles:<w>x<h>\n"
              << "    variant: classic | bigtiff; order: le | be\n";
    return 64;
}

void dump(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw canopy::Error(canopy::ErrorCode::IoFailure, "cannot write " + path);
}

int cmd_decode(const std::string& tiff_path, std::uint32_t page_index,
               const std::string& raw_path) {
    canopy::tiff::ContainerInfo container = canopy::tiff::open_container(tiff_path);
    canopy::tiff::PageDescriptor page = canopy::tiff::read_page(container, page_index);
    canopy::tiff::RasterWindow window =
        canopy::tiff::decode_window(page, 0, 0, page.width, page.height);
    dump(raw_path, window.pixels);
    return 0;
}

int cmd_write(char** argv) {
    const std::string tiff_path = argv[0];
    const std::string raw_path = argv[1];
    fixtures::PageSpec page;
    page.width = static_cast<std::uint32_t>(std::stoul(argv[2]));
    page.height = static_cast<std::uint32_t>(std::stoul(argv[3]));
    page.compression = static_cast<std::uint16_t>(std::stoul(argv[4]));

    const std::string layout = argv[5];
    if (layout.rfind("strips:", 0) == 0) {
        page.rows_per_strip =
            static_cast<std::uint32_t>(std::stoul(layout.substr(7)));
    } else if (layout.rfind("tiles:", 0) == 0) {
        std::string geometry = layout.substr(6);
        auto x = geometry.find('x');
        if (x == std::string::npos)
            return usage();
        page.tiled = true;
        page.tile_width = static_cast<std::uint32_t>(std::stoul(geometry.substr(0, x)));
        page.tile_height =
            static_cast<std::uint32_t>(std::stoul(geometry.substr(x + 1)));
    } else {
        return usage();
    }

    fixtures::FileSpec spec;
    spec.bigtiff = std::string(argv[6]) == "bigtiff";
    spec.big_endian = std::string(argv[7]) == "be";
    page.generate =
        fixtures::noise_generator(static_cast<std::uint32_t>(std::stoul(argv[8])));
    spec.pages.push_back(page);

    fixtures::write_tiff(tiff_path, spec);
    dump(raw_path, fixtures::render_page(page));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        if (argc >= 5 && std::string(argv[1]) == "decode")
            return cmd_decode(argv[2],
                              static_cast<std::uint32_t>(std::stoul(argv[3])),
                              argv[4]);
        if (argc >= 11 && std::string(argv[1]) == "write")
            return cmd_write(argv + 2);
    } catch (const std::exception& e) {
        std::cerr << "tiff_probe: " << e.what() << "\n";
        return 1;
    }
    return usage();
}

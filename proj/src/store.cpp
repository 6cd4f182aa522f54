// SPDX-License-Identifier: Apache-2.0
#include "canopy/store.hpp"

#include <unistd.h>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "canopy/error.hpp"
#include "canopy/metrics.hpp"

namespace canopy {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

std::atomic<unsigned long long> g_temp_counter{0};

void atomic_write(const fs::path& path, const void* data, std::size_t size) {
    fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp" + std::to_string(::getpid()) + "-" +
           std::to_string(g_temp_counter.fetch_add(1));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error(ErrorCode::IoFailure, "cannot open " + tmp.string());
        out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw Error(ErrorCode::IoFailure, "short write to " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error(ErrorCode::IoFailure, "cannot rename into " + path.string());
    }
}

std::uint8_t blend_channel(std::uint8_t pixel, std::uint8_t target, double alpha) {
    return static_cast<std::uint8_t>(
        std::llround((1.0 - alpha) * pixel + alpha * target));
}

ordered_json manifest_to_json(const Manifest& m) {
    ordered_json estimator;
    estimator["kind"] = estimator_kind_name(m.estimator.kind);
    estimator["tau"] = m.estimator.tau;
    if (m.estimator.confidence_floor)
        estimator["confidenceFloor"] = *m.estimator.confidence_floor;
    else
        estimator["confidenceFloor"] = nullptr;

    ordered_json j;
    j["fileName"] = m.file_name;
    j["pageIndex"] = m.page_index;
    j["pageWidth"] = m.page_width;
    j["pageHeight"] = m.page_height;
    j["chunkSize"] = m.chunk_size;
    j["rows"] = m.rows;
    j["cols"] = m.cols;
    j["estimator"] = estimator;
    j["chunks"] = ordered_json::array();
    for (const ManifestChunk& c : m.chunks) {
        ordered_json entry;
        entry["row"] = c.row;
        entry["col"] = c.col;
        entry["inWidth"] = c.in_width;
        entry["inHeight"] = c.in_height;
        entry["coveredPixels"] = c.covered_pixels;
        entry["canopyPixels"] = c.canopy_pixels;
        entry["skipped"] = c.skipped;
        j["chunks"].push_back(std::move(entry));
    }
    return j;
}

Manifest manifest_from_json(const ordered_json& j) {
    Manifest m;
    m.file_name = j.at("fileName").get<std::string>();
    m.page_index = j.at("pageIndex").get<std::uint32_t>();
    m.page_width = j.at("pageWidth").get<std::uint32_t>();
    m.page_height = j.at("pageHeight").get<std::uint32_t>();
    m.chunk_size = j.at("chunkSize").get<std::uint32_t>();
    m.rows = j.at("rows").get<std::uint32_t>();
    m.cols = j.at("cols").get<std::uint32_t>();
    const ordered_json& estimator = j.at("estimator");
    m.estimator.kind = estimator_kind_from_name(estimator.at("kind").get<std::string>());
    m.estimator.tau = estimator.at("tau").get<int>();
    if (!estimator.at("confidenceFloor").is_null())
        m.estimator.confidence_floor = estimator.at("confidenceFloor").get<double>();
    for (const ordered_json& entry : j.at("chunks")) {
        ManifestChunk c;
        c.row = entry.at("row").get<std::uint32_t>();
        c.col = entry.at("col").get<std::uint32_t>();
        c.in_width = entry.at("inWidth").get<std::uint32_t>();
        c.in_height = entry.at("inHeight").get<std::uint32_t>();
        c.covered_pixels = entry.at("coveredPixels").get<std::uint64_t>();
        c.canopy_pixels = entry.at("canopyPixels").get<std::uint64_t>();
        c.skipped = entry.at("skipped").get<bool>();
        m.chunks.push_back(c);
    }
    return m;
}

} // namespace

Store::Store(fs::path root) : root_(std::move(root)) {
    std::error_code ec;
    fs::create_directories(root_, ec);
    if (ec)
        throw Error(ErrorCode::IoFailure, "cannot create store root " + root_.string());
}

std::string Store::artifact_stem(std::uint32_t row, std::uint32_t col) {
    if (row > 99999 || col > 99999)
        throw Error(ErrorCode::InvalidConfig,
                    "grid index (" + std::to_string(row) + "," + std::to_string(col) +
                        ") exceeds the 5-digit naming range");
    char buf[16];
    std::snprintf(buf, sizeof buf, "r%05u_c%05u", row, col);
    return buf;
}

fs::path Store::file_dir(const std::string& file_name) const { return root_ / file_name; }

fs::path Store::chunk_path(const std::string& file_name, std::uint32_t row,
                           std::uint32_t col) const {
    return file_dir(file_name) / "chunks" / (artifact_stem(row, col) + ".png");
}

fs::path Store::mask_path(const std::string& file_name, std::uint32_t row,
                          std::uint32_t col) const {
    return file_dir(file_name) / "masks" / (artifact_stem(row, col) + ".png");
}

fs::path Store::detections_path(const std::string& file_name, std::uint32_t row,
                                std::uint32_t col) const {
    return file_dir(file_name) / "detections" / (artifact_stem(row, col) + ".txt");
}

fs::path Store::overlay_path(const std::string& file_name, std::uint32_t row,
                             std::uint32_t col) const {
    return file_dir(file_name) / "overlays" / (artifact_stem(row, col) + ".png");
}

fs::path Store::manifest_path(const std::string& file_name) const {
    return file_dir(file_name) / "manifest.json";
}

fs::path Store::file_reports_dir(const std::string& file_name) const {
    return file_dir(file_name) / "reports";
}

fs::path Store::run_reports_dir() const { return root_ / "reports"; }

fs::path Store::write_chunk(const PaddedChunk& chunk) const {
    fs::path path = chunk_path(chunk.ref.file_name, chunk.ref.row, chunk.ref.col);
    write_bytes(path, encode_png_rgb(chunk.pixels.data(), chunk.chunk_size,
                                     chunk.chunk_size));
    return path;
}

RgbImage Store::read_chunk(const std::string& file_name, std::uint32_t row,
                           std::uint32_t col) const {
    return read_png_rgb(chunk_path(file_name, row, col));
}

fs::path Store::write_mask(const CanopyMask& mask) const {
    std::vector<std::uint8_t> gray(mask.bits.size());
    for (std::size_t i = 0; i < mask.bits.size(); ++i)
        gray[i] = mask.bits[i] ? 255 : 0;
    fs::path path = mask_path(mask.ref.file_name, mask.ref.row, mask.ref.col);
    write_bytes(path, encode_png_gray(gray.data(), mask.chunk_size, mask.chunk_size));
    return path;
}

GrayImage Store::read_mask(const std::string& file_name, std::uint32_t row,
                           std::uint32_t col) const {
    fs::path path = mask_path(file_name, row, col);
    if (!fs::exists(path))
        throw Error(ErrorCode::MaskMissing, "no mask at " + path.string());
    return read_png_gray_strict(path);
}

fs::path Store::write_overlay(const PaddedChunk& chunk, const CanopyMask& mask,
                              double alpha) const {
    if (!(mask.ref == chunk.ref) || mask.chunk_size != chunk.chunk_size)
        throw Error(ErrorCode::RefMismatch, "overlay mask does not match chunk");
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw Error(ErrorCode::InvalidConfig,
                    "alpha " + std::to_string(alpha) + " outside [0, 1]");
    std::vector<std::uint8_t> blended = chunk.pixels;
    const std::uint32_t cs = chunk.chunk_size;
    for (std::uint32_t y = 0; y < cs; ++y) {
        for (std::uint32_t x = 0; x < cs; ++x) {
            if (!mask.at(x, y))
                continue;
            std::uint8_t* p = blended.data() + (std::size_t(y) * cs + x) * 3;
            p[0] = blend_channel(p[0], 0, alpha);
            p[1] = blend_channel(p[1], 255, alpha);
            p[2] = blend_channel(p[2], 0, alpha);
        }
    }
    fs::path path = overlay_path(chunk.ref.file_name, chunk.ref.row, chunk.ref.col);
    write_bytes(path, encode_png_rgb(blended.data(), cs, cs));
    return path;
}

fs::path Store::write_detections(const std::string& file_name, std::uint32_t row,
                                 std::uint32_t col, const std::string& text) const {
    fs::path path = detections_path(file_name, row, col);
    write_text(path, text);
    return path;
}

std::optional<std::string> Store::read_detections(const std::string& file_name,
                                                  std::uint32_t row,
                                                  std::uint32_t col) const {
    fs::path path = detections_path(file_name, row, col);
    std::ifstream in(path, std::ios::binary);
    if (!in)
        return std::nullopt;
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

fs::path Store::write_manifest(const Manifest& manifest) const {
    if (manifest.chunks.size() !=
        std::size_t(manifest.rows) * manifest.cols)
        throw Error(ErrorCode::CorruptManifest,
                    "manifest entry count " + std::to_string(manifest.chunks.size()) +
                        " != " + std::to_string(manifest.rows) + "*" +
                        std::to_string(manifest.cols));
    fs::path path = manifest_path(manifest.file_name);
    write_text(path, manifest_to_json(manifest).dump(2) + "\n");
    return path;
}

bool Store::has_manifest(const std::string& file_name) const {
    return fs::exists(manifest_path(file_name));
}

Manifest Store::read_manifest(const std::string& file_name) const {
    fs::path path = manifest_path(file_name);
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::IoFailure, "no manifest at " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    Manifest m;
    try {
        m = manifest_from_json(ordered_json::parse(text.str()));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::CorruptManifest, path.string() + ": " + e.what());
    } catch (const Error& e) {
        throw Error(ErrorCode::CorruptManifest, path.string() + ": " + e.what());
    }
    if (m.chunks.size() != std::size_t(m.rows) * m.cols)
        throw Error(ErrorCode::CorruptManifest,
                    path.string() + ": entry count " + std::to_string(m.chunks.size()) +
                        " != " + std::to_string(m.rows) + "*" + std::to_string(m.cols));
    return m;
}

fs::path Store::write_text(const fs::path& path, const std::string& text) const {
    atomic_write(path, text.data(), text.size());
    return path;
}

fs::path Store::write_bytes(const fs::path& path,
                            const std::vector<std::uint8_t>& bytes) const {
    atomic_write(path, bytes.data(), bytes.size());
    return path;
}

} // namespace canopy

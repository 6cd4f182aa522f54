// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace canopy {

struct RgbImage {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::vector<std::uint8_t> pixels; // row-major, 3 bytes per pixel
};

struct GrayImage {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::vector<std::uint8_t> pixels; // row-major, 1 byte per pixel
};

std::vector<std::uint8_t> encode_png_rgb(const std::uint8_t* pixels, std::uint32_t width,
                                         std::uint32_t height);
std::vector<std::uint8_t> encode_png_gray(const std::uint8_t* pixels, std::uint32_t width,
                                          std::uint32_t height);

// Reads any color layout and converts to 8-bit RGB.
RgbImage read_png_rgb(const std::filesystem::path& path);

// Accepts only single-channel 8-bit files; anything else violates the mask contract.
GrayImage read_png_gray_strict(const std::filesystem::path& path);

} // namespace canopy

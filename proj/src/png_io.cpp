// SPDX-License-Identifier: Apache-2.0
#include "canopy/png_io.hpp"

#include <png.h>

#include "canopy/error.hpp"

namespace canopy {

namespace {

std::vector<std::uint8_t> encode_png(const std::uint8_t* pixels, std::uint32_t width,
                                     std::uint32_t height, png_uint_32 format) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    image.width = width;
    image.height = height;
    image.format = format;

    png_alloc_size_t size = 0;
    if (!png_image_write_to_memory(&image, nullptr, &size, 0, pixels, 0, nullptr))
        throw Error(ErrorCode::IoFailure,
                    std::string("PNG encode sizing failed: ") + image.message);
    std::vector<std::uint8_t> out(size);
    if (!png_image_write_to_memory(&image, out.data(), &size, 0, pixels, 0, nullptr))
        throw Error(ErrorCode::IoFailure,
                    std::string("PNG encode failed: ") + image.message);
    out.resize(size);
    return out;
}

} // namespace

std::vector<std::uint8_t> encode_png_rgb(const std::uint8_t* pixels, std::uint32_t width,
                                         std::uint32_t height) {
    return encode_png(pixels, width, height, PNG_FORMAT_RGB);
}

std::vector<std::uint8_t> encode_png_gray(const std::uint8_t* pixels, std::uint32_t width,
                                          std::uint32_t height) {
    return encode_png(pixels, width, height, PNG_FORMAT_GRAY);
}

RgbImage read_png_rgb(const std::filesystem::path& path) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&image, path.c_str()))
        throw Error(ErrorCode::IoFailure,
                    "cannot read PNG " + path.string() + ": " + image.message);
    image.format = PNG_FORMAT_RGB;
    RgbImage out;
    out.width = image.width;
    out.height = image.height;
    out.pixels.resize(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, out.pixels.data(), 0, nullptr))
        throw Error(ErrorCode::IoFailure,
                    "cannot decode PNG " + path.string() + ": " + image.message);
    return out;
}

GrayImage read_png_gray_strict(const std::filesystem::path& path) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&image, path.c_str()))
        throw Error(ErrorCode::IoFailure,
                    "cannot read PNG " + path.string() + ": " + image.message);
    if (PNG_IMAGE_SAMPLE_CHANNELS(image.format) != 1 ||
        (image.format & PNG_FORMAT_FLAG_LINEAR) != 0) {
        png_image_free(&image);
        throw Error(ErrorCode::MaskShapeMismatch,
                    path.string() + " is not a single-channel 8-bit PNG");
    }
    image.format = PNG_FORMAT_GRAY;
    GrayImage out;
    out.width = image.width;
    out.height = image.height;
    out.pixels.resize(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, out.pixels.data(), 0, nullptr))
        throw Error(ErrorCode::IoFailure,
                    "cannot decode PNG " + path.string() + ": " + image.message);
    return out;
}

} // namespace canopy

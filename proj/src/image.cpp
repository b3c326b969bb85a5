// SPDX-License-Identifier: Apache-2.0
#include "raypriors/image.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <stdexcept>

namespace rp {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

uint8_t encode8(float v, double inv_gamma) {
    double x = std::clamp(static_cast<double>(v), 0.0, 1.0);
    if (inv_gamma != 1.0) x = std::pow(x, inv_gamma);
    return static_cast<uint8_t>(std::lround(x * 255.0));
}

}  // namespace

void save_png(const Image& img, const std::filesystem::path& path, double gamma) {
    if (img.channels != 1 && img.channels != 3)
        throw std::invalid_argument("save_png: channels must be 1 or 3");
    FilePtr fp(std::fopen(path.string().c_str(), "wb"));
    if (!fp) throw std::runtime_error("save_png: cannot open " + path.string());

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw std::runtime_error("save_png: png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw std::runtime_error("save_png: png_create_info_struct failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw std::runtime_error("save_png: libpng error writing " + path.string());
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, img.width, img.height, 8,
                 img.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    const double inv_gamma = 1.0 / gamma;
    std::vector<uint8_t> row(static_cast<size_t>(img.width) * img.channels);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x)
            for (int c = 0; c < img.channels; ++c)
                row[static_cast<size_t>(x) * img.channels + c] = encode8(img.at(x, y, c), inv_gamma);
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

Image load_png(const std::filesystem::path& path, double gamma) {
    FilePtr fp(std::fopen(path.string().c_str(), "rb"));
    if (!fp) throw std::runtime_error("load_png: cannot open " + path.string());

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw std::runtime_error("load_png: png_create_read_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw std::runtime_error("load_png: png_create_info_struct failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error("load_png: libpng error reading " + path.string());
    }
    png_init_io(png, fp.get());
    png_read_info(png, info);

    // Normalize to 8-bit gray or RGB.
    png_set_strip_16(png);
    png_set_packing(png);
    if (png_get_color_type(png, info) == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (png_get_color_type(png, info) == PNG_COLOR_TYPE_GRAY &&
        png_get_bit_depth(png, info) < 8)
        png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    Image img;
    img.width = static_cast<int>(png_get_image_width(png, info));
    img.height = static_cast<int>(png_get_image_height(png, info));
    const int ctype = png_get_color_type(png, info);
    img.channels = (ctype == PNG_COLOR_TYPE_GRAY) ? 1 : 3;
    img.data.resize(static_cast<size_t>(img.width) * img.height * img.channels);

    std::vector<uint8_t> row(static_cast<size_t>(img.width) * img.channels);
    for (int y = 0; y < img.height; ++y) {
        png_read_row(png, row.data(), nullptr);
        for (int x = 0; x < img.width; ++x)
            for (int c = 0; c < img.channels; ++c) {
                const double v = row[static_cast<size_t>(x) * img.channels + c] / 255.0;
                img.at(x, y, c) = static_cast<float>(gamma == 1.0 ? v : std::pow(v, gamma));
            }
    }
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

void save_raw(const Image& img, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_raw: cannot open " + path.string());
    const char magic[4] = {'R', 'P', 'I', 'F'};
    const uint32_t header[4] = {1u, static_cast<uint32_t>(img.width),
                                static_cast<uint32_t>(img.height),
                                static_cast<uint32_t>(img.channels)};
    out.write(magic, 4);
    out.write(reinterpret_cast<const char*>(header), sizeof(header));
    out.write(reinterpret_cast<const char*>(img.data.data()),
              static_cast<std::streamsize>(img.data.size() * sizeof(float)));
    if (!out) throw std::runtime_error("save_raw: write failed for " + path.string());
}

Image load_raw(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_raw: cannot open " + path.string());
    char magic[4];
    uint32_t header[4];
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(header), sizeof(header));
    if (!in || std::memcmp(magic, "RPIF", 4) != 0 || header[0] != 1)
        throw std::runtime_error("load_raw: bad header in " + path.string());
    Image img;
    img.width = static_cast<int>(header[1]);
    img.height = static_cast<int>(header[2]);
    img.channels = static_cast<int>(header[3]);
    img.data.resize(static_cast<size_t>(img.width) * img.height * img.channels);
    in.read(reinterpret_cast<char*>(img.data.data()),
            static_cast<std::streamsize>(img.data.size() * sizeof(float)));
    if (!in) throw std::runtime_error("load_raw: truncated file " + path.string());
    return img;
}

}  // namespace rp

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace rp {

/// Row-major float image, values nominally in [0, 1]. channels is 1 or 3.
struct Image {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<float> data;

    static Image zeros(int w, int h, int c) {
        Image img;
        img.width = w;
        img.height = h;
        img.channels = c;
        img.data.assign(static_cast<size_t>(w) * h * c, 0.0f);
        return img;
    }

    float& at(int x, int y, int c) {
        return data[(static_cast<size_t>(y) * width + x) * channels + c];
    }
    float at(int x, int y, int c) const {
        return data[(static_cast<size_t>(y) * width + x) * channels + c];
    }
    size_t size() const { return data.size(); }
    bool same_shape(const Image& o) const {
        return width == o.width && height == o.height && channels == o.channels;
    }
};

/// 8-bit PNG. Values are clamped to [0, 1] and gamma-encoded with the given
/// exponent before quantization; load inverts the same mapping. Pass gamma = 1
/// for data that must round-trip linearly (masks).
void save_png(const Image& img, const std::filesystem::path& path, double gamma = 2.2);
Image load_png(const std::filesystem::path& path, double gamma = 2.2);

/// Raw float sidecar, little-endian: magic "RPIF", u32 version, u32 width,
/// u32 height, u32 channels, then width*height*channels float32 values.
void save_raw(const Image& img, const std::filesystem::path& path);
Image load_raw(const std::filesystem::path& path);

}  // namespace rp

#pragma once

#include <cstdint>
#include <vector>

#include "hdrwm/errors.hpp"

namespace hdrwm {

// Linear-light RGB radiance raster, three planar float channels.
struct HdrImage {
    int width = 0;
    int height = 0;
    std::vector<float> r, g, b; // width*height each, row-major

    HdrImage() = default;
    HdrImage(int w, int h)
        : width(w), height(h),
          r((size_t)w * h, 0.0f), g((size_t)w * h, 0.0f), b((size_t)w * h, 0.0f) {}

    size_t pixel_count() const { return (size_t)width * height; }
    std::vector<float>& plane(int c) { return c == 0 ? r : (c == 1 ? g : b); }
    const std::vector<float>& plane(int c) const { return c == 0 ? r : (c == 1 ? g : b); }

    // Throws FormatError on non-finite / negative samples or degenerate dims.
    void validate() const;
};

enum class ColorSpace { RGB, YCbCr };

// 8-bit three-channel raster. Plane meaning depends on the colorspace tag:
// RGB -> p0=R p1=G p2=B, YCbCr -> p0=Y p1=Cb p2=Cr.
struct SdrImage {
    int width = 0;
    int height = 0;
    ColorSpace colorspace = ColorSpace::RGB;
    std::vector<uint8_t> p0, p1, p2;

    SdrImage() = default;
    SdrImage(int w, int h, ColorSpace cs = ColorSpace::RGB)
        : width(w), height(h), colorspace(cs),
          p0((size_t)w * h, 0), p1((size_t)w * h, 0), p2((size_t)w * h, 0) {}

    size_t pixel_count() const { return (size_t)width * height; }
    std::vector<uint8_t>& plane(int c) { return c == 0 ? p0 : (c == 1 ? p1 : p2); }
    const std::vector<uint8_t>& plane(int c) const { return c == 0 ? p0 : (c == 1 ? p1 : p2); }

    bool same_dims(const SdrImage& o) const { return width == o.width && height == o.height; }
};

// Binary plane; every element is 0 or 1.
struct BitImage {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> bits;

    BitImage() = default;
    BitImage(int w, int h) : width(w), height(h), bits((size_t)w * h, 0) {}

    size_t size() const { return (size_t)width * height; }
    uint8_t at(int x, int y) const { return bits[(size_t)y * width + x]; }
    void set(int x, int y, uint8_t v) { bits[(size_t)y * width + x] = v; }

    size_t popcount() const {
        size_t n = 0;
        for (uint8_t v : bits) n += v;
        return n;
    }
};

} // namespace hdrwm

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hdrwm/image.hpp"
#include "hdrwm/image_io.hpp"

namespace hdrwm {

struct SaliencyMap {
    int width = 0, height = 0;
    std::vector<float> v; // in [0, 1]

    SaliencyMap() = default;
    SaliencyMap(int w, int h) : width(w), height(h), v((size_t)w * h, 0.0f) {}
};

struct BinaryMask {
    int width = 0, height = 0;
    float threshold_used = 0.0f;
    std::vector<uint8_t> bits;

    BinaryMask() = default;
    BinaryMask(int w, int h) : width(w), height(h), bits((size_t)w * h, 0) {}

    uint8_t at(int x, int y) const { return bits[(size_t)y * width + x]; }
    size_t popcount() const {
        size_t n = 0;
        for (uint8_t b : bits) n += b;
        return n;
    }
    BitImage as_bits() const {
        BitImage b(width, height);
        b.bits = bits;
        return b;
    }
    static BinaryMask from_bits(const BitImage& b, float threshold = 0.5f) {
        BinaryMask m(b.width, b.height);
        m.bits = b.bits;
        m.threshold_used = threshold;
        return m;
    }
};

// Luminance-contrast detector: distance of the Gaussian-smoothed luma to
// its global mean, min-max normalized. A constant image maps to all zeros.
SaliencyMap detect_saliency_builtin(const SdrImage& img);

// 8-bit grayscale map scaled by 1/255; dimensions must match the host.
SaliencyMap saliency_from_gray(const GrayImage& map, int want_w, int want_h);

// bit = 1 iff value >= t.
BinaryMask threshold_mask(const SaliencyMap& map, float t);

template <typename Img>
struct SegmentPair {
    Img foreground;
    Img background;
    BinaryMask mask;
};

// foreground = image & mask, background = image & ~mask, per channel.
SegmentPair<SdrImage> segment_host(const SdrImage& img, const BinaryMask& mask);

// W_f = W & mask, W_b = W & ~mask; the mask is resized nearest-neighbor to
// the watermark dimensions when they differ.
SegmentPair<BitImage> partition_watermark(const BitImage& w, const BinaryMask& mask);

// Mean binary cross entropy of a prediction against a binary truth;
// predictions are clamped to [1e-7, 1 - 1e-7].
double bce_loss(const SaliencyMap& pred, const BinaryMask& truth);

} // namespace hdrwm

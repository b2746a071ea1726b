#include "hdrwm/saliency.hpp"

#include <cmath>

#include "hdrwm/color.hpp"
#include "hdrwm/resize.hpp"

namespace hdrwm {

namespace {

constexpr double kBlurSigma = 4.0;

// Separable Gaussian blur with edge clamp, double accumulation.
std::vector<double> gaussian_blur(const std::vector<double>& src, int w, int h, double sigma) {
    int radius = (int)std::ceil(3.0 * sigma);
    std::vector<double> k(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        k[i + radius] = std::exp(-(double)(i * i) / (2.0 * sigma * sigma));
        sum += k[i + radius];
    }
    for (auto& v : k) v /= sum;

    std::vector<double> tmp((size_t)w * h), out((size_t)w * h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i)
                acc += k[i + radius] * src[(size_t)y * w + std::clamp(x + i, 0, w - 1)];
            tmp[(size_t)y * w + x] = acc;
        }
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i)
                acc += k[i + radius] * tmp[(size_t)std::clamp(y + i, 0, h - 1) * w + x];
            out[(size_t)y * w + x] = acc;
        }
    return out;
}

} // namespace

SaliencyMap detect_saliency_builtin(const SdrImage& img) {
    GrayImage luma = luma_plane(img);
    size_t n = luma.v.size();
    std::vector<double> plane(n);
    for (size_t i = 0; i < n; ++i) plane[i] = luma.v[i];
    auto smooth = gaussian_blur(plane, img.width, img.height, kBlurSigma);

    double mean = 0.0;
    for (double v : smooth) mean += v;
    mean /= (double)n;

    SaliencyMap map(img.width, img.height);
    double lo = 1e300, hi = -1e300;
    for (size_t i = 0; i < n; ++i) {
        double d = std::abs(smooth[i] - mean);
        map.v[i] = (float)d;
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    if (hi - lo < 1e-9) { // no contrast: defined as all zeros
        std::fill(map.v.begin(), map.v.end(), 0.0f);
        return map;
    }
    double inv = 1.0 / (hi - lo);
    for (auto& v : map.v) v = (float)(((double)v - lo) * inv);
    return map;
}

SaliencyMap saliency_from_gray(const GrayImage& g, int want_w, int want_h) {
    if (g.width != want_w || g.height != want_h)
        throw FormatError("external saliency map dimensions do not match the host");
    SaliencyMap map(g.width, g.height);
    for (size_t i = 0; i < g.v.size(); ++i) map.v[i] = g.v[i] / 255.0f;
    return map;
}

BinaryMask threshold_mask(const SaliencyMap& map, float t) {
    if (t < 0.0f || t > 1.0f) throw ConfigError("threshold must lie in [0, 1]");
    BinaryMask m(map.width, map.height);
    m.threshold_used = t;
    for (size_t i = 0; i < map.v.size(); ++i) m.bits[i] = map.v[i] >= t ? 1 : 0;
    return m;
}

SegmentPair<SdrImage> segment_host(const SdrImage& img, const BinaryMask& mask) {
    if (img.width != mask.width || img.height != mask.height)
        throw FormatError("mask dimensions do not match the host");
    SegmentPair<SdrImage> out;
    out.mask = mask;
    out.foreground = SdrImage(img.width, img.height, img.colorspace);
    out.background = SdrImage(img.width, img.height, img.colorspace);
    for (int c = 0; c < 3; ++c) {
        const auto& src = img.plane(c);
        auto& fg = out.foreground.plane(c);
        auto& bg = out.background.plane(c);
        for (size_t i = 0; i < src.size(); ++i) {
            if (mask.bits[i]) fg[i] = src[i];
            else bg[i] = src[i];
        }
    }
    return out;
}

SegmentPair<BitImage> partition_watermark(const BitImage& w, const BinaryMask& mask) {
    BinaryMask m = mask;
    if (mask.width != w.width || mask.height != w.height) {
        m = BinaryMask::from_bits(resize_nearest(mask.as_bits(), w.width, w.height),
                                  mask.threshold_used);
    }
    SegmentPair<BitImage> out;
    out.mask = m;
    out.foreground = BitImage(w.width, w.height);
    out.background = BitImage(w.width, w.height);
    for (size_t i = 0; i < w.bits.size(); ++i) {
        out.foreground.bits[i] = w.bits[i] & m.bits[i];
        out.background.bits[i] = w.bits[i] & (1 - m.bits[i]);
    }
    return out;
}

double bce_loss(const SaliencyMap& pred, const BinaryMask& truth) {
    if (pred.width != truth.width || pred.height != truth.height)
        throw FormatError("prediction and truth dimensions differ");
    constexpr double eps = 1e-7;
    double acc = 0.0;
    for (size_t i = 0; i < pred.v.size(); ++i) {
        double p = std::clamp((double)pred.v[i], eps, 1.0 - eps);
        double g = truth.bits[i];
        acc += g * std::log(p) + (1.0 - g) * std::log(1.0 - p);
    }
    return -acc / (double)pred.v.size();
}

} // namespace hdrwm

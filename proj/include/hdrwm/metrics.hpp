#pragma once

#include "hdrwm/image.hpp"

namespace hdrwm {

enum class MetricDomain { SdrLuma, SdrRgb };

struct PsnrResult {
    bool identical = false;
    double db = 0.0; // meaningless when identical
};

// 10*log10(255^2 / MSE); identical inputs return the sentinel flag.
PsnrResult psnr(const SdrImage& a, const SdrImage& b,
                MetricDomain domain = MetricDomain::SdrLuma);

// Mean local SSIM on luma: 11x11 Gaussian window (sigma 1.5), K1=0.01,
// K2=0.03, L=255, averaged over windows that fit entirely inside.
double ssim(const SdrImage& a, const SdrImage& b);

struct NcResult {
    double raw = 0.0;     // signed Pearson correlation
    double clamped = 0.0; // max(raw, 0), the conventionally reported range
};

// Pearson correlation of two binary images. Throws FormatError when either
// input is constant (zero variance).
NcResult nc(const BitImage& w, const BitImage& w_prime);

// Fraction of mismatched bits.
double ber(const BitImage& w, const BitImage& w_prime);

const char* metric_domain_name(MetricDomain d);

} // namespace hdrwm

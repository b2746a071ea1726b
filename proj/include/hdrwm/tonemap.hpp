#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "hdrwm/image.hpp"

namespace hdrwm {

// Normalization exponent tau = ceil(log2(max(channel) + 128)), exact at
// powers of two. The pipeline embeds the max over the three channels.
struct TauParam {
    int tau = 7;
};

TauParam compute_tau(const HdrImage& img, int channel);
TauParam compute_tau(const HdrImage& img); // max over channels

struct DurandParams {
    double spatial_sigma_frac = 0.02;          // of the image diagonal, pixels
    double range_sigma = 0.4;                  // log10 luminance units
    double target_contrast = 1.6989700043360187; // log10(50)
};

// Everything needed to re-render the SDR from the inverse-tonemapped HDR
// bit-exactly: the bilateral base layer and the compression constants.
struct DurandMeta {
    int width = 0, height = 0;
    double lum_max = 1.0;   // pre-normalization luminance maximum
    double comp = 1.0;      // base compression factor (<= 1)
    double base_max = 0.0;  // max of the base plane
    std::vector<float> base; // bilateral base, log10 domain
    uint64_t base_checksum = 0;
};

uint64_t plane_checksum(const std::vector<float>& v);

// Durand-style TMO: bilateral base/detail split in log10 luminance, base
// compressed to target_contrast, chroma ratios preserved, gamma 2.2.
// Luminance is pre-normalized by its maximum, so scaling the input by a
// power of two leaves the output bit-identical.
SdrImage tonemap_durand(const HdrImage& img, const DurandParams& p, DurandMeta* meta_out = nullptr);

// Re-render with a stored decomposition; exact inverse companion.
SdrImage tonemap_durand_with_meta(const HdrImage& img, const DurandMeta& meta);

// Expands an SDR image to HDR such that tonemap_durand_with_meta returns
// the input exactly.
HdrImage inverse_tonemap_durand(const SdrImage& img, const DurandMeta& meta);

// Literal normalized TMO. The exponent tau-128 produces degenerate scales
// for realistic tau; kept behind --tmo paper and reported via the clipped
// counter. hsecond is the companion H'' raster from the same construction.
struct PaperTmoResult {
    SdrImage hprime;
    SdrImage hsecond;
    long long clipped = 0; // samples that exceeded the 8-bit range pre-clamp
};

PaperTmoResult tonemap_paper(const HdrImage& img, const TauParam& tau);
HdrImage inverse_tonemap_paper(const SdrImage& img, const TauParam& tau);

} // namespace hdrwm

#pragma once

// Internal: definitions shared between the scalar and AVX2 kernel TUs.
// Both backends must perform these exact operations in this exact order;
// the equivalence tests compare them bitwise.

#include <bit>
#include <cstdint>

namespace hdrwm::kernels::detail {

// BT.601 full-range fixed point tables, 16-bit scale. The three forward
// luma terms sum to exactly 65536 and the inverse offsets cancel in luma,
// so ycbcr->rgb->ycbcr returns Y unchanged whenever no channel clamps
// (verified exhaustively in tests).
inline constexpr int32_t kYR = 19595, kYG = 38470, kYB = 7471;
inline constexpr int32_t kCbR = -11059, kCbG = -21709, kCbB = 32768;
inline constexpr int32_t kCrR = 32768, kCrG = -27439, kCrB = -5329;
inline constexpr int32_t kRCr = 91881;
inline constexpr int32_t kGCb = 22554, kGCr = 46802;
inline constexpr int32_t kBCb = 116130;
inline constexpr int32_t kHalf = 32768;

// exp2 polynomial on [0,1), Cephes coefficients.
inline constexpr float kExpC0 = 1.535336188319500e-4f;
inline constexpr float kExpC1 = 1.339887440266574e-3f;
inline constexpr float kExpC2 = 9.618437357674640e-3f;
inline constexpr float kExpC3 = 5.550332471162809e-2f;
inline constexpr float kExpC4 = 2.402264791363012e-1f;
inline constexpr float kExpC5 = 6.931472028550421e-1f;
inline constexpr float kLog2E = 1.44269504088896341f;
inline constexpr float kExpLo = -87.0f;

inline float fast_exp_neg_scalar(float x) {
    x = x < kExpLo ? kExpLo : x;
    float t = x * kLog2E;
    float k = __builtin_floorf(t + 0.5f); // nearest: poly range is [-0.5, 0.5]
    float f = t - k;
    float p = kExpC0;
    p = p * f + kExpC1;
    p = p * f + kExpC2;
    p = p * f + kExpC3;
    p = p * f + kExpC4;
    p = p * f + kExpC5;
    p = p * f + 1.0f;
    int32_t ki = (int32_t)k;
    float scale = std::bit_cast<float>((uint32_t)(ki + 127) << 23);
    return p * scale;
}

// One bilateral output pixel; also used for the AVX2 tail so both backends
// agree on every pixel. Tap order is (dy, dx), row-major.
inline float bilateral_pixel(const float* pad, size_t stride, int x, int radius,
                             const float* spatial, float inv_two_sigma_r2) {
    const float c = pad[x];
    float num = 0.0f;
    float den = 0.0f;
    size_t k = 0;
    for (int dy = -radius; dy <= radius; ++dy) {
        const float* row = pad + x + (ptrdiff_t)dy * (ptrdiff_t)stride;
        for (int dx = -radius; dx <= radius; ++dx, ++k) {
            float v = row[dx];
            float d = v - c;
            float w = spatial[k] * fast_exp_neg_scalar(-(d * d) * inv_two_sigma_r2);
            num = num + w * v;
            den = den + w;
        }
    }
    return num / den;
}

inline uint8_t clamp_u8(int32_t v) {
    return (uint8_t)(v < 0 ? 0 : (v > 255 ? 255 : v));
}

} // namespace hdrwm::kernels::detail

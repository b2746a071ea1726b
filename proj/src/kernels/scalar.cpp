#include "hdrwm/kernels.hpp"

#include "kernels_common.hpp"

namespace hdrwm::kernels {

using namespace detail;

namespace {

void haar_fwd_s(const int32_t* even, const int32_t* odd, int32_t* s, int32_t* d, size_t n) {
    for (size_t i = 0; i < n; ++i) {
        int32_t di = odd[i] - even[i];
        d[i] = di;
        s[i] = even[i] + (di >> 1);
    }
}

void haar_inv_s(const int32_t* s, const int32_t* d, int32_t* even, int32_t* odd, size_t n) {
    for (size_t i = 0; i < n; ++i) {
        int32_t e = s[i] - (d[i] >> 1);
        even[i] = e;
        odd[i] = d[i] + e;
    }
}

void cdf53_predict_s(const int32_t* odd, const int32_t* e0, const int32_t* e1,
                     int32_t* d, size_t n) {
    for (size_t i = 0; i < n; ++i)
        d[i] = odd[i] - ((e0[i] + e1[i]) >> 1);
}

void cdf53_update_s(const int32_t* even, const int32_t* d0, const int32_t* d1,
                    int32_t* s, size_t n) {
    for (size_t i = 0; i < n; ++i)
        s[i] = even[i] + ((d0[i] + d1[i] + 2) >> 2);
}

void cdf53_unupdate_s(const int32_t* s, const int32_t* d0, const int32_t* d1,
                      int32_t* even, size_t n) {
    for (size_t i = 0; i < n; ++i)
        even[i] = s[i] - ((d0[i] + d1[i] + 2) >> 2);
}

void cdf53_unpredict_s(const int32_t* d, const int32_t* e0, const int32_t* e1,
                       int32_t* odd, size_t n) {
    for (size_t i = 0; i < n; ++i)
        odd[i] = d[i] + ((e0[i] + e1[i]) >> 1);
}

void rgb_to_ycbcr_s(const uint8_t* r, const uint8_t* g, const uint8_t* b,
                    uint8_t* y, uint8_t* cb, uint8_t* cr, size_t n) {
    for (size_t i = 0; i < n; ++i) {
        int32_t R = r[i], G = g[i], B = b[i];
        y[i] = clamp_u8((kYR * R + kYG * G + kYB * B + kHalf) >> 16);
        cb[i] = clamp_u8(128 + ((kCbR * R + kCbG * G + kCbB * B + kHalf) >> 16));
        cr[i] = clamp_u8(128 + ((kCrR * R + kCrG * G + kCrB * B + kHalf) >> 16));
    }
}

void ycbcr_to_rgb_s(const uint8_t* y, const uint8_t* cb, const uint8_t* cr,
                    uint8_t* r, uint8_t* g, uint8_t* b, size_t n) {
    for (size_t i = 0; i < n; ++i) {
        int32_t Y = y[i], Cb = cb[i] - 128, Cr = cr[i] - 128;
        r[i] = clamp_u8(Y + ((kRCr * Cr + kHalf) >> 16));
        g[i] = clamp_u8(Y - ((kGCb * Cb + kGCr * Cr + kHalf) >> 16));
        b[i] = clamp_u8(Y + ((kBCb * Cb + kHalf) >> 16));
    }
}

uint64_t sum_sq_diff_s(const uint8_t* a, const uint8_t* b, size_t n) {
    uint64_t acc = 0;
    for (size_t i = 0; i < n; ++i) {
        int32_t d = (int32_t)a[i] - (int32_t)b[i];
        acc += (uint64_t)(d * d);
    }
    return acc;
}

void bilateral_row_s(const float* pad, size_t pad_stride, int width, int radius,
                     const float* spatial, float inv_two_sigma_r2, float* out) {
    for (int x = 0; x < width; ++x)
        out[x] = bilateral_pixel(pad, pad_stride, x, radius, spatial, inv_two_sigma_r2);
}

} // namespace

float fast_exp_neg(float x) { return detail::fast_exp_neg_scalar(x); }

const Kernels& scalar() {
    static const Kernels k = {
        "scalar",
        haar_fwd_s, haar_inv_s,
        cdf53_predict_s, cdf53_update_s, cdf53_unupdate_s, cdf53_unpredict_s,
        rgb_to_ycbcr_s, ycbcr_to_rgb_s,
        sum_sq_diff_s,
        bilateral_row_s,
    };
    return k;
}

} // namespace hdrwm::kernels

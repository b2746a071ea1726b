// AVX2 kernel variants. Compiled with -mavx2 (no FMA: contraction would
// break bit-equivalence with the scalar reference).

#include "hdrwm/kernels.hpp"

#include "kernels_common.hpp"

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#include <cstring>

namespace hdrwm::kernels {

using namespace detail;

namespace {

void haar_fwd_v(const int32_t* even, const int32_t* odd, int32_t* s, int32_t* d, size_t n) {
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256i e = _mm256_loadu_si256((const __m256i*)(even + i));
        __m256i o = _mm256_loadu_si256((const __m256i*)(odd + i));
        __m256i dv = _mm256_sub_epi32(o, e);
        __m256i sv = _mm256_add_epi32(e, _mm256_srai_epi32(dv, 1));
        _mm256_storeu_si256((__m256i*)(d + i), dv);
        _mm256_storeu_si256((__m256i*)(s + i), sv);
    }
    for (; i < n; ++i) {
        int32_t di = odd[i] - even[i];
        d[i] = di;
        s[i] = even[i] + (di >> 1);
    }
}

void haar_inv_v(const int32_t* s, const int32_t* d, int32_t* even, int32_t* odd, size_t n) {
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256i sv = _mm256_loadu_si256((const __m256i*)(s + i));
        __m256i dv = _mm256_loadu_si256((const __m256i*)(d + i));
        __m256i e = _mm256_sub_epi32(sv, _mm256_srai_epi32(dv, 1));
        __m256i o = _mm256_add_epi32(dv, e);
        _mm256_storeu_si256((__m256i*)(even + i), e);
        _mm256_storeu_si256((__m256i*)(odd + i), o);
    }
    for (; i < n; ++i) {
        int32_t e = s[i] - (d[i] >> 1);
        even[i] = e;
        odd[i] = d[i] + e;
    }
}

void cdf53_predict_v(const int32_t* odd, const int32_t* e0, const int32_t* e1,
                     int32_t* d, size_t n) {
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256i o = _mm256_loadu_si256((const __m256i*)(odd + i));
        __m256i a = _mm256_loadu_si256((const __m256i*)(e0 + i));
        __m256i b = _mm256_loadu_si256((const __m256i*)(e1 + i));
        __m256i m = _mm256_srai_epi32(_mm256_add_epi32(a, b), 1);
        _mm256_storeu_si256((__m256i*)(d + i), _mm256_sub_epi32(o, m));
    }
    for (; i < n; ++i) d[i] = odd[i] - ((e0[i] + e1[i]) >> 1);
}

void cdf53_update_v(const int32_t* even, const int32_t* d0, const int32_t* d1,
                    int32_t* s, size_t n) {
    const __m256i two = _mm256_set1_epi32(2);
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256i e = _mm256_loadu_si256((const __m256i*)(even + i));
        __m256i a = _mm256_loadu_si256((const __m256i*)(d0 + i));
        __m256i b = _mm256_loadu_si256((const __m256i*)(d1 + i));
        __m256i m = _mm256_srai_epi32(_mm256_add_epi32(_mm256_add_epi32(a, b), two), 2);
        _mm256_storeu_si256((__m256i*)(s + i), _mm256_add_epi32(e, m));
    }
    for (; i < n; ++i) s[i] = even[i] + ((d0[i] + d1[i] + 2) >> 2);
}

void cdf53_unupdate_v(const int32_t* s, const int32_t* d0, const int32_t* d1,
                      int32_t* even, size_t n) {
    const __m256i two = _mm256_set1_epi32(2);
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256i sv = _mm256_loadu_si256((const __m256i*)(s + i));
        __m256i a = _mm256_loadu_si256((const __m256i*)(d0 + i));
        __m256i b = _mm256_loadu_si256((const __m256i*)(d1 + i));
        __m256i m = _mm256_srai_epi32(_mm256_add_epi32(_mm256_add_epi32(a, b), two), 2);
        _mm256_storeu_si256((__m256i*)(even + i), _mm256_sub_epi32(sv, m));
    }
    for (; i < n; ++i) even[i] = s[i] - ((d0[i] + d1[i] + 2) >> 2);
}

void cdf53_unpredict_v(const int32_t* d, const int32_t* e0, const int32_t* e1,
                       int32_t* odd, size_t n) {
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256i dv = _mm256_loadu_si256((const __m256i*)(d + i));
        __m256i a = _mm256_loadu_si256((const __m256i*)(e0 + i));
        __m256i b = _mm256_loadu_si256((const __m256i*)(e1 + i));
        __m256i m = _mm256_srai_epi32(_mm256_add_epi32(a, b), 1);
        _mm256_storeu_si256((__m256i*)(odd + i), _mm256_add_epi32(dv, m));
    }
    for (; i < n; ++i) odd[i] = d[i] + ((e0[i] + e1[i]) >> 1);
}

inline __m256i load8_u8_epi32(const uint8_t* p) {
    return _mm256_cvtepu8_epi32(_mm_loadl_epi64((const __m128i*)p));
}

inline void store8_epi32_u8(uint8_t* p, __m256i v) {
    const __m256i mask = _mm256_setr_epi8(
        0, 4, 8, 12, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1,
        0, 4, 8, 12, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1);
    __m256i sh = _mm256_shuffle_epi8(v, mask);
    uint32_t lo = (uint32_t)_mm256_extract_epi32(sh, 0);
    uint32_t hi = (uint32_t)_mm256_extract_epi32(sh, 4);
    std::memcpy(p, &lo, 4);
    std::memcpy(p + 4, &hi, 4);
}

inline __m256i clamp_epi32_u8(__m256i v) {
    v = _mm256_max_epi32(v, _mm256_setzero_si256());
    return _mm256_min_epi32(v, _mm256_set1_epi32(255));
}

void rgb_to_ycbcr_v(const uint8_t* r, const uint8_t* g, const uint8_t* b,
                    uint8_t* y, uint8_t* cb, uint8_t* cr, size_t n) {
    const __m256i half = _mm256_set1_epi32(kHalf);
    const __m256i c128 = _mm256_set1_epi32(128);
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256i R = load8_u8_epi32(r + i);
        __m256i G = load8_u8_epi32(g + i);
        __m256i B = load8_u8_epi32(b + i);
        __m256i Y = _mm256_add_epi32(
            _mm256_add_epi32(_mm256_mullo_epi32(R, _mm256_set1_epi32(kYR)),
                             _mm256_mullo_epi32(G, _mm256_set1_epi32(kYG))),
            _mm256_add_epi32(_mm256_mullo_epi32(B, _mm256_set1_epi32(kYB)), half));
        Y = _mm256_srai_epi32(Y, 16);
        __m256i CB = _mm256_add_epi32(
            _mm256_add_epi32(_mm256_mullo_epi32(R, _mm256_set1_epi32(kCbR)),
                             _mm256_mullo_epi32(G, _mm256_set1_epi32(kCbG))),
            _mm256_add_epi32(_mm256_mullo_epi32(B, _mm256_set1_epi32(kCbB)), half));
        CB = _mm256_add_epi32(c128, _mm256_srai_epi32(CB, 16));
        __m256i CR = _mm256_add_epi32(
            _mm256_add_epi32(_mm256_mullo_epi32(R, _mm256_set1_epi32(kCrR)),
                             _mm256_mullo_epi32(G, _mm256_set1_epi32(kCrG))),
            _mm256_add_epi32(_mm256_mullo_epi32(B, _mm256_set1_epi32(kCrB)), half));
        CR = _mm256_add_epi32(c128, _mm256_srai_epi32(CR, 16));
        store8_epi32_u8(y + i, clamp_epi32_u8(Y));
        store8_epi32_u8(cb + i, clamp_epi32_u8(CB));
        store8_epi32_u8(cr + i, clamp_epi32_u8(CR));
    }
    if (i < n) scalar().rgb_to_ycbcr_n(r + i, g + i, b + i, y + i, cb + i, cr + i, n - i);
}

void ycbcr_to_rgb_v(const uint8_t* y, const uint8_t* cb, const uint8_t* cr,
                    uint8_t* r, uint8_t* g, uint8_t* b, size_t n) {
    const __m256i half = _mm256_set1_epi32(kHalf);
    const __m256i c128 = _mm256_set1_epi32(128);
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256i Y = load8_u8_epi32(y + i);
        __m256i Cb = _mm256_sub_epi32(load8_u8_epi32(cb + i), c128);
        __m256i Cr = _mm256_sub_epi32(load8_u8_epi32(cr + i), c128);
        __m256i R = _mm256_add_epi32(
            Y, _mm256_srai_epi32(
                   _mm256_add_epi32(_mm256_mullo_epi32(Cr, _mm256_set1_epi32(kRCr)), half), 16));
        __m256i G = _mm256_sub_epi32(
            Y, _mm256_srai_epi32(
                   _mm256_add_epi32(
                       _mm256_add_epi32(_mm256_mullo_epi32(Cb, _mm256_set1_epi32(kGCb)),
                                        _mm256_mullo_epi32(Cr, _mm256_set1_epi32(kGCr))),
                       half),
                   16));
        __m256i B = _mm256_add_epi32(
            Y, _mm256_srai_epi32(
                   _mm256_add_epi32(_mm256_mullo_epi32(Cb, _mm256_set1_epi32(kBCb)), half), 16));
        store8_epi32_u8(r + i, clamp_epi32_u8(R));
        store8_epi32_u8(g + i, clamp_epi32_u8(G));
        store8_epi32_u8(b + i, clamp_epi32_u8(B));
    }
    if (i < n) scalar().ycbcr_to_rgb_n(y + i, cb + i, cr + i, r + i, g + i, b + i, n - i);
}

uint64_t sum_sq_diff_v(const uint8_t* a, const uint8_t* b, size_t n) {
    __m256i acc = _mm256_setzero_si256(); // 4 x u64
    const __m256i zero = _mm256_setzero_si256();
    size_t i = 0;
    for (; i + 16 <= n; i += 16) {
        __m256i av = _mm256_cvtepu8_epi16(_mm_loadu_si128((const __m128i*)(a + i)));
        __m256i bv = _mm256_cvtepu8_epi16(_mm_loadu_si128((const __m128i*)(b + i)));
        __m256i d = _mm256_sub_epi16(av, bv);
        __m256i sq = _mm256_madd_epi16(d, d); // 8 x i32, each <= 2*255^2
        acc = _mm256_add_epi64(acc, _mm256_unpacklo_epi32(sq, zero));
        acc = _mm256_add_epi64(acc, _mm256_unpackhi_epi32(sq, zero));
    }
    alignas(32) uint64_t lanes[4];
    _mm256_store_si256((__m256i*)lanes, acc);
    uint64_t total = lanes[0] + lanes[1] + lanes[2] + lanes[3];
    for (; i < n; ++i) {
        int32_t d = (int32_t)a[i] - (int32_t)b[i];
        total += (uint64_t)(d * d);
    }
    return total;
}

inline __m256 fast_exp_neg_v(__m256 x) {
    x = _mm256_max_ps(x, _mm256_set1_ps(kExpLo));
    __m256 t = _mm256_mul_ps(x, _mm256_set1_ps(kLog2E));
    __m256 k = _mm256_floor_ps(_mm256_add_ps(t, _mm256_set1_ps(0.5f)));
    __m256 f = _mm256_sub_ps(t, k);
    __m256 p = _mm256_set1_ps(kExpC0);
    p = _mm256_add_ps(_mm256_mul_ps(p, f), _mm256_set1_ps(kExpC1));
    p = _mm256_add_ps(_mm256_mul_ps(p, f), _mm256_set1_ps(kExpC2));
    p = _mm256_add_ps(_mm256_mul_ps(p, f), _mm256_set1_ps(kExpC3));
    p = _mm256_add_ps(_mm256_mul_ps(p, f), _mm256_set1_ps(kExpC4));
    p = _mm256_add_ps(_mm256_mul_ps(p, f), _mm256_set1_ps(kExpC5));
    p = _mm256_add_ps(_mm256_mul_ps(p, f), _mm256_set1_ps(1.0f));
    __m256i ki = _mm256_cvttps_epi32(k);
    __m256i bits = _mm256_slli_epi32(_mm256_add_epi32(ki, _mm256_set1_epi32(127)), 23);
    return _mm256_mul_ps(p, _mm256_castsi256_ps(bits));
}

void bilateral_row_v(const float* pad, size_t pad_stride, int width, int radius,
                     const float* spatial, float inv_two_sigma_r2, float* out) {
    const __m256 inv = _mm256_set1_ps(inv_two_sigma_r2);
    int x = 0;
    for (; x + 8 <= width; x += 8) {
        __m256 c = _mm256_loadu_ps(pad + x);
        __m256 num = _mm256_setzero_ps();
        __m256 den = _mm256_setzero_ps();
        size_t k = 0;
        for (int dy = -radius; dy <= radius; ++dy) {
            const float* row = pad + x + (ptrdiff_t)dy * (ptrdiff_t)pad_stride;
            for (int dx = -radius; dx <= radius; ++dx, ++k) {
                __m256 v = _mm256_loadu_ps(row + dx);
                __m256 d = _mm256_sub_ps(v, c);
                __m256 arg = _mm256_mul_ps(_mm256_sub_ps(_mm256_setzero_ps(),
                                                         _mm256_mul_ps(d, d)),
                                           inv);
                __m256 w = _mm256_mul_ps(_mm256_set1_ps(spatial[k]), fast_exp_neg_v(arg));
                num = _mm256_add_ps(num, _mm256_mul_ps(w, v));
                den = _mm256_add_ps(den, w);
            }
        }
        _mm256_storeu_ps(out + x, _mm256_div_ps(num, den));
    }
    for (; x < width; ++x)
        out[x] = bilateral_pixel(pad, pad_stride, x, radius, spatial, inv_two_sigma_r2);
}

} // namespace

const Kernels* avx2() {
    if (!__builtin_cpu_supports("avx2")) return nullptr;
    static const Kernels k = {
        "avx2",
        haar_fwd_v, haar_inv_v,
        cdf53_predict_v, cdf53_update_v, cdf53_unupdate_v, cdf53_unpredict_v,
        rgb_to_ycbcr_v, ycbcr_to_rgb_v,
        sum_sq_diff_v,
        bilateral_row_v,
    };
    return &k;
}

} // namespace hdrwm::kernels

#else // non-x86

namespace hdrwm::kernels {
const Kernels* avx2() { return nullptr; }
} // namespace hdrwm::kernels

#endif

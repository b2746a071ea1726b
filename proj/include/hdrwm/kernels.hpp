#pragma once

#include <cstddef>
#include <cstdint>

namespace hdrwm::kernels {

// Data-parallel inner loops used by the transform, color and metric code.
// Every entry has a scalar reference implementation and (on x86-64) an AVX2
// variant that is bit-identical to it; the active table is picked once at
// startup from CPUID, overridable with HDRWM_SIMD=scalar|avx2|auto.
//
// Integer kernels are exact by construction. The float kernels (bilateral)
// use an explicit shared exp polynomial and a fixed accumulation order so
// the two backends agree bitwise; this is enforced by tests/test_kernels.

struct Kernels {
    const char* name;

    // Haar lifting, elementwise over n entries:
    //   d = odd - even;  s = even + floor(d/2)
    void (*haar_fwd)(const int32_t* even, const int32_t* odd,
                     int32_t* s, int32_t* d, size_t n);
    void (*haar_inv)(const int32_t* s, const int32_t* d,
                     int32_t* even, int32_t* odd, size_t n);

    // CDF(2,2) aka LeGall 5/3 lifting steps, elementwise:
    //   predict:   d = odd - floor((e0 + e1)/2)
    //   update:    s = even + floor((d0 + d1 + 2)/4)
    // e1/d0 are neighbour views (caller handles symmetric extension).
    void (*cdf53_predict)(const int32_t* odd, const int32_t* e0,
                          const int32_t* e1, int32_t* d, size_t n);
    void (*cdf53_update)(const int32_t* even, const int32_t* d0,
                         const int32_t* d1, int32_t* s, size_t n);
    void (*cdf53_unupdate)(const int32_t* s, const int32_t* d0,
                           const int32_t* d1, int32_t* even, size_t n);
    void (*cdf53_unpredict)(const int32_t* d, const int32_t* e0,
                            const int32_t* e1, int32_t* odd, size_t n);

    // BT.601 full-range fixed point conversion, planar, n pixels.
    void (*rgb_to_ycbcr_n)(const uint8_t* r, const uint8_t* g, const uint8_t* b,
                           uint8_t* y, uint8_t* cb, uint8_t* cr, size_t n);
    void (*ycbcr_to_rgb_n)(const uint8_t* y, const uint8_t* cb, const uint8_t* cr,
                           uint8_t* r, uint8_t* g, uint8_t* b, size_t n);

    // Sum of squared differences of two u8 planes.
    uint64_t (*sum_sq_diff_u8)(const uint8_t* a, const uint8_t* b, size_t n);

    // One output row of a brute-force bilateral filter on a padded plane.
    // pad points at the padded pixel corresponding to output (0, y);
    // spatial holds (2*radius+1)^2 spatial weights, tap order (dy, dx).
    void (*bilateral_row)(const float* pad, size_t pad_stride,
                          int width, int radius, const float* spatial,
                          float inv_two_sigma_r2, float* out);
};

const Kernels& scalar();          // reference implementations
const Kernels* avx2();            // nullptr when unsupported at runtime
const Kernels& active();          // selected backend (env override honoured)
const char* backend_name();       // name of the active backend

// exp(x) for x <= 0, shared polynomial; the scalar counterpart of the
// vector approximation used inside bilateral_row. Exposed for tests.
float fast_exp_neg(float x);

} // namespace hdrwm::kernels

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "hdrwm/kernels.hpp"

using namespace hdrwm;

namespace {

std::mt19937 rng(12345);

std::vector<int32_t> rand_i32(size_t n, int32_t lo, int32_t hi) {
    std::uniform_int_distribution<int32_t> d(lo, hi);
    std::vector<int32_t> v(n);
    for (auto& x : v) x = d(rng);
    return v;
}

std::vector<uint8_t> rand_u8(size_t n) {
    std::uniform_int_distribution<int> d(0, 255);
    std::vector<uint8_t> v(n);
    for (auto& x : v) x = (uint8_t)d(rng);
    return v;
}

const kernels::Kernels* avx2_or_skip() {
    const kernels::Kernels* v = kernels::avx2();
    if (!v) { MESSAGE("AVX2 not available; equivalence checks skipped"); }
    return v;
}

} // namespace

TEST_CASE("lifting kernels: avx2 matches scalar bitwise") {
    const auto* v = avx2_or_skip();
    if (!v) return;
    const auto& s = kernels::scalar();
    for (size_t n : {1u, 7u, 8u, 31u, 256u, 1000u}) {
        auto even = rand_i32(n + 1, -100000, 100000);
        auto odd = rand_i32(n, -100000, 100000);
        auto d0 = rand_i32(n, -100000, 100000);
        auto d1 = rand_i32(n, -100000, 100000);

        std::vector<int32_t> a1(n), a2(n), b1(n), b2(n);
        s.haar_fwd(even.data(), odd.data(), a1.data(), b1.data(), n);
        v->haar_fwd(even.data(), odd.data(), a2.data(), b2.data(), n);
        CHECK(a1 == a2);
        CHECK(b1 == b2);

        s.haar_inv(even.data(), odd.data(), a1.data(), b1.data(), n);
        v->haar_inv(even.data(), odd.data(), a2.data(), b2.data(), n);
        CHECK(a1 == a2);
        CHECK(b1 == b2);

        s.cdf53_predict(odd.data(), even.data(), even.data() + 1, a1.data(), n);
        v->cdf53_predict(odd.data(), even.data(), even.data() + 1, a2.data(), n);
        CHECK(a1 == a2);

        s.cdf53_update(odd.data(), d0.data(), d1.data(), a1.data(), n);
        v->cdf53_update(odd.data(), d0.data(), d1.data(), a2.data(), n);
        CHECK(a1 == a2);

        s.cdf53_unupdate(odd.data(), d0.data(), d1.data(), a1.data(), n);
        v->cdf53_unupdate(odd.data(), d0.data(), d1.data(), a2.data(), n);
        CHECK(a1 == a2);

        s.cdf53_unpredict(odd.data(), even.data(), even.data() + 1, a1.data(), n);
        v->cdf53_unpredict(odd.data(), even.data(), even.data() + 1, a2.data(), n);
        CHECK(a1 == a2);
    }
}

TEST_CASE("color kernels: avx2 matches scalar bitwise") {
    const auto* v = avx2_or_skip();
    if (!v) return;
    const auto& s = kernels::scalar();
    for (size_t n : {1u, 8u, 15u, 4096u}) {
        auto r = rand_u8(n), g = rand_u8(n), b = rand_u8(n);
        std::vector<uint8_t> y1(n), cb1(n), cr1(n), y2(n), cb2(n), cr2(n);
        s.rgb_to_ycbcr_n(r.data(), g.data(), b.data(), y1.data(), cb1.data(), cr1.data(), n);
        v->rgb_to_ycbcr_n(r.data(), g.data(), b.data(), y2.data(), cb2.data(), cr2.data(), n);
        CHECK(y1 == y2);
        CHECK(cb1 == cb2);
        CHECK(cr1 == cr2);

        std::vector<uint8_t> r1(n), g1(n), b1(n), r2(n), g2(n), b2(n);
        s.ycbcr_to_rgb_n(r.data(), g.data(), b.data(), r1.data(), g1.data(), b1.data(), n);
        v->ycbcr_to_rgb_n(r.data(), g.data(), b.data(), r2.data(), g2.data(), b2.data(), n);
        CHECK(r1 == r2);
        CHECK(g1 == g2);
        CHECK(b1 == b2);
    }
}

TEST_CASE("sum_sq_diff: avx2 matches scalar") {
    const auto* v = avx2_or_skip();
    if (!v) return;
    const auto& s = kernels::scalar();
    for (size_t n : {1u, 16u, 17u, 262144u}) {
        auto a = rand_u8(n), b = rand_u8(n);
        CHECK(s.sum_sq_diff_u8(a.data(), b.data(), n) == v->sum_sq_diff_u8(a.data(), b.data(), n));
    }
    std::vector<uint8_t> z(1 << 20, 0), f(1 << 20, 255);
    CHECK(s.sum_sq_diff_u8(z.data(), f.data(), z.size()) == (uint64_t)65025 * (1 << 20));
    CHECK(v->sum_sq_diff_u8(z.data(), f.data(), z.size()) == (uint64_t)65025 * (1 << 20));
}

TEST_CASE("fast_exp_neg tracks expf within 5e-6 relative") {
    for (float x = -87.0f; x <= 0.0f; x += 0.0113f) {
        float got = kernels::fast_exp_neg(x);
        float want = std::exp(x);
        CHECK(std::abs(got - want) <= 5e-6f * want + 1e-42f);
    }
    CHECK(kernels::fast_exp_neg(0.0f) == 1.0f);
}

TEST_CASE("bilateral_row: avx2 matches scalar bitwise") {
    const auto* v = avx2_or_skip();
    if (!v) return;
    const auto& s = kernels::scalar();

    for (int radius : {1, 3, 7}) {
        int w = 83, h = 9;
        int pw = w + 2 * radius;
        std::uniform_real_distribution<float> dist(-6.0f, 0.5f);
        std::vector<float> pad((size_t)pw * (h + 2 * radius));
        for (auto& x : pad) x = dist(rng);

        int side = 2 * radius + 1;
        std::vector<float> spatial((size_t)side * side);
        for (int dy = -radius, k = 0; dy <= radius; ++dy)
            for (int dx = -radius; dx <= radius; ++dx, ++k)
                spatial[k] = (float)std::exp(-(dx * dx + dy * dy) / 8.0);

        float inv = 1.0f / (2.0f * 0.4f * 0.4f);
        for (int y = 0; y < h; ++y) {
            const float* base = pad.data() + (size_t)(y + radius) * pw + radius;
            std::vector<float> o1(w), o2(w);
            s.bilateral_row(base, pw, w, radius, spatial.data(), inv, o1.data());
            v->bilateral_row(base, pw, w, radius, spatial.data(), inv, o2.data());
            CHECK(std::memcmp(o1.data(), o2.data(), w * sizeof(float)) == 0);
        }
    }
}

TEST_CASE("active backend is valid") {
    const char* n = kernels::backend_name();
    CHECK((std::strcmp(n, "scalar") == 0 || std::strcmp(n, "avx2") == 0));
}

#include <doctest.h>

#include <cmath>
#include <random>

#include "hdrwm/resize.hpp"

using namespace hdrwm;

namespace {

// Independent per-pixel Catmull-Rom evaluation used as the oracle.
double catrom_ref(double x) {
    x = std::abs(x);
    constexpr double a = -0.5;
    if (x <= 1.0) return ((a + 2.0) * x - (a + 3.0)) * x * x + 1.0;
    if (x < 2.0) return ((a * x - 5.0 * a) * x + 8.0 * a) * x - 4.0 * a;
    return 0.0;
}

double oracle_sample(const std::vector<float>& src, int sw, int sh, int dw, int dh,
                     int ox, int oy) {
    double sx = (double)sw / dw, sy = (double)sh / dh;
    double cx = (ox + 0.5) * sx - 0.5;
    double cy = (oy + 0.5) * sy - 0.5;
    int bx = (int)std::floor(cx), by = (int)std::floor(cy);
    double acc = 0.0;
    for (int j = -1; j <= 2; ++j)
        for (int i = -1; i <= 2; ++i) {
            int px = std::clamp(bx + i, 0, sw - 1);
            int py = std::clamp(by + j, 0, sh - 1);
            acc += catrom_ref(cx - (bx + i)) * catrom_ref(cy - (by + j)) *
                   (double)src[(size_t)py * sw + px];
        }
    return acc;
}

} // namespace

TEST_CASE("constant images stay exactly constant through resize") {
    HdrImage img(13, 9);
    for (int c = 0; c < 3; ++c)
        for (auto& v : img.plane(c)) v = 41.625f;
    auto out = resize_cubic(img, 37, 21);
    for (int c = 0; c < 3; ++c)
        for (float v : out.plane(c)) CHECK(v == 41.625f);

    SdrImage s(16, 16);
    for (int c = 0; c < 3; ++c)
        for (auto& v : s.plane(c)) v = 200;
    auto so = resize_cubic(s, 512, 512);
    for (int c = 0; c < 3; ++c)
        for (uint8_t v : so.plane(c)) CHECK(v == 200);
}

TEST_CASE("identity resize is a copy") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> d(0, 255);
    SdrImage img(64, 48);
    for (int c = 0; c < 3; ++c)
        for (auto& v : img.plane(c)) v = (uint8_t)d(rng);
    auto out = resize_cubic(img, 64, 48);
    for (int c = 0; c < 3; ++c) CHECK(out.plane(c) == img.plane(c));
}

TEST_CASE("4x4 ramp upscaled to 8x8 matches the direct kernel-sum oracle") {
    HdrImage img(4, 4);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x) {
            float v = (float)(y * 4 + x);
            img.r[(size_t)y * 4 + x] = v;
            img.g[(size_t)y * 4 + x] = 3.0f * v;
            img.b[(size_t)y * 4 + x] = 100.0f - v;
        }
    auto out = resize_cubic(img, 8, 8);
    for (int c = 0; c < 3; ++c)
        for (int y = 0; y < 8; ++y)
            for (int x = 0; x < 8; ++x) {
                double want = oracle_sample(img.plane(c), 4, 4, 8, 8, x, y);
                if (want < 0.0) want = 0.0; // output clamps to the HDR domain
                double got = out.plane(c)[(size_t)y * 8 + x];
                CHECK(got == doctest::Approx(want).epsilon(1e-6));
            }
}

TEST_CASE("SDR resize matches oracle within 1 LSB") {
    std::mt19937 rng(21);
    std::uniform_int_distribution<int> d(0, 255);
    SdrImage img(20, 14);
    for (int c = 0; c < 3; ++c)
        for (auto& v : img.plane(c)) v = (uint8_t)d(rng);
    auto out = resize_cubic(img, 33, 27);
    std::vector<float> plane(img.pixel_count());
    for (int c = 0; c < 3; ++c) {
        for (size_t i = 0; i < plane.size(); ++i) plane[i] = img.plane(c)[i];
        for (int y = 0; y < 27; ++y)
            for (int x = 0; x < 33; ++x) {
                double want = oracle_sample(plane, 20, 14, 33, 27, x, y);
                want = std::clamp(std::floor(want + 0.5), 0.0, 255.0);
                CHECK(std::abs(out.plane(c)[(size_t)y * 33 + x] - want) <= 1.0);
            }
    }
}

TEST_CASE("degenerate target dimensions are rejected") {
    HdrImage img(4, 4);
    CHECK_THROWS_AS(resize_cubic(img, 1, 8), FormatError);
    CHECK_THROWS_AS(resize_cubic(img, 8, 0), FormatError);
}

TEST_CASE("nearest-neighbor mask resize preserves binarity and blocks") {
    BitImage m(4, 4);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x) m.set(x, y, x < 2);
    auto up = resize_nearest(m, 8, 8);
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) CHECK(up.at(x, y) == (x < 4 ? 1 : 0));
    auto down = resize_nearest(up, 4, 4);
    CHECK(down.bits == m.bits);
}

#include <doctest.h>

#include <cstdlib>

#include "hdrwm/color.hpp"
#include "hdrwm/kernels.hpp"

using namespace hdrwm;

namespace {

SdrImage one_pixel(uint8_t a, uint8_t b, uint8_t c, ColorSpace cs) {
    SdrImage img(2, 2, cs); // 2x2 of the same value; containers want >=2
    for (size_t i = 0; i < 4; ++i) {
        img.p0[i] = a;
        img.p1[i] = b;
        img.p2[i] = c;
    }
    return img;
}

} // namespace

TEST_CASE("BT.601 full-range anchor values") {
    auto w = rgb_to_ycbcr(one_pixel(255, 255, 255, ColorSpace::RGB));
    CHECK(w.p0[0] == 255);
    CHECK(w.p1[0] == 128);
    CHECK(w.p2[0] == 128);

    auto k = rgb_to_ycbcr(one_pixel(0, 0, 0, ColorSpace::RGB));
    CHECK(k.p0[0] == 0);
    CHECK(k.p1[0] == 128);
    CHECK(k.p2[0] == 128);

    auto wi = ycbcr_to_rgb(one_pixel(255, 128, 128, ColorSpace::YCbCr));
    CHECK(wi.p0[0] == 255);
    CHECK(wi.p1[0] == 255);
    CHECK(wi.p2[0] == 255);

    auto ki = ycbcr_to_rgb(one_pixel(0, 128, 128, ColorSpace::YCbCr));
    CHECK(ki.p0[0] == 0);
    CHECK(ki.p1[0] == 0);
    CHECK(ki.p2[0] == 0);
}

TEST_CASE("colorspace tags are enforced") {
    CHECK_THROWS_AS(rgb_to_ycbcr(one_pixel(0, 0, 0, ColorSpace::YCbCr)), FormatError);
    CHECK_THROWS_AS(ycbcr_to_rgb(one_pixel(0, 0, 0, ColorSpace::RGB)), FormatError);
}

// Exhaustive over all 2^24 RGB triples: round trip error is at most 1 LSB.
TEST_CASE("rgb->ycbcr->rgb round trip <= 1 LSB, exhaustive") {
    const auto& K = kernels::active();
    const size_t N = 256 * 256;
    std::vector<uint8_t> r(N), g(N), b(N), y(N), cb(N), cr(N), r2(N), g2(N), b2(N);
    int maxerr = 0;
    for (int rr = 0; rr < 256; ++rr) {
        size_t i = 0;
        for (int gg = 0; gg < 256; ++gg)
            for (int bb = 0; bb < 256; ++bb, ++i) {
                r[i] = (uint8_t)rr;
                g[i] = (uint8_t)gg;
                b[i] = (uint8_t)bb;
            }
        K.rgb_to_ycbcr_n(r.data(), g.data(), b.data(), y.data(), cb.data(), cr.data(), N);
        K.ycbcr_to_rgb_n(y.data(), cb.data(), cr.data(), r2.data(), g2.data(), b2.data(), N);
        for (i = 0; i < N; ++i) {
            maxerr = std::max({maxerr, std::abs((int)r[i] - r2[i]),
                               std::abs((int)g[i] - g2[i]), std::abs((int)b[i] - b2[i])});
        }
    }
    CHECK(maxerr <= 1);
}

// Exhaustive over all 2^24 YCbCr triples: whenever the RGB reconstruction
// does not clamp, converting back recovers Y exactly. The watermark lives in
// Y, so this is what makes the pipeline's RGB round trip lossless for it.
TEST_CASE("ycbcr->rgb->ycbcr preserves Y exactly when in gamut, exhaustive") {
    const auto& K = kernels::active();
    const size_t N = 256 * 256;
    std::vector<uint8_t> y(N), cb(N), cr(N), r(N), g(N), b(N), y2(N), cb2(N), cr2(N);
    long long checked = 0, bad = 0;
    for (int yy = 0; yy < 256; ++yy) {
        size_t i = 0;
        for (int u = 0; u < 256; ++u)
            for (int v = 0; v < 256; ++v, ++i) {
                y[i] = (uint8_t)yy;
                cb[i] = (uint8_t)u;
                cr[i] = (uint8_t)v;
            }
        K.ycbcr_to_rgb_n(y.data(), cb.data(), cr.data(), r.data(), g.data(), b.data(), N);
        K.rgb_to_ycbcr_n(r.data(), g.data(), b.data(), y2.data(), cb2.data(), cr2.data(), N);
        for (i = 0; i < N; ++i) {
            // Recompute the unclamped channels to know whether a clamp fired.
            int Y = y[i], Cb = cb[i] - 128, Cr = cr[i] - 128;
            int R = Y + ((91881 * Cr + 32768) >> 16);
            int G = Y - ((22554 * Cb + 46802 * Cr + 32768) >> 16);
            int B = Y + ((116130 * Cb + 32768) >> 16);
            bool in_gamut = R >= 0 && R <= 255 && G >= 0 && G <= 255 && B >= 0 && B <= 255;
            if (!in_gamut) continue;
            ++checked;
            if (y2[i] != y[i]) ++bad;
        }
    }
    CHECK(bad == 0);
    CHECK(checked > 3900000); // sanity: the in-gamut volume is large
}

TEST_CASE("luma_plane matches forward conversion") {
    SdrImage img(3, 2);
    uint8_t vals[6][3] = {{1, 2, 3}, {200, 100, 50}, {255, 0, 0},
                          {0, 255, 0}, {0, 0, 255}, {17, 211, 96}};
    for (size_t i = 0; i < 6; ++i) {
        img.p0[i] = vals[i][0];
        img.p1[i] = vals[i][1];
        img.p2[i] = vals[i][2];
    }
    auto y = luma_plane(img);
    auto full = rgb_to_ycbcr(img);
    CHECK(y.v == full.p0);
}

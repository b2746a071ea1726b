#include <doctest.h>

#include <cmath>
#include <random>

#include "hdrwm/saliency.hpp"
#include "support/synth.hpp"

using namespace hdrwm;

namespace {

SdrImage gray_image(int w, int h, uint8_t v) {
    SdrImage img(w, h);
    for (int c = 0; c < 3; ++c) std::fill(img.plane(c).begin(), img.plane(c).end(), v);
    return img;
}

} // namespace

TEST_CASE("builtin detector: constant image maps to all zeros") {
    auto map = detect_saliency_builtin(gray_image(64, 64, 90));
    for (float v : map.v) CHECK(v == 0.0f);
}

TEST_CASE("builtin detector: bright square on a dark field peaks inside it") {
    auto img = gray_image(64, 64, 10);
    for (int y = 20; y < 30; ++y)
        for (int x = 20; x < 30; ++x)
            for (int c = 0; c < 3; ++c) img.plane(c)[(size_t)y * 64 + x] = 250;
    auto map = detect_saliency_builtin(img);
    float best = -1.0f;
    int bx = -1, by = -1;
    for (int y = 0; y < 64; ++y)
        for (int x = 0; x < 64; ++x)
            if (map.v[(size_t)y * 64 + x] > best) {
                best = map.v[(size_t)y * 64 + x];
                bx = x;
                by = y;
            }
    CHECK(best == 1.0f); // min-max normalized
    CHECK(bx >= 20);
    CHECK(bx < 30);
    CHECK(by >= 20);
    CHECK(by < 30);
}

TEST_CASE("external maps normalize by 255 and enforce dimensions") {
    GrayImage g(8, 8);
    for (size_t i = 0; i < g.v.size(); ++i) g.v[i] = (i % 2) ? 255 : 0;
    auto map = saliency_from_gray(g, 8, 8);
    for (size_t i = 0; i < map.v.size(); ++i)
        CHECK(map.v[i] == ((i % 2) ? 1.0f : 0.0f));
    CHECK_THROWS_AS(saliency_from_gray(g, 16, 16), FormatError);
}

TEST_CASE("threshold semantics") {
    SaliencyMap m(4, 4);
    std::fill(m.v.begin(), m.v.end(), 0.9f);
    auto all = threshold_mask(m, 0.5f);
    CHECK(all.popcount() == 16);
    CHECK(all.threshold_used == 0.5f);

    std::fill(m.v.begin(), m.v.end(), 0.5f);
    CHECK(threshold_mask(m, 0.5f).popcount() == 16); // >= convention

    std::fill(m.v.begin(), m.v.end(), 0.3f);
    CHECK(threshold_mask(m, 0.0f).popcount() == 16);
    CHECK(threshold_mask(m, 0.31f).popcount() == 0);
    CHECK_THROWS_AS(threshold_mask(m, 1.5f), ConfigError);
}

TEST_CASE("thresholding is monotone in t") {
    std::mt19937 rng(9);
    SaliencyMap m(32, 32);
    std::uniform_real_distribution<float> d(0.0f, 1.0f);
    for (auto& v : m.v) v = d(rng);
    for (float t1 = 0.1f; t1 < 0.9f; t1 += 0.2f) {
        auto a = threshold_mask(m, t1);
        auto b = threshold_mask(m, t1 + 0.1f);
        for (size_t i = 0; i < a.bits.size(); ++i)
            CHECK(b.bits[i] <= a.bits[i]); // mask(t2) subset of mask(t1)
    }
}

TEST_CASE("segmentation partitions the host exactly") {
    std::mt19937 rng(10);
    std::uniform_int_distribution<int> d(0, 255);
    SdrImage img(32, 32);
    for (int c = 0; c < 3; ++c)
        for (auto& v : img.plane(c)) v = (uint8_t)d(rng);

    BinaryMask ones(32, 32);
    std::fill(ones.bits.begin(), ones.bits.end(), (uint8_t)1);
    auto sp = segment_host(img, ones);
    for (int c = 0; c < 3; ++c) {
        CHECK(sp.foreground.plane(c) == img.plane(c));
        for (uint8_t v : sp.background.plane(c)) CHECK(v == 0);
    }

    BinaryMask zeros(32, 32);
    auto sz = segment_host(img, zeros);
    for (int c = 0; c < 3; ++c) {
        CHECK(sz.background.plane(c) == img.plane(c));
        for (uint8_t v : sz.foreground.plane(c)) CHECK(v == 0);
    }

    BinaryMask checker(32, 32);
    for (int y = 0; y < 32; ++y)
        for (int x = 0; x < 32; ++x) checker.bits[(size_t)y * 32 + x] = (x + y) & 1;
    auto sc = segment_host(img, checker);
    for (int c = 0; c < 3; ++c)
        for (size_t i = 0; i < img.pixel_count(); ++i) {
            CHECK(sc.foreground.plane(c)[i] + sc.background.plane(c)[i] == img.plane(c)[i]);
            CHECK((sc.foreground.plane(c)[i] == 0 || sc.background.plane(c)[i] == 0));
        }

    BinaryMask wrong(16, 16);
    CHECK_THROWS_AS(segment_host(img, wrong), FormatError);
}

TEST_CASE("watermark partitioning conserves set bits") {
    auto w = synth::random_bits(12, 256, 256);
    BinaryMask mask(256, 256);
    auto noise = synth::random_bits(13, 256, 256);
    mask.bits = noise.bits;
    auto sp = partition_watermark(w, mask);
    CHECK(sp.foreground.popcount() + sp.background.popcount() == w.popcount());
    for (size_t i = 0; i < w.bits.size(); ++i) {
        CHECK((sp.foreground.bits[i] | sp.background.bits[i]) == w.bits[i]);
        CHECK((sp.foreground.bits[i] & sp.background.bits[i]) == 0);
    }
}

TEST_CASE("watermark partition anchors") {
    BitImage w(16, 16);
    std::fill(w.bits.begin(), w.bits.end(), (uint8_t)1);
    BinaryMask ones(16, 16);
    std::fill(ones.bits.begin(), ones.bits.end(), (uint8_t)1);
    auto sp = partition_watermark(w, ones);
    CHECK(sp.foreground.bits == w.bits);
    CHECK(sp.background.popcount() == 0);

    // W equal to the mask: everything lands in the foreground.
    auto wm = synth::random_bits(14, 16, 16);
    BinaryMask self(16, 16);
    self.bits = wm.bits;
    auto sp2 = partition_watermark(wm, self);
    CHECK(sp2.foreground.bits == wm.bits);
    CHECK(sp2.background.popcount() == 0);
}

TEST_CASE("partition resizes the mask to the watermark dimensions") {
    auto w = synth::random_bits(15, 64, 64);
    BinaryMask mask(128, 128);
    for (int y = 0; y < 128; ++y)
        for (int x = 0; x < 128; ++x) mask.bits[(size_t)y * 128 + x] = x < 64;
    auto sp = partition_watermark(w, mask);
    CHECK(sp.mask.width == 64);
    CHECK(sp.foreground.popcount() + sp.background.popcount() == w.popcount());
}

TEST_CASE("bce loss closed forms") {
    BinaryMask truth(16, 16);
    auto bits = synth::random_bits(16, 16, 16);
    truth.bits = bits.bits;

    SaliencyMap perfect(16, 16);
    for (size_t i = 0; i < truth.bits.size(); ++i) perfect.v[i] = truth.bits[i];
    CHECK(bce_loss(perfect, truth) <= 1.01e-7);

    SaliencyMap half(16, 16);
    std::fill(half.v.begin(), half.v.end(), 0.5f);
    CHECK(bce_loss(half, truth) == doctest::Approx(std::log(2.0)).epsilon(1e-9));

    SaliencyMap inverted(16, 16);
    for (size_t i = 0; i < truth.bits.size(); ++i) inverted.v[i] = 1.0f - truth.bits[i];
    CHECK(bce_loss(inverted, truth) == doctest::Approx(-std::log(1e-7)).epsilon(1e-9));

    SaliencyMap wrong(8, 8);
    CHECK_THROWS_AS(bce_loss(wrong, truth), FormatError);
}

#include <doctest.h>

#include <random>

#include "hdrwm/lwt.hpp"

using namespace hdrwm;

namespace {

std::mt19937 rng(4242);

std::vector<int32_t> random_plane(int w, int h, int lo = 0, int hi = 255) {
    std::uniform_int_distribution<int32_t> d(lo, hi);
    std::vector<int32_t> p((size_t)w * h);
    for (auto& v : p) v = d(rng);
    return p;
}

} // namespace

TEST_CASE("constant planes have zero detail and LL equal to the constant") {
    for (auto k : {WaveletKernel::Haar, WaveletKernel::Cdf22}) {
        std::vector<int32_t> plane(64 * 64, 77);
        auto bands = lwt_forward(plane, 64, 64, k);
        for (auto v : bands.ll) CHECK(v == 77);
        for (auto v : bands.hl) CHECK(v == 0);
        for (auto v : bands.lh) CHECK(v == 0);
        for (auto v : bands.hh) CHECK(v == 0);
    }
}

TEST_CASE("haar lifting pair example: even=10 odd=14 -> d=4 s=12") {
    // 2x2 plane with columns (10, 14): the row pass sees even=10, odd=14.
    std::vector<int32_t> plane = {10, 14, 10, 14};
    auto bands = lwt_forward(plane, 2, 2, WaveletKernel::Haar);
    CHECK(bands.hl[0] == 4);  // horizontal detail d = 14 - 10
    CHECK(bands.ll[0] == 12); // s = 10 + floor(4/2), vertically constant
    CHECK(bands.lh[0] == 0);
    CHECK(bands.hh[0] == 0);
}

TEST_CASE("perfect reconstruction on random planes, both kernels") {
    for (auto k : {WaveletKernel::Haar, WaveletKernel::Cdf22}) {
        for (int trial = 0; trial < 10; ++trial) {
            int w = 2 * (1 + trial % 5) + 500;
            int h = 512 - 2 * (trial % 7);
            auto plane = random_plane(w, h);
            auto bands = lwt_forward(plane, w, h, k);
            CHECK(lwt_inverse(bands) == plane);
        }
    }
}

TEST_CASE("perfect reconstruction with negative and large values") {
    for (auto k : {WaveletKernel::Haar, WaveletKernel::Cdf22}) {
        auto plane = random_plane(128, 128, -100000, 100000);
        auto bands = lwt_forward(plane, 128, 128, k);
        CHECK(lwt_inverse(bands) == plane);
    }
}

TEST_CASE("odd dimensions pad by replication and reconstruct exactly") {
    for (auto k : {WaveletKernel::Haar, WaveletKernel::Cdf22}) {
        auto plane = random_plane(33, 21);
        auto bands = lwt_forward(plane, 33, 21, k);
        CHECK(bands.padded);
        CHECK(bands.sub_w == 17);
        CHECK(bands.sub_h == 11);
        CHECK(lwt_inverse(bands) == plane);
    }
}

TEST_CASE("all-zero sub-bands invert to an all-zero plane") {
    SubbandSet bands;
    bands.sub_w = bands.sub_h = 8;
    bands.src_w = bands.src_h = 16;
    bands.kernel = WaveletKernel::Cdf22;
    bands.ll.assign(64, 0);
    bands.hl.assign(64, 0);
    bands.lh.assign(64, 0);
    bands.hh.assign(64, 0);
    auto plane = lwt_inverse(bands);
    for (auto v : plane) CHECK(v == 0);
}

TEST_CASE("a +1 poke in HL survives inverse+forward exactly") {
    for (auto k : {WaveletKernel::Haar, WaveletKernel::Cdf22}) {
        auto plane = random_plane(64, 64);
        auto bands = lwt_forward(plane, 64, 64, k);
        auto poked = bands;
        poked.hl[5 * poked.sub_w + 9] += 1;
        auto rec = lwt_inverse(poked);
        auto again = lwt_forward(rec, 64, 64, k);
        for (size_t i = 0; i < bands.hl.size(); ++i) {
            int32_t want = bands.hl[i] + (i == (size_t)(5 * poked.sub_w + 9) ? 1 : 0);
            CHECK(again.hl[i] == want);
        }
        CHECK(again.ll == bands.ll);
        CHECK(again.lh == bands.lh);
        CHECK(again.hh == bands.hh);
    }
}

TEST_CASE("too-small planes are rejected") {
    std::vector<int32_t> p(2, 0);
    CHECK_THROWS_AS(lwt_forward(p, 2, 1, WaveletKernel::Haar), FormatError);
}

#include <doctest.h>

#include <random>

#include "hdrwm/qim.hpp"

using namespace hdrwm;

TEST_CASE("quantizer anchor values") {
    // parity match: floor(10/4) = 2, even, bit 0 -> lattice point 8
    CHECK(qim_embed(10, 0, 4) == 8);
    // parity mismatch rounds up to the next multiple: index 3 -> 12
    CHECK(qim_embed(10, 1, 4) == 12);
    CHECK(qim_embed(0, 0, 4) == 0);
    CHECK(qim_embed(0, 1, 4) == 4);

    CHECK(qim_extract(8, 4) == 0);  // 8 = 4*2, even index
    CHECK(qim_extract(12, 4) == 1); // 12 = 4*3, odd index
    CHECK(qim_extract(0, 4) == 0);

    // signs ride along on the magnitude
    CHECK(qim_embed(-10, 1, 4) == -12);
    CHECK(qim_extract(-12, 4) == 1);
}

TEST_CASE("nearest-multiple decode with ties toward the smaller codeword") {
    CHECK(qim_extract(9, 4) == 0);   // nearest multiple is 8
    CHECK(qim_extract(11, 4) == 1);  // nearest multiple is 12
    CHECK(qim_extract(10, 4) == 0);  // tie 8 vs 12 resolves to 8
    CHECK(qim_extract(14, 4) == 1);  // tie 12 vs 16 resolves to 12
}

TEST_CASE("exhaustive round trip and distortion bound") {
    for (int delta : {2, 4, 8, 16}) {
        for (int phi = 0; phi <= 1000; ++phi) {
            for (int w = 0; w <= 1; ++w) {
                int out = qim_embed(phi, w, delta);
                CHECK(qim_extract(out, delta) == w);
                CHECK(std::abs(out - phi) < 2 * delta);
            }
        }
    }
}

TEST_CASE("round trip holds for negative carriers") {
    for (int delta : {2, 4, 8, 16})
        for (int phi = -500; phi <= 0; ++phi)
            for (int w = 0; w <= 1; ++w) {
                int out = qim_embed(phi, w, delta);
                CHECK(qim_extract(out, delta) == w);
                CHECK(std::abs(out - phi) < 2 * delta);
            }
}

TEST_CASE("invalid quantization steps are rejected") {
    CHECK_THROWS_AS(qim_embed(10, 0, 1), ConfigError);
    CHECK_THROWS_AS(qim_extract(10, 0), ConfigError);
}

TEST_CASE("bit plane extraction anchors") {
    std::vector<int32_t> plane = {5, -5, 0, 7};
    auto p0 = extract_bitplane(plane, 4, 1, 0);
    auto p1 = extract_bitplane(plane, 4, 1, 1);
    auto p2 = extract_bitplane(plane, 4, 1, 2);
    CHECK(p0.bits == std::vector<uint8_t>{1, 1, 0, 1});
    CHECK(p1.bits == std::vector<uint8_t>{0, 0, 0, 1});
    CHECK(p2.bits == std::vector<uint8_t>{1, 1, 0, 1});

    std::vector<int32_t> zeros(16, 0);
    for (int n = 0; n < 31; ++n) {
        auto p = extract_bitplane(zeros, 4, 4, n);
        CHECK(p.popcount() == 0);
    }
}

TEST_CASE("bit plane reassembly reproduces the plane exactly") {
    std::mt19937 rng(77);
    std::uniform_int_distribution<int32_t> d(-30000, 30000);
    std::vector<int32_t> plane(64 * 64);
    for (auto& v : plane) v = d(rng);

    // Rebuild magnitudes bit plane by bit plane, then reapply signs.
    std::vector<int32_t> rebuilt(plane.size(), 0);
    for (int n = 0; n < 31; ++n) {
        auto bits = extract_bitplane(plane, 64, 64, n);
        set_bitplane(rebuilt, bits, n);
    }
    for (size_t i = 0; i < plane.size(); ++i)
        if (plane[i] < 0) rebuilt[i] = -rebuilt[i];
    CHECK(rebuilt == plane);
}

TEST_CASE("set_bitplane writes the requested bit") {
    std::vector<int32_t> plane = {8, -8, 3};
    BitImage bits(3, 1);
    bits.bits = {1, 1, 0};
    set_bitplane(plane, bits, 1);
    CHECK(plane == std::vector<int32_t>{10, -10, 1});
}

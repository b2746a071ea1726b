#include <doctest.h>

#include <set>

#include "hdrwm/keys.hpp"
#include "support/synth.hpp"

using namespace hdrwm;

TEST_CASE("siphash-2-4 matches the reference vectors") {
    uint8_t key[16];
    for (int i = 0; i < 16; ++i) key[i] = (uint8_t)i;
    CHECK(siphash24(key, nullptr, 0) == 0x726fdb47dd0e0e31ULL);
    uint8_t one = 0;
    CHECK(siphash24(key, &one, 1) == 0x74f839c593dc67fdULL);
}

TEST_CASE("key parsing") {
    std::string hex =
        "000102030405060708090a0b0c0d0e0f101112131415161718191a1b1c1d1e1f";
    auto k = SecretKey::from_hex(hex);
    CHECK(k.bytes[0] == 0x00);
    CHECK(k.bytes[31] == 0x1f);
    CHECK_THROWS_AS(SecretKey::from_hex("abcd"), ConfigError);
    CHECK_THROWS_AS(SecretKey::from_hex(std::string(64, 'g')), ConfigError);
    CHECK(k.fingerprint().size() == 16);
    CHECK(k.fingerprint() != SecretKey{}.fingerprint());
}

TEST_CASE("keyed streams are deterministic and tag-separated") {
    auto k = synth::test_key(1);
    KeyedRng a(k, "perm-f"), b(k, "perm-f"), c(k, "perm-b");
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    bool differs = false;
    KeyedRng a2(k, "perm-f");
    for (int i = 0; i < 100; ++i) differs |= a2.next_u64() != c.next_u64();
    CHECK(differs);
}

TEST_CASE("next_below stays in range and hits every residue") {
    auto k = synth::test_key(2);
    KeyedRng rng(k, "t");
    std::set<uint64_t> seen;
    for (int i = 0; i < 1000; ++i) {
        uint64_t v = rng.next_below(7);
        CHECK(v < 7);
        seen.insert(v);
    }
    CHECK(seen.size() == 7);
}

TEST_CASE("gaussian stream has sane moments") {
    auto k = synth::test_key(3);
    KeyedRng rng(k, "g");
    double sum = 0.0, sum2 = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        double v = rng.next_gaussian();
        sum += v;
        sum2 += v * v;
    }
    CHECK(std::abs(sum / n) < 0.01);
    CHECK(std::abs(sum2 / n - 1.0) < 0.02);
}

TEST_CASE("permutation: forward then inverse is the identity") {
    auto k = synth::test_key(4);
    auto bits = synth::random_bits(5, 64, 32);
    auto fwd = permute_bits(bits, k, PermDirection::Forward);
    auto back = permute_bits(fwd, k, PermDirection::Inverse);
    CHECK(back.bits == bits.bits);
    CHECK(fwd.bits != bits.bits); // astronomically unlikely to coincide
}

TEST_CASE("permuting identical symbols is a no-op image") {
    auto k = synth::test_key(6);
    BitImage ones(16, 16);
    std::fill(ones.bits.begin(), ones.bits.end(), (uint8_t)1);
    auto fwd = permute_bits(ones, k, PermDirection::Forward);
    CHECK(fwd.bits == ones.bits);
}

TEST_CASE("golden permutation trace for the zero key") {
    // Frozen reference trace: tag "perm", n = 8, all-zero key.
    SecretKey zero{};
    auto p = keyed_permutation(zero, "perm", 8);
    std::vector<uint32_t> want = {7, 5, 1, 2, 6, 3, 0, 4};
    CHECK(p == want);

    // A single 1 at index 0 lands at the trace's image of index 0.
    BitImage im(8, 1);
    im.bits[0] = 1;
    auto fwd = permute_bits(im, zero, PermDirection::Forward);
    CHECK(fwd.bits[7] == 1);
    CHECK(fwd.popcount() == 1);
}

TEST_CASE("different keys give different permutations") {
    auto a = keyed_permutation(synth::test_key(7), "perm", 4096);
    auto b = keyed_permutation(synth::test_key(8), "perm", 4096);
    CHECK(a != b);
}

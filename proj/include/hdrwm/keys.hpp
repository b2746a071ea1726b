#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "hdrwm/image.hpp"

namespace hdrwm {

// SipHash-2-4 of a byte buffer under a 128-bit key.
uint64_t siphash24(const uint8_t key[16], const uint8_t* data, size_t len);

// 256-bit key material. Sub-generators are derived with domain-separation
// tags so permutation, sampling and tau placement draw independent streams,
// identically on every platform.
struct SecretKey {
    std::array<uint8_t, 32> bytes{};

    static SecretKey from_hex(const std::string& hex64); // 64 hex chars
    static SecretKey from_file(const std::string& path);
    std::string fingerprint() const; // 16 hex chars, safe to publish
};

// Deterministic keyed stream: block i is SipHash-2-4(tag-derived key, LE64(i)).
class KeyedRng {
public:
    KeyedRng(const SecretKey& key, const std::string& tag);

    uint64_t next_u64();

    // Uniform in [0, n), n >= 1, via rejection sampling (no modulo bias).
    uint64_t next_below(uint64_t n);

    // Standard normal via Box-Muller on 53-bit uniforms.
    double next_gaussian();

private:
    uint8_t k_[16];
    uint64_t counter_ = 0;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Keyed Fisher-Yates. forward=false applies the inverse permutation.
// The permutation for a given (key, tag, n) is a platform-independent
// function of those inputs only.
std::vector<uint32_t> keyed_permutation(const SecretKey& key, const std::string& tag, size_t n);

template <typename T>
std::vector<T> apply_permutation(const std::vector<T>& v, const std::vector<uint32_t>& perm,
                                 bool forward) {
    std::vector<T> out(v.size());
    for (size_t i = 0; i < v.size(); ++i) {
        if (forward) out[perm[i]] = v[i];
        else out[i] = v[perm[i]];
    }
    return out;
}

enum class PermDirection { Forward, Inverse };

// Permutes the flattened bit sequence of a BitImage.
BitImage permute_bits(const BitImage& bits, const SecretKey& key, PermDirection dir,
                      const std::string& tag = "perm");

} // namespace hdrwm

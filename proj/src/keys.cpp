#include "hdrwm/keys.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>

namespace hdrwm {

namespace {

inline uint64_t rotl(uint64_t x, int b) { return (x << b) | (x >> (64 - b)); }

inline uint64_t load_le64(const uint8_t* p) {
    uint64_t v;
    std::memcpy(&v, p, 8);
#if defined(__BYTE_ORDER__) && __BYTE_ORDER__ == __ORDER_BIG_ENDIAN__
    v = __builtin_bswap64(v);
#endif
    return v;
}

inline void sipround(uint64_t& v0, uint64_t& v1, uint64_t& v2, uint64_t& v3) {
    v0 += v1; v1 = rotl(v1, 13); v1 ^= v0; v0 = rotl(v0, 32);
    v2 += v3; v3 = rotl(v3, 16); v3 ^= v2;
    v0 += v3; v3 = rotl(v3, 21); v3 ^= v0;
    v2 += v1; v1 = rotl(v1, 17); v1 ^= v2; v2 = rotl(v2, 32);
}

int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

} // namespace

uint64_t siphash24(const uint8_t key[16], const uint8_t* data, size_t len) {
    uint64_t k0 = load_le64(key);
    uint64_t k1 = load_le64(key + 8);
    uint64_t v0 = k0 ^ 0x736f6d6570736575ULL;
    uint64_t v1 = k1 ^ 0x646f72616e646f6dULL;
    uint64_t v2 = k0 ^ 0x6c7967656e657261ULL;
    uint64_t v3 = k1 ^ 0x7465646279746573ULL;

    const uint8_t* end = data + (len & ~(size_t)7);
    for (; data != end; data += 8) {
        uint64_t m = load_le64(data);
        v3 ^= m;
        sipround(v0, v1, v2, v3);
        sipround(v0, v1, v2, v3);
        v0 ^= m;
    }
    uint64_t b = (uint64_t)len << 56;
    switch (len & 7) {
        case 7: b |= (uint64_t)data[6] << 48; [[fallthrough]];
        case 6: b |= (uint64_t)data[5] << 40; [[fallthrough]];
        case 5: b |= (uint64_t)data[4] << 32; [[fallthrough]];
        case 4: b |= (uint64_t)data[3] << 24; [[fallthrough]];
        case 3: b |= (uint64_t)data[2] << 16; [[fallthrough]];
        case 2: b |= (uint64_t)data[1] << 8; [[fallthrough]];
        case 1: b |= (uint64_t)data[0]; break;
        case 0: break;
    }
    v3 ^= b;
    sipround(v0, v1, v2, v3);
    sipround(v0, v1, v2, v3);
    v0 ^= b;
    v2 ^= 0xff;
    sipround(v0, v1, v2, v3);
    sipround(v0, v1, v2, v3);
    sipround(v0, v1, v2, v3);
    sipround(v0, v1, v2, v3);
    return v0 ^ v1 ^ v2 ^ v3;
}

SecretKey SecretKey::from_hex(const std::string& hex) {
    if (hex.size() != 64)
        throw ConfigError("key must be 64 hex characters (256 bits)");
    SecretKey k;
    for (size_t i = 0; i < 32; ++i) {
        int hi = hex_nibble(hex[2 * i]);
        int lo = hex_nibble(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) throw ConfigError("key contains a non-hex character");
        k.bytes[i] = (uint8_t)((hi << 4) | lo);
    }
    return k;
}

SecretKey SecretKey::from_file(const std::string& path) {
    FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw IoError("cannot open key file: " + path);
    std::string hex;
    int c;
    while ((c = std::fgetc(f)) != EOF && hex.size() <= 64)
        if (!std::isspace(c)) hex.push_back((char)c);
    std::fclose(f);
    return from_hex(hex);
}

std::string SecretKey::fingerprint() const {
    // Tagged hash of the key; never reveals key material.
    uint8_t k[16];
    std::memcpy(k, bytes.data(), 16);
    const char tag[] = "hdrwm-fingerprint";
    uint8_t buf[sizeof(tag) - 1 + 16];
    std::memcpy(buf, tag, sizeof(tag) - 1);
    std::memcpy(buf + sizeof(tag) - 1, bytes.data() + 16, 16);
    uint64_t h = siphash24(k, buf, sizeof(buf));
    char out[17];
    std::snprintf(out, sizeof out, "%016llx", (unsigned long long)h);
    return out;
}

KeyedRng::KeyedRng(const SecretKey& key, const std::string& tag) {
    // Per-tag 128-bit key: two tagged hashes under the two key halves.
    uint8_t kh[16];
    std::memcpy(kh, key.bytes.data(), 16);
    std::string t1 = tag + "/lo";
    uint64_t lo = siphash24(kh, (const uint8_t*)t1.data(), t1.size());
    std::memcpy(kh, key.bytes.data() + 16, 16);
    std::string t2 = tag + "/hi";
    uint64_t hi = siphash24(kh, (const uint8_t*)t2.data(), t2.size());
    for (int i = 0; i < 8; ++i) {
        k_[i] = (uint8_t)(lo >> (8 * i));
        k_[8 + i] = (uint8_t)(hi >> (8 * i));
    }
}

uint64_t KeyedRng::next_u64() {
    uint8_t block[8];
    for (int i = 0; i < 8; ++i) block[i] = (uint8_t)(counter_ >> (8 * i));
    ++counter_;
    return siphash24(k_, block, 8);
}

uint64_t KeyedRng::next_below(uint64_t n) {
    if (n == 0) throw ConfigError("next_below(0)");
    if (n == 1) return 0;
    uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    for (;;) {
        uint64_t r = next_u64();
        if (r < limit) return r % n;
    }
}

double KeyedRng::next_gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    // Box-Muller on (0,1] x [0,1) uniforms built from 53-bit draws.
    double u1 = ((next_u64() >> 11) + 1.0) * (1.0 / 9007199254740993.0); // (0,1]
    double u2 = (next_u64() >> 11) * (1.0 / 9007199254740992.0);         // [0,1)
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

std::vector<uint32_t> keyed_permutation(const SecretKey& key, const std::string& tag, size_t n) {
    std::vector<uint32_t> perm(n);
    for (size_t i = 0; i < n; ++i) perm[i] = (uint32_t)i;
    KeyedRng rng(key, tag);
    for (size_t i = n; i > 1; --i) {
        size_t j = (size_t)rng.next_below(i);
        std::swap(perm[i - 1], perm[j]);
    }
    return perm;
}

BitImage permute_bits(const BitImage& bits, const SecretKey& key, PermDirection dir,
                      const std::string& tag) {
    auto perm = keyed_permutation(key, tag, bits.size());
    BitImage out(bits.width, bits.height);
    out.bits = apply_permutation(bits.bits, perm, dir == PermDirection::Forward);
    return out;
}

} // namespace hdrwm

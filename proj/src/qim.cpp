#include "hdrwm/qim.hpp"

#include <cstdlib>

#include "hdrwm/errors.hpp"

namespace hdrwm {

int32_t qim_embed(int32_t phi, int bit, int32_t delta) {
    if (delta < 2) throw ConfigError("quantization step must be at least 2");
    bool neg = phi < 0;
    int64_t m = neg ? -(int64_t)phi : (int64_t)phi;
    int64_t q = m / delta;
    if ((q & 1) != bit) ++q;
    int64_t out = q * delta;
    return (int32_t)(neg ? -out : out);
}

int qim_extract(int32_t phi_w, int32_t delta) {
    if (delta < 2) throw ConfigError("quantization step must be at least 2");
    int64_t m = phi_w < 0 ? -(int64_t)phi_w : (int64_t)phi_w;
    int64_t q = m / delta;
    int64_t r = m - q * delta;
    if (2 * r > delta) ++q; // ties resolve toward the smaller codeword
    return (int)(q & 1);
}

BitImage extract_bitplane(const std::vector<int32_t>& plane, int w, int h, int n) {
    if (n < 0 || n >= 31) throw ConfigError("bit plane index out of range");
    BitImage out(w, h);
    for (size_t i = 0; i < plane.size(); ++i) {
        uint32_t m = (uint32_t)std::abs((long long)plane[i]);
        out.bits[i] = (uint8_t)((m >> n) & 1);
    }
    return out;
}

void set_bitplane(std::vector<int32_t>& plane, const BitImage& bits, int n) {
    if (n < 0 || n >= 31) throw ConfigError("bit plane index out of range");
    if (bits.size() != plane.size()) throw FormatError("bit plane size mismatch");
    for (size_t i = 0; i < plane.size(); ++i) {
        bool neg = plane[i] < 0;
        uint32_t m = (uint32_t)std::abs((long long)plane[i]);
        m = (m & ~(1u << n)) | ((uint32_t)bits.bits[i] << n);
        plane[i] = neg ? -(int32_t)m : (int32_t)m;
    }
}

} // namespace hdrwm

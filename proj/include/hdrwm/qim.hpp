#pragma once

#include <cstdint>
#include <vector>

#include "hdrwm/image.hpp"

namespace hdrwm {

// Odd/even quantization index modulation on coefficient magnitudes.
// The carrier is quantized to the nearest-above multiple of delta whose
// index parity equals the bit; the sign is carried through unchanged.
// Distortion is strictly below 2*delta (at most delta in magnitude).
int32_t qim_embed(int32_t phi, int bit, int32_t delta);

// Nearest-multiple decode; a tie midway between two multiples resolves
// toward the smaller one.
int qim_extract(int32_t phi_w, int32_t delta);

// Bit n of each coefficient magnitude (sign-magnitude convention).
BitImage extract_bitplane(const std::vector<int32_t>& plane, int w, int h, int n);

// Writes bit n of each magnitude from the given plane, preserving signs.
// Together with extract_bitplane this reassembles a coefficient plane from
// its bit planes exactly.
void set_bitplane(std::vector<int32_t>& plane, const BitImage& bits, int n);

} // namespace hdrwm

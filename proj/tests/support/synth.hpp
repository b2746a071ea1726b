#pragma once

// Deterministic synthetic inputs shared by the unit and acceptance suites.

#include <cstdint>

#include "hdrwm/image.hpp"
#include "hdrwm/keys.hpp"

namespace hdrwm::synth {

// HDR scene with a bright salient object near the center, a background
// radiance ramp spanning about six orders of magnitude, and mid-frequency
// texture. Deterministic in (seed, w, h).
HdrImage hdr_scene(uint32_t seed, int w = 512, int h = 512);

// Structured binary logo: rings, bars and a block pattern.
BitImage logo(int w = 256, int h = 256, uint32_t variant = 0);

BitImage random_bits(uint32_t seed, int w, int h);

SecretKey test_key(uint64_t n);

} // namespace hdrwm::synth

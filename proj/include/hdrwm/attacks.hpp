#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hdrwm/image.hpp"

namespace hdrwm {

enum class AttackKind {
    MeanFilter,
    MedianFilter,
    Shear,
    Noise,       // additive Gaussian, variance on the [0,1] scale
    SaltPepper,  // alternate reading of "additive noise (0.01)"
    Rotate,
    Crop,
    Jpeg,
};

struct AttackSpec {
    AttackKind kind = AttackKind::Noise;
    int window = 3;               // mean/median filters
    double variance = 0.01;       // Gaussian noise
    double density = 0.01;        // salt & pepper
    double angle_deg = 45.0;      // rotation
    double shear = 0.5;           // x' = x + shear*y
    int crop_row0 = 75, crop_row1 = 424; // kept rows, 1-based inclusive
    int crop_col0 = 68, crop_col1 = 424; // kept cols, 1-based inclusive
    int jpeg_quality = 70;
    uint64_t seed = 1;

    std::string name() const;
};

// All attacks run in the SDR domain and preserve dimensions. The geometric
// attacks (shear, rotate) include the exact inverse re-registration, so the
// output is aligned with the input; pixels that left the frame are black.
SdrImage apply_attack(const SdrImage& img, const AttackSpec& spec);

// The seven-attack evaluation suite in its canonical order.
std::vector<AttackSpec> default_attack_suite(uint64_t seed);

// JSON config: an array of {"kind": ..., parameter overrides...}.
std::vector<AttackSpec> load_attack_suite(const std::string& path, uint64_t default_seed);

AttackKind attack_kind_from_name(const std::string& name);

} // namespace hdrwm

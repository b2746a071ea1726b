#pragma once

#include "hdrwm/image.hpp"
#include "hdrwm/image_io.hpp"

namespace hdrwm {

// Separable bicubic resampling with the Catmull-Rom kernel (a = -0.5),
// center-aligned coordinates, edge clamp. Accumulates in double so constant
// images are preserved exactly; SDR output rounds half-up and clamps.
HdrImage resize_cubic(const HdrImage& img, int new_w, int new_h);
SdrImage resize_cubic(const SdrImage& img, int new_w, int new_h);

// Nearest-neighbor resize for binary masks (preserves binarity).
BitImage resize_nearest(const BitImage& img, int new_w, int new_h);

} // namespace hdrwm

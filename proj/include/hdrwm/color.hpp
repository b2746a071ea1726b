#pragma once

#include "hdrwm/image.hpp"
#include "hdrwm/image_io.hpp"

namespace hdrwm {

// BT.601 full-range conversions in 16-bit fixed point. The pair preserves
// the Y plane exactly across ycbcr->rgb->ycbcr whenever no channel clamps,
// and round-trips RGB within 1 LSB per sample.
SdrImage rgb_to_ycbcr(const SdrImage& img);
SdrImage ycbcr_to_rgb(const SdrImage& img);

// Luma plane of an RGB image (the Y of rgb_to_ycbcr).
GrayImage luma_plane(const SdrImage& img);

} // namespace hdrwm

#include "hdrwm/image.hpp"

#include <cmath>

namespace hdrwm {

void HdrImage::validate() const {
    if (width < 2 || height < 2)
        throw FormatError("HDR image dimensions must be at least 2x2");
    size_t n = pixel_count();
    if (r.size() != n || g.size() != n || b.size() != n)
        throw FormatError("HDR plane size does not match dimensions");
    for (int c = 0; c < 3; ++c)
        for (float v : plane(c))
            if (!std::isfinite(v) || v < 0.0f)
                throw FormatError("HDR samples must be finite and non-negative");
}

} // namespace hdrwm

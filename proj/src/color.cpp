#include "hdrwm/color.hpp"

#include "hdrwm/kernels.hpp"

namespace hdrwm {

SdrImage rgb_to_ycbcr(const SdrImage& img) {
    if (img.colorspace != ColorSpace::RGB)
        throw FormatError("rgb_to_ycbcr expects an RGB-tagged image");
    SdrImage out(img.width, img.height, ColorSpace::YCbCr);
    kernels::active().rgb_to_ycbcr_n(img.p0.data(), img.p1.data(), img.p2.data(),
                                     out.p0.data(), out.p1.data(), out.p2.data(),
                                     img.pixel_count());
    return out;
}

SdrImage ycbcr_to_rgb(const SdrImage& img) {
    if (img.colorspace != ColorSpace::YCbCr)
        throw FormatError("ycbcr_to_rgb expects a YCbCr-tagged image");
    SdrImage out(img.width, img.height, ColorSpace::RGB);
    kernels::active().ycbcr_to_rgb_n(img.p0.data(), img.p1.data(), img.p2.data(),
                                     out.p0.data(), out.p1.data(), out.p2.data(),
                                     img.pixel_count());
    return out;
}

GrayImage luma_plane(const SdrImage& img) {
    GrayImage y(img.width, img.height);
    if (img.colorspace == ColorSpace::YCbCr) {
        y.v = img.p0;
        return y;
    }
    std::vector<uint8_t> cb(img.pixel_count()), cr(img.pixel_count());
    kernels::active().rgb_to_ycbcr_n(img.p0.data(), img.p1.data(), img.p2.data(),
                                     y.v.data(), cb.data(), cr.data(), img.pixel_count());
    return y;
}

} // namespace hdrwm

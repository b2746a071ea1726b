#include "hdrwm/resize.hpp"

#include <cmath>
#include <vector>

namespace hdrwm {

namespace {

// Catmull-Rom weight at distance x >= 0.
double catrom(double x) {
    constexpr double a = -0.5;
    if (x <= 1.0) return ((a + 2.0) * x - (a + 3.0)) * x * x + 1.0;
    if (x < 2.0) return ((a * x - 5.0 * a) * x + 8.0 * a) * x - 4.0 * a;
    return 0.0;
}

struct Taps {
    std::vector<int> base;   // index of the first of four source samples
    std::vector<double> w;   // 4 weights per output coordinate
};

Taps make_taps(int src_n, int dst_n) {
    Taps t;
    t.base.resize(dst_n);
    t.w.resize((size_t)dst_n * 4);
    double scale = (double)src_n / dst_n;
    for (int i = 0; i < dst_n; ++i) {
        double src = (i + 0.5) * scale - 0.5;
        double fl = std::floor(src);
        int i0 = (int)fl;
        double frac = src - fl;
        t.base[i] = i0 - 1;
        t.w[(size_t)i * 4 + 0] = catrom(frac + 1.0);
        t.w[(size_t)i * 4 + 1] = catrom(frac);
        t.w[(size_t)i * 4 + 2] = catrom(1.0 - frac);
        t.w[(size_t)i * 4 + 3] = catrom(2.0 - frac);
    }
    return t;
}

inline int clamp_index(int i, int n) { return i < 0 ? 0 : (i >= n ? n - 1 : i); }

// Resamples one plane; Src is float or uint8_t, Out likewise.
template <typename Src, typename Out, typename Quant>
void resample_plane(const Src* src, int sw, int sh, Out* dst, int dw, int dh, Quant quant) {
    Taps hx = make_taps(sw, dw);
    Taps vy = make_taps(sh, dh);
    std::vector<double> mid((size_t)sh * dw);
    for (int y = 0; y < sh; ++y) {
        const Src* row = src + (size_t)y * sw;
        for (int x = 0; x < dw; ++x) {
            const double* w = &hx.w[(size_t)x * 4];
            int b = hx.base[x];
            double acc = 0.0;
            for (int k = 0; k < 4; ++k)
                acc += w[k] * (double)row[clamp_index(b + k, sw)];
            mid[(size_t)y * dw + x] = acc;
        }
    }
    for (int y = 0; y < dh; ++y) {
        const double* w = &vy.w[(size_t)y * 4];
        int b = vy.base[y];
        for (int x = 0; x < dw; ++x) {
            double acc = 0.0;
            for (int k = 0; k < 4; ++k)
                acc += w[k] * mid[(size_t)clamp_index(b + k, sh) * dw + x];
            dst[(size_t)y * dw + x] = quant(acc);
        }
    }
}

void check_dims(int w, int h) {
    if (w < 2 || h < 2) throw FormatError("resize target must be at least 2x2");
}

} // namespace

HdrImage resize_cubic(const HdrImage& img, int new_w, int new_h) {
    check_dims(new_w, new_h);
    HdrImage out(new_w, new_h);
    auto quant = [](double v) { return (float)(v < 0.0 ? 0.0 : v); };
    for (int c = 0; c < 3; ++c)
        resample_plane(img.plane(c).data(), img.width, img.height,
                       out.plane(c).data(), new_w, new_h, quant);
    return out;
}

SdrImage resize_cubic(const SdrImage& img, int new_w, int new_h) {
    check_dims(new_w, new_h);
    SdrImage out(new_w, new_h, img.colorspace);
    auto quant = [](double v) {
        double r = std::floor(v + 0.5);
        return (uint8_t)(r < 0.0 ? 0 : (r > 255.0 ? 255 : (int)r));
    };
    for (int c = 0; c < 3; ++c)
        resample_plane(img.plane(c).data(), img.width, img.height,
                       out.plane(c).data(), new_w, new_h, quant);
    return out;
}

BitImage resize_nearest(const BitImage& img, int new_w, int new_h) {
    if (new_w < 1 || new_h < 1) throw FormatError("resize target must be positive");
    BitImage out(new_w, new_h);
    double sx = (double)img.width / new_w;
    double sy = (double)img.height / new_h;
    for (int y = 0; y < new_h; ++y) {
        int src_y = clamp_index((int)std::floor((y + 0.5) * sy), img.height);
        for (int x = 0; x < new_w; ++x) {
            int src_x = clamp_index((int)std::floor((x + 0.5) * sx), img.width);
            out.set(x, y, img.at(src_x, src_y));
        }
    }
    return out;
}

} // namespace hdrwm

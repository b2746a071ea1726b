#include "hdrwm/tonemap.hpp"

#include <algorithm>
#include <functional>
#include <thread>

#include "hdrwm/kernels.hpp"

namespace hdrwm {

namespace {

constexpr double kLumR = 0.2126, kLumG = 0.7152, kLumB = 0.0722;
constexpr double kGamma = 2.2;
constexpr double kLogFloor = 1e-30;

double luminance(double r, double g, double b) {
    return kLumR * r + kLumG * g + kLumB * b;
}

void run_rows(int rows, const std::function<void(int, int)>& fn) {
    unsigned workers = std::min(std::thread::hardware_concurrency(), 8u);
    if (workers <= 1 || rows < 64) {
        fn(0, rows);
        return;
    }
    std::vector<std::thread> pool;
    int chunk = (rows + (int)workers - 1) / (int)workers;
    for (unsigned t = 0; t < workers; ++t) {
        int y0 = (int)t * chunk;
        int y1 = std::min(rows, y0 + chunk);
        if (y0 >= y1) break;
        pool.emplace_back(fn, y0, y1);
    }
    for (auto& th : pool) th.join();
}

// Brute-force bilateral filter on a log-luminance plane. Rows are
// independent, so threading does not change the result.
std::vector<float> bilateral(const std::vector<float>& plane, int w, int h,
                             double sigma_s, double sigma_r) {
    int radius = (int)std::ceil(2.0 * sigma_s);
    radius = std::max(radius, 1);
    int side = 2 * radius + 1;
    std::vector<float> spatial((size_t)side * side);
    double inv2ss = 1.0 / (2.0 * sigma_s * sigma_s);
    for (int dy = -radius, k = 0; dy <= radius; ++dy)
        for (int dx = -radius; dx <= radius; ++dx, ++k)
            spatial[k] = (float)std::exp(-(dx * dx + dy * dy) * inv2ss);

    int pw = w + 2 * radius;
    std::vector<float> pad((size_t)pw * (h + 2 * radius));
    for (int y = -radius; y < h + radius; ++y) {
        int sy = std::clamp(y, 0, h - 1);
        float* row = pad.data() + (size_t)(y + radius) * pw;
        for (int x = -radius; x < w + radius; ++x)
            row[x + radius] = plane[(size_t)sy * w + std::clamp(x, 0, w - 1)];
    }

    std::vector<float> out((size_t)w * h);
    float inv2sr = (float)(1.0 / (2.0 * sigma_r * sigma_r));
    const auto& K = kernels::active();
    run_rows(h, [&](int y0, int y1) {
        for (int y = y0; y < y1; ++y)
            K.bilateral_row(pad.data() + (size_t)(y + radius) * pw + radius, pw, w, radius,
                            spatial.data(), inv2sr, out.data() + (size_t)y * w);
    });
    return out;
}

struct LogLum {
    std::vector<float> logl;  // log10 of normalized luminance
    std::vector<double> lum;  // raw luminance
    double lum_max;
};

LogLum log_luminance(const HdrImage& img) {
    img.validate();
    LogLum s;
    size_t n = img.pixel_count();
    s.lum.resize(n);
    s.logl.resize(n);
    double lmax = 0.0;
    for (size_t i = 0; i < n; ++i) {
        s.lum[i] = luminance(img.r[i], img.g[i], img.b[i]);
        lmax = std::max(lmax, s.lum[i]);
    }
    if (lmax <= 0.0) throw FormatError("image carries no luminance");
    s.lum_max = lmax;
    for (size_t i = 0; i < n; ++i)
        s.logl[i] = (float)std::log10(std::max(s.lum[i] / lmax, kLogFloor));
    return s;
}

SdrImage render(const HdrImage& img, const LogLum& s, const std::vector<float>& base,
                double comp, double base_max) {
    SdrImage out(img.width, img.height, ColorSpace::RGB);
    size_t n = img.pixel_count();
    for (size_t i = 0; i < n; ++i) {
        if (s.lum[i] <= 0.0) continue; // zero radiance stays black
        double out_log = comp * ((double)base[i] - base_max) + ((double)s.logl[i] - base[i]);
        double lo = std::pow(10.0, out_log);
        double inv_l = 1.0 / s.lum[i];
        double px[3] = {img.r[i] * inv_l * lo, img.g[i] * inv_l * lo, img.b[i] * inv_l * lo};
        for (int c = 0; c < 3; ++c) {
            double v = std::pow(std::clamp(px[c], 0.0, 1.0), 1.0 / kGamma);
            out.plane(c)[i] = (uint8_t)std::floor(v * 255.0 + 0.5);
        }
    }
    return out;
}

} // namespace

uint64_t plane_checksum(const std::vector<float>& v) {
    // FNV-1a over the raw float bytes; used to verify sidecar integrity.
    uint64_t h = 1469598103934665603ULL;
    const uint8_t* p = (const uint8_t*)v.data();
    for (size_t i = 0; i < v.size() * sizeof(float); ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
    return h;
}

TauParam compute_tau(const HdrImage& img, int channel) {
    double m = 0.0;
    for (float v : img.plane(channel)) m = std::max(m, (double)v);
    m += 128.0;
    int e = std::ilogb(m);
    double p = std::ldexp(1.0, e);
    return TauParam{m == p ? e : e + 1};
}

TauParam compute_tau(const HdrImage& img) {
    int t = 0;
    for (int c = 0; c < 3; ++c) t = std::max(t, compute_tau(img, c).tau);
    return TauParam{t};
}

SdrImage tonemap_durand(const HdrImage& img, const DurandParams& p, DurandMeta* meta_out) {
    if (p.spatial_sigma_frac <= 0.0 || p.range_sigma <= 0.0 || p.target_contrast <= 0.0)
        throw ConfigError("Durand parameters must be strictly positive");
    LogLum s = log_luminance(img);
    double diag = std::sqrt((double)img.width * img.width + (double)img.height * img.height);
    auto base = bilateral(s.logl, img.width, img.height, p.spatial_sigma_frac * diag,
                          p.range_sigma);
    double bmax = -1e300, bmin = 1e300;
    for (float v : base) {
        bmax = std::max(bmax, (double)v);
        bmin = std::min(bmin, (double)v);
    }
    double range = bmax - bmin;
    double comp = range > p.target_contrast ? p.target_contrast / range : 1.0;
    SdrImage out = render(img, s, base, comp, bmax);
    if (meta_out) {
        meta_out->width = img.width;
        meta_out->height = img.height;
        meta_out->lum_max = s.lum_max;
        meta_out->comp = comp;
        meta_out->base_max = bmax;
        meta_out->base = std::move(base);
        meta_out->base_checksum = plane_checksum(meta_out->base);
    }
    return out;
}

SdrImage tonemap_durand_with_meta(const HdrImage& img, const DurandMeta& meta) {
    if (img.width != meta.width || img.height != meta.height)
        throw FormatError("tone-map metadata does not match image dimensions");
    if (meta.base.size() != img.pixel_count() || plane_checksum(meta.base) != meta.base_checksum)
        throw FormatError("tone-map base layer fails its checksum");
    img.validate();
    LogLum s;
    size_t n = img.pixel_count();
    s.lum.resize(n);
    s.logl.resize(n);
    s.lum_max = meta.lum_max;
    for (size_t i = 0; i < n; ++i) {
        s.lum[i] = luminance(img.r[i], img.g[i], img.b[i]);
        s.logl[i] = (float)std::log10(std::max(s.lum[i] / meta.lum_max, kLogFloor));
    }
    return render(img, s, meta.base, meta.comp, meta.base_max);
}

HdrImage inverse_tonemap_durand(const SdrImage& img, const DurandMeta& meta) {
    if (img.colorspace != ColorSpace::RGB)
        throw FormatError("inverse tone mapping expects an RGB image");
    if (img.width != meta.width || img.height != meta.height)
        throw FormatError("tone-map metadata does not match image dimensions");
    if (meta.base.size() != img.pixel_count() || plane_checksum(meta.base) != meta.base_checksum)
        throw FormatError("tone-map base layer fails its checksum");
    HdrImage out(img.width, img.height);
    size_t n = img.pixel_count();
    for (size_t i = 0; i < n; ++i) {
        double lin[3];
        for (int c = 0; c < 3; ++c)
            lin[c] = std::pow(img.plane(c)[i] / 255.0, kGamma);
        double lo = luminance(lin[0], lin[1], lin[2]);
        if (lo <= 0.0) continue;
        double out_log = std::log10(lo);
        double logl = (double)meta.base[i] + (out_log - meta.comp * ((double)meta.base[i] - meta.base_max));
        double lum = std::pow(10.0, logl) * meta.lum_max;
        double scale = lum / lo;
        out.r[i] = (float)(lin[0] * scale);
        out.g[i] = (float)(lin[1] * scale);
        out.b[i] = (float)(lin[2] * scale);
    }
    return out;
}

PaperTmoResult tonemap_paper(const HdrImage& img, const TauParam& tau) {
    img.validate();
    PaperTmoResult res;
    res.hprime = SdrImage(img.width, img.height, ColorSpace::RGB);
    res.hsecond = SdrImage(img.width, img.height, ColorSpace::RGB);
    double scale = std::ldexp(1.0, tau.tau - 128); // 2^(tau-128)
    size_t n = img.pixel_count();
    for (int c = 0; c < 3; ++c) {
        const auto& src = img.plane(c);
        auto& hp = res.hprime.plane(c);
        auto& hs = res.hsecond.plane(c);
        for (size_t i = 0; i < n; ++i) {
            double hprime = std::floor((double)src[i] * 256.0 / scale);
            if (hprime < 0.0 || hprime > 255.0) ++res.clipped;
            double clamped = std::clamp(hprime, 0.0, 255.0);
            hp[i] = (uint8_t)clamped;
            double hsecond = std::floor((clamped + 0.5 + scale) / 256.0);
            hs[i] = (uint8_t)std::clamp(hsecond, 0.0, 255.0);
        }
    }
    return res;
}

HdrImage inverse_tonemap_paper(const SdrImage& img, const TauParam& tau) {
    if (img.colorspace != ColorSpace::RGB)
        throw FormatError("inverse tone mapping expects an RGB image");
    HdrImage out(img.width, img.height);
    double scale = std::ldexp(1.0, tau.tau - 128);
    size_t n = img.pixel_count();
    for (int c = 0; c < 3; ++c)
        for (size_t i = 0; i < n; ++i)
            out.plane(c)[i] = (float)(((double)img.plane(c)[i] + 0.5) * scale / 256.0);
    return out;
}

} // namespace hdrwm

#include "hdrwm/metrics.hpp"

#include <cmath>

#include "hdrwm/color.hpp"
#include "hdrwm/kernels.hpp"

namespace hdrwm {

namespace {

constexpr int kWin = 11;
constexpr double kSigma = 1.5;
constexpr double kC1 = (0.01 * 255) * (0.01 * 255);
constexpr double kC2 = (0.03 * 255) * (0.03 * 255);

// Separable Gaussian over the interior; only windows that fit entirely are
// consumed, so border handling never matters.
std::vector<double> win_filter(const std::vector<double>& src, int w, int h,
                               const double* k) {
    int r = kWin / 2;
    std::vector<double> tmp((size_t)w * h, 0.0), out((size_t)w * h, 0.0);
    for (int y = 0; y < h; ++y)
        for (int x = r; x < w - r; ++x) {
            double acc = 0.0;
            for (int i = -r; i <= r; ++i) acc += k[i + r] * src[(size_t)y * w + x + i];
            tmp[(size_t)y * w + x] = acc;
        }
    for (int y = r; y < h - r; ++y)
        for (int x = r; x < w - r; ++x) {
            double acc = 0.0;
            for (int i = -r; i <= r; ++i) acc += k[i + r] * tmp[(size_t)(y + i) * w + x];
            out[(size_t)y * w + x] = acc;
        }
    return out;
}

} // namespace

PsnrResult psnr(const SdrImage& a, const SdrImage& b, MetricDomain domain) {
    if (!a.same_dims(b)) throw FormatError("PSNR inputs must share dimensions");
    const auto& K = kernels::active();
    uint64_t ssd = 0;
    size_t n = 0;
    if (domain == MetricDomain::SdrLuma) {
        GrayImage ya = luma_plane(a), yb = luma_plane(b);
        ssd = K.sum_sq_diff_u8(ya.v.data(), yb.v.data(), ya.v.size());
        n = ya.v.size();
    } else {
        for (int c = 0; c < 3; ++c)
            ssd += K.sum_sq_diff_u8(a.plane(c).data(), b.plane(c).data(), a.pixel_count());
        n = a.pixel_count() * 3;
    }
    if (ssd == 0) return {true, 0.0};
    double mse = (double)ssd / (double)n;
    return {false, 10.0 * std::log10(255.0 * 255.0 / mse)};
}

double ssim(const SdrImage& a, const SdrImage& b) {
    if (!a.same_dims(b)) throw FormatError("SSIM inputs must share dimensions");
    if (a.width < kWin || a.height < kWin)
        throw FormatError("SSIM needs at least an 11x11 image");

    double kern[kWin];
    double sum = 0.0;
    for (int i = 0; i < kWin; ++i) {
        double d = i - kWin / 2;
        kern[i] = std::exp(-d * d / (2.0 * kSigma * kSigma));
        sum += kern[i];
    }
    for (auto& v : kern) v /= sum;

    GrayImage ya = luma_plane(a), yb = luma_plane(b);
    int w = a.width, h = a.height;
    size_t n = (size_t)w * h;
    std::vector<double> x(n), y(n), xx(n), yy(n), xy(n);
    for (size_t i = 0; i < n; ++i) {
        x[i] = ya.v[i];
        y[i] = yb.v[i];
        xx[i] = x[i] * x[i];
        yy[i] = y[i] * y[i];
        xy[i] = x[i] * y[i];
    }
    auto mx = win_filter(x, w, h, kern);
    auto my = win_filter(y, w, h, kern);
    auto mxx = win_filter(xx, w, h, kern);
    auto myy = win_filter(yy, w, h, kern);
    auto mxy = win_filter(xy, w, h, kern);

    int r = kWin / 2;
    double acc = 0.0;
    long long count = 0;
    for (int j = r; j < h - r; ++j)
        for (int i = r; i < w - r; ++i) {
            size_t k = (size_t)j * w + i;
            double sx = mxx[k] - mx[k] * mx[k];
            double sy = myy[k] - my[k] * my[k];
            double sxy = mxy[k] - mx[k] * my[k];
            double s = ((2.0 * mx[k] * my[k] + kC1) * (2.0 * sxy + kC2)) /
                       ((mx[k] * mx[k] + my[k] * my[k] + kC1) * (sx + sy + kC2));
            acc += s;
            ++count;
        }
    return acc / (double)count;
}

NcResult nc(const BitImage& w, const BitImage& w_prime) {
    if (w.width != w_prime.width || w.height != w_prime.height)
        throw FormatError("NC inputs must share dimensions");
    long long n = (long long)w.size();
    long long s1 = 0, s2 = 0, s11 = 0;
    for (size_t i = 0; i < w.bits.size(); ++i) {
        s1 += w.bits[i];
        s2 += w_prime.bits[i];
        s11 += w.bits[i] & w_prime.bits[i];
    }
    long long var1 = n * s1 - s1 * s1;
    long long var2 = n * s2 - s2 * s2;
    if (var1 == 0 || var2 == 0)
        throw FormatError("NC is undefined for a constant bit image");
    double cov = (double)(n * s11 - s1 * s2);
    double raw = cov / (std::sqrt((double)var1) * std::sqrt((double)var2));
    return {raw, raw < 0.0 ? 0.0 : raw};
}

double ber(const BitImage& w, const BitImage& w_prime) {
    if (w.width != w_prime.width || w.height != w_prime.height)
        throw FormatError("BER inputs must share dimensions");
    size_t bad = 0;
    for (size_t i = 0; i < w.bits.size(); ++i) bad += w.bits[i] != w_prime.bits[i];
    return (double)bad / (double)w.size();
}

const char* metric_domain_name(MetricDomain d) {
    return d == MetricDomain::SdrLuma ? "sdr-luma" : "sdr-rgb";
}

} // namespace hdrwm

#include "hdrwm/attacks.hpp"

#include <jpeglib.h>

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "hdrwm/keys.hpp"

namespace hdrwm {

namespace {

// Seeded deterministic stream for the stochastic attacks.
KeyedRng rng_for(uint64_t seed, const char* tag) {
    SecretKey k;
    for (int i = 0; i < 8; ++i) k.bytes[i] = (uint8_t)(seed >> (8 * i));
    k.bytes[8] = 0xa7; // fixed domain constant, distinct from user keys
    return KeyedRng(k, tag);
}

inline int reflect(int i, int n) {
    if (i < 0) return -i - 1;
    if (i >= n) return 2 * n - 1 - i;
    return i;
}

SdrImage mean_filter(const SdrImage& img, int k) {
    if (k < 1 || k % 2 == 0) throw ConfigError("filter window must be odd and positive");
    int r = k / 2;
    SdrImage out(img.width, img.height, img.colorspace);
    for (int c = 0; c < 3; ++c) {
        const auto& src = img.plane(c);
        auto& dst = out.plane(c);
        for (int y = 0; y < img.height; ++y)
            for (int x = 0; x < img.width; ++x) {
                int sum = 0;
                for (int dy = -r; dy <= r; ++dy)
                    for (int dx = -r; dx <= r; ++dx)
                        sum += src[(size_t)reflect(y + dy, img.height) * img.width +
                                   reflect(x + dx, img.width)];
                dst[(size_t)y * img.width + x] =
                    (uint8_t)std::floor((double)sum / (k * k) + 0.5);
            }
    }
    return out;
}

SdrImage median_filter(const SdrImage& img, int k) {
    if (k < 1 || k % 2 == 0) throw ConfigError("filter window must be odd and positive");
    int r = k / 2;
    SdrImage out(img.width, img.height, img.colorspace);
    std::vector<uint8_t> window((size_t)k * k);
    for (int c = 0; c < 3; ++c) {
        const auto& src = img.plane(c);
        auto& dst = out.plane(c);
        for (int y = 0; y < img.height; ++y)
            for (int x = 0; x < img.width; ++x) {
                size_t m = 0;
                for (int dy = -r; dy <= r; ++dy)
                    for (int dx = -r; dx <= r; ++dx)
                        window[m++] = src[(size_t)reflect(y + dy, img.height) * img.width +
                                          reflect(x + dx, img.width)];
                std::nth_element(window.begin(), window.begin() + m / 2, window.begin() + m);
                dst[(size_t)y * img.width + x] = window[m / 2];
            }
    }
    return out;
}

// Bilinear sample; outside the frame reads as black.
inline double sample_bilinear(const std::vector<uint8_t>& p, int w, int h, double x, double y) {
    if (x < 0.0 || y < 0.0 || x > w - 1.0 || y > h - 1.0) {
        // Partial support near the border still contributes.
        if (x <= -1.0 || y <= -1.0 || x >= (double)w || y >= (double)h) return 0.0;
    }
    int x0 = (int)std::floor(x), y0 = (int)std::floor(y);
    double fx = x - x0, fy = y - y0;
    auto at = [&](int xi, int yi) -> double {
        if (xi < 0 || yi < 0 || xi >= w || yi >= h) return 0.0;
        return p[(size_t)yi * w + xi];
    };
    return (1 - fx) * (1 - fy) * at(x0, y0) + fx * (1 - fy) * at(x0 + 1, y0) +
           (1 - fx) * fy * at(x0, y0 + 1) + fx * fy * at(x0 + 1, y0 + 1);
}

// dst(x, y) = src(a*x + b*y + tx, c*x + d*y + ty), bilinear.
SdrImage warp(const SdrImage& img, double a, double b, double tx, double c, double d, double ty) {
    SdrImage out(img.width, img.height, img.colorspace);
    for (int ch = 0; ch < 3; ++ch) {
        const auto& src = img.plane(ch);
        auto& dst = out.plane(ch);
        for (int y = 0; y < img.height; ++y)
            for (int x = 0; x < img.width; ++x) {
                double sx = a * x + b * y + tx;
                double sy = c * x + d * y + ty;
                double v = sample_bilinear(src, img.width, img.height, sx, sy);
                dst[(size_t)y * img.width + x] = (uint8_t)std::clamp(std::floor(v + 0.5), 0.0, 255.0);
            }
    }
    return out;
}

SdrImage shear_attack(const SdrImage& img, double s) {
    // Forward shear x' = x + s*y, then the exact inverse for re-registration.
    SdrImage sheared = warp(img, 1.0, -s, 0.0, 0.0, 1.0, 0.0);
    return warp(sheared, 1.0, s, 0.0, 0.0, 1.0, 0.0);
}

SdrImage rotate_attack(const SdrImage& img, double deg) {
    double rad = deg * 3.14159265358979323846 / 180.0;
    double cs = std::cos(rad), sn = std::sin(rad);
    double cx = (img.width - 1) / 2.0, cy = (img.height - 1) / 2.0;
    // dst = R^-1 about center, then re-register with R.
    SdrImage rotated = warp(img, cs, sn, cx - cs * cx - sn * cy,
                            -sn, cs, cy + sn * cx - cs * cy);
    return warp(rotated, cs, -sn, cx - cs * cx + sn * cy,
                sn, cs, cy - sn * cx - cs * cy);
}

SdrImage noise_attack(const SdrImage& img, double variance, uint64_t seed) {
    if (variance < 0.0) throw ConfigError("noise variance must be non-negative");
    KeyedRng rng = rng_for(seed, "attack-gaussian");
    double sigma = std::sqrt(variance) * 255.0;
    SdrImage out(img.width, img.height, img.colorspace);
    for (int c = 0; c < 3; ++c) {
        const auto& src = img.plane(c);
        auto& dst = out.plane(c);
        for (size_t i = 0; i < src.size(); ++i) {
            double v = src[i] + sigma * rng.next_gaussian();
            dst[i] = (uint8_t)std::clamp(std::floor(v + 0.5), 0.0, 255.0);
        }
    }
    return out;
}

SdrImage salt_pepper_attack(const SdrImage& img, double density, uint64_t seed) {
    if (density < 0.0 || density > 1.0) throw ConfigError("density must lie in [0, 1]");
    KeyedRng rng = rng_for(seed, "attack-saltpepper");
    SdrImage out = img;
    double half = density / 2.0;
    for (size_t i = 0; i < img.pixel_count(); ++i) {
        double u = (rng.next_u64() >> 11) * (1.0 / 9007199254740992.0);
        if (u < half)
            out.p0[i] = out.p1[i] = out.p2[i] = 0;
        else if (u < density)
            out.p0[i] = out.p1[i] = out.p2[i] = 255;
    }
    return out;
}

SdrImage crop_attack(const SdrImage& img, const AttackSpec& s) {
    SdrImage out(img.width, img.height, img.colorspace);
    for (int c = 0; c < 3; ++c) {
        const auto& src = img.plane(c);
        auto& dst = out.plane(c);
        for (int y = s.crop_row0 - 1; y <= s.crop_row1 - 1; ++y) {
            if (y < 0 || y >= img.height) continue;
            for (int x = s.crop_col0 - 1; x <= s.crop_col1 - 1; ++x) {
                if (x < 0 || x >= img.width) continue;
                dst[(size_t)y * img.width + x] = src[(size_t)y * img.width + x];
            }
        }
    }
    return out;
}

struct JpegErr {
    jpeg_error_mgr mgr;
    jmp_buf jump;
};

void jpeg_error_exit(j_common_ptr cinfo) {
    longjmp(((JpegErr*)cinfo->err)->jump, 1);
}

SdrImage jpeg_attack(const SdrImage& img, int quality) {
    if (quality < 1 || quality > 100) throw ConfigError("JPEG quality must be in [1, 100]");
    std::vector<uint8_t> interleaved((size_t)img.width * img.height * 3);
    for (size_t i = 0; i < img.pixel_count(); ++i) {
        interleaved[3 * i] = img.p0[i];
        interleaved[3 * i + 1] = img.p1[i];
        interleaved[3 * i + 2] = img.p2[i];
    }

    JpegErr err;
    unsigned char* buf = nullptr;
    unsigned long buf_size = 0;

    jpeg_compress_struct enc;
    enc.err = jpeg_std_error(&err.mgr);
    err.mgr.error_exit = jpeg_error_exit;
    if (setjmp(err.jump)) {
        jpeg_destroy_compress(&enc);
        free(buf);
        throw FormatError("JPEG encode failed");
    }
    jpeg_create_compress(&enc);
    jpeg_mem_dest(&enc, &buf, &buf_size);
    enc.image_width = (JDIMENSION)img.width;
    enc.image_height = (JDIMENSION)img.height;
    enc.input_components = 3;
    enc.in_color_space = JCS_RGB;
    jpeg_set_defaults(&enc);
    jpeg_set_quality(&enc, quality, TRUE);
    jpeg_start_compress(&enc, TRUE);
    while (enc.next_scanline < enc.image_height) {
        JSAMPROW row = interleaved.data() + (size_t)enc.next_scanline * img.width * 3;
        jpeg_write_scanlines(&enc, &row, 1);
    }
    jpeg_finish_compress(&enc);
    jpeg_destroy_compress(&enc);

    jpeg_decompress_struct dec;
    dec.err = jpeg_std_error(&err.mgr);
    err.mgr.error_exit = jpeg_error_exit;
    if (setjmp(err.jump)) {
        jpeg_destroy_decompress(&dec);
        free(buf);
        throw FormatError("JPEG decode failed");
    }
    jpeg_create_decompress(&dec);
    jpeg_mem_src(&dec, buf, buf_size);
    jpeg_read_header(&dec, TRUE);
    dec.out_color_space = JCS_RGB;
    jpeg_start_decompress(&dec);
    SdrImage out(img.width, img.height, img.colorspace);
    std::vector<uint8_t> row((size_t)img.width * 3);
    int y = 0;
    while (dec.output_scanline < dec.output_height) {
        JSAMPROW rp = row.data();
        jpeg_read_scanlines(&dec, &rp, 1);
        for (int x = 0; x < img.width; ++x) {
            out.p0[(size_t)y * img.width + x] = row[3 * (size_t)x];
            out.p1[(size_t)y * img.width + x] = row[3 * (size_t)x + 1];
            out.p2[(size_t)y * img.width + x] = row[3 * (size_t)x + 2];
        }
        ++y;
    }
    jpeg_finish_decompress(&dec);
    jpeg_destroy_decompress(&dec);
    free(buf);
    return out;
}

} // namespace

SdrImage apply_attack(const SdrImage& img, const AttackSpec& spec) {
    switch (spec.kind) {
        case AttackKind::MeanFilter: return mean_filter(img, spec.window);
        case AttackKind::MedianFilter: return median_filter(img, spec.window);
        case AttackKind::Shear: return shear_attack(img, spec.shear);
        case AttackKind::Noise: return noise_attack(img, spec.variance, spec.seed);
        case AttackKind::SaltPepper: return salt_pepper_attack(img, spec.density, spec.seed);
        case AttackKind::Rotate: return rotate_attack(img, spec.angle_deg);
        case AttackKind::Crop: return crop_attack(img, spec);
        case AttackKind::Jpeg: return jpeg_attack(img, spec.jpeg_quality);
    }
    throw ConfigError("unknown attack kind");
}

std::string AttackSpec::name() const {
    char buf[64];
    switch (kind) {
        case AttackKind::MeanFilter:
            std::snprintf(buf, sizeof buf, "mean-filter-%dx%d", window, window);
            break;
        case AttackKind::MedianFilter:
            std::snprintf(buf, sizeof buf, "median-filter-%dx%d", window, window);
            break;
        case AttackKind::Shear:
            std::snprintf(buf, sizeof buf, "shear-%.2f", shear);
            break;
        case AttackKind::Noise:
            std::snprintf(buf, sizeof buf, "noise-%.4f", variance);
            break;
        case AttackKind::SaltPepper:
            std::snprintf(buf, sizeof buf, "salt-pepper-%.4f", density);
            break;
        case AttackKind::Rotate:
            std::snprintf(buf, sizeof buf, "rotate-%.0f", angle_deg);
            break;
        case AttackKind::Crop:
            std::snprintf(buf, sizeof buf, "crop-%d.%d-%d.%d", crop_row0, crop_row1,
                          crop_col0, crop_col1);
            break;
        case AttackKind::Jpeg:
            std::snprintf(buf, sizeof buf, "jpeg-q%d", jpeg_quality);
            break;
        default:
            return "unknown";
    }
    return buf;
}

std::vector<AttackSpec> default_attack_suite(uint64_t seed) {
    std::vector<AttackSpec> suite;
    AttackSpec s;
    s.seed = seed;
    s.kind = AttackKind::MeanFilter;
    suite.push_back(s);
    s.kind = AttackKind::MedianFilter;
    suite.push_back(s);
    s.kind = AttackKind::Shear;
    suite.push_back(s);
    s.kind = AttackKind::Noise;
    suite.push_back(s);
    s.kind = AttackKind::Rotate;
    suite.push_back(s);
    s.kind = AttackKind::Crop;
    suite.push_back(s);
    s.kind = AttackKind::Jpeg;
    suite.push_back(s);
    return suite;
}

AttackKind attack_kind_from_name(const std::string& name) {
    if (name == "mean-filter") return AttackKind::MeanFilter;
    if (name == "median-filter") return AttackKind::MedianFilter;
    if (name == "shear") return AttackKind::Shear;
    if (name == "noise") return AttackKind::Noise;
    if (name == "salt-pepper") return AttackKind::SaltPepper;
    if (name == "rotate") return AttackKind::Rotate;
    if (name == "crop") return AttackKind::Crop;
    if (name == "jpeg") return AttackKind::Jpeg;
    throw ConfigError("unknown attack kind: " + name);
}

std::vector<AttackSpec> load_attack_suite(const std::string& path, uint64_t default_seed) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open attack config: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("malformed attack config: ") + e.what());
    }
    if (!j.is_array()) throw ConfigError("attack config must be a JSON array");
    std::vector<AttackSpec> suite;
    for (const auto& item : j) {
        AttackSpec s;
        s.seed = default_seed;
        s.kind = attack_kind_from_name(item.at("kind").get<std::string>());
        if (item.contains("window")) s.window = item["window"].get<int>();
        if (item.contains("variance")) s.variance = item["variance"].get<double>();
        if (item.contains("density")) s.density = item["density"].get<double>();
        if (item.contains("angle")) s.angle_deg = item["angle"].get<double>();
        if (item.contains("shear")) s.shear = item["shear"].get<double>();
        if (item.contains("quality")) s.jpeg_quality = item["quality"].get<int>();
        if (item.contains("seed")) s.seed = item["seed"].get<uint64_t>();
        if (item.contains("crop")) {
            auto c = item["crop"];
            s.crop_row0 = c.at(0).get<int>();
            s.crop_row1 = c.at(1).get<int>();
            s.crop_col0 = c.at(2).get<int>();
            s.crop_col1 = c.at(3).get<int>();
        }
        suite.push_back(s);
    }
    if (suite.empty()) throw ConfigError("attack config lists no attacks");
    return suite;
}

} // namespace hdrwm

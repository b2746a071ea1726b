// PFM, Radiance RGBE and PNM readers/writers. PNG lives in image_io_png.cpp.

#include "hdrwm/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <memory>

namespace hdrwm {

namespace {

struct FileCloser {
    void operator()(FILE* f) const { if (f) std::fclose(f); }
};
using File = std::unique_ptr<FILE, FileCloser>;

File open_read(const std::string& path) {
    File f(std::fopen(path.c_str(), "rb"));
    if (!f) throw IoError("cannot open for reading: " + path);
    return f;
}

File open_write(const std::string& path) {
    File f(std::fopen(path.c_str(), "wb"));
    if (!f) throw IoError("cannot open for writing: " + path);
    return f;
}

void read_exact(FILE* f, void* buf, size_t n, const std::string& path) {
    if (std::fread(buf, 1, n, f) != n)
        throw FormatError("unexpected end of file: " + path);
}

void write_exact(FILE* f, const void* buf, size_t n, const std::string& path) {
    if (std::fwrite(buf, 1, n, f) != n)
        throw IoError("write failed: " + path);
}

// PNM-style token reader: skips whitespace and '#' comment lines.
std::string pnm_token(FILE* f, const std::string& path) {
    std::string tok;
    int c;
    while ((c = std::fgetc(f)) != EOF) {
        if (c == '#') {
            while ((c = std::fgetc(f)) != EOF && c != '\n') {}
            continue;
        }
        if (!std::isspace(c)) break;
    }
    if (c == EOF) throw FormatError("truncated header: " + path);
    do {
        tok.push_back((char)c);
        c = std::fgetc(f);
    } while (c != EOF && !std::isspace(c));
    return tok;
}

int pnm_int(FILE* f, const std::string& path) {
    std::string t = pnm_token(f, path);
    try {
        size_t pos = 0;
        int v = std::stoi(t, &pos);
        if (pos != t.size()) throw std::invalid_argument(t);
        return v;
    } catch (const std::exception&) {
        throw FormatError("malformed header token '" + t + "' in " + path);
    }
}

bool ends_with(const std::string& s, const char* suf) {
    size_t n = std::strlen(suf);
    if (s.size() < n) return false;
    std::string tail = s.substr(s.size() - n);
    std::transform(tail.begin(), tail.end(), tail.begin(), ::tolower);
    return tail == suf;
}

// ---------------------------------------------------------------- PFM

HdrImage load_pfm(const std::string& path) {
    File f = open_read(path);
    std::string magic = pnm_token(f.get(), path);
    bool color;
    if (magic == "PF") color = true;
    else if (magic == "Pf") color = false;
    else throw FormatError("not a PFM file: " + path);
    int w = pnm_int(f.get(), path);
    int h = pnm_int(f.get(), path);
    if (w <= 0 || h <= 0) throw FormatError("PFM with zero dimension: " + path);
    std::string scale_tok = pnm_token(f.get(), path);
    double scale = std::atof(scale_tok.c_str());
    if (scale == 0.0) throw FormatError("PFM scale must be nonzero: " + path);
    bool little = scale < 0.0;

    HdrImage img(w, h);
    int nc = color ? 3 : 1;
    std::vector<uint8_t> row((size_t)w * nc * 4);
    for (int y = h - 1; y >= 0; --y) { // PFM rows run bottom to top
        read_exact(f.get(), row.data(), row.size(), path);
        for (int x = 0; x < w; ++x) {
            for (int c = 0; c < nc; ++c) {
                uint8_t b4[4];
                std::memcpy(b4, &row[((size_t)x * nc + c) * 4], 4);
                if (!little) std::swap(b4[0], b4[3]), std::swap(b4[1], b4[2]);
                float v;
                std::memcpy(&v, b4, 4);
                if (color) img.plane(c)[(size_t)y * w + x] = v;
                else img.r[(size_t)y * w + x] = img.g[(size_t)y * w + x] =
                         img.b[(size_t)y * w + x] = v;
            }
        }
    }
    img.validate();
    return img;
}

void save_pfm(const HdrImage& img, const std::string& path) {
    img.validate();
    File f = open_write(path);
    char header[64];
    int n = std::snprintf(header, sizeof header, "PF\n%d %d\n-1.0\n", img.width, img.height);
    write_exact(f.get(), header, (size_t)n, path);
    std::vector<uint8_t> row((size_t)img.width * 12);
    for (int y = img.height - 1; y >= 0; --y) {
        for (int x = 0; x < img.width; ++x)
            for (int c = 0; c < 3; ++c)
                std::memcpy(&row[((size_t)x * 3 + c) * 4],
                            &img.plane(c)[(size_t)y * img.width + x], 4);
        write_exact(f.get(), row.data(), row.size(), path);
    }
}

// ---------------------------------------------------------------- RGBE

void decode_rgbe_pixel(const uint8_t p[4], float out[3]) {
    if (p[3] == 0) {
        out[0] = out[1] = out[2] = 0.0f;
        return;
    }
    double scale = std::ldexp(1.0, (int)p[3] - 128) / 256.0;
    for (int c = 0; c < 3; ++c)
        out[c] = (float)(((double)p[c] + 0.5) * scale);
}

void encode_rgbe_pixel(const float rgb[3], uint8_t out[4]) {
    float maxc = std::max({rgb[0], rgb[1], rgb[2]});
    if (maxc < 1e-32f) {
        out[0] = out[1] = out[2] = out[3] = 0;
        return;
    }
    int e;
    std::frexp(maxc, &e); // maxc = f * 2^e, f in [0.5, 1)
    double scale = std::ldexp(1.0, 8 - e);
    for (int c = 0; c < 3; ++c) {
        int m = (int)((double)rgb[c] * scale);
        out[c] = (uint8_t)std::clamp(m, 0, 255);
    }
    out[3] = (uint8_t)(e + 128);
}

void read_rgbe_scanline(FILE* f, uint8_t* line, int width, const std::string& path) {
    uint8_t head[4];
    read_exact(f, head, 4, path);
    bool rle = head[0] == 2 && head[1] == 2 &&
               ((head[2] << 8) | head[3]) == width && width >= 8 && width < 32768;
    if (!rle) {
        // Flat/old format; the first pixel was already consumed.
        std::memcpy(line, head, 4);
        int x = 1;
        int shift = 0;
        while (x < width) {
            uint8_t px[4];
            read_exact(f, px, 4, path);
            if (px[0] == 1 && px[1] == 1 && px[2] == 1) { // old-style run
                int count = px[3] << shift;
                if (x == 0 || count <= 0 || x + count > width)
                    throw FormatError("bad RGBE run: " + path);
                for (int i = 0; i < count; ++i)
                    std::memcpy(line + 4 * (x + i), line + 4 * (x - 1), 4);
                x += count;
                shift += 8;
            } else {
                std::memcpy(line + 4 * x, px, 4);
                ++x;
                shift = 0;
            }
        }
        return;
    }
    // New RLE: four independently run-length coded component streams.
    for (int c = 0; c < 4; ++c) {
        int x = 0;
        while (x < width) {
            uint8_t count;
            read_exact(f, &count, 1, path);
            if (count > 128) {
                int run = count - 128;
                if (x + run > width) throw FormatError("RGBE run overflow: " + path);
                uint8_t v;
                read_exact(f, &v, 1, path);
                for (int i = 0; i < run; ++i) line[4 * (x + i) + c] = v;
                x += run;
            } else {
                int lit = count;
                if (lit == 0 || x + lit > width)
                    throw FormatError("RGBE literal overflow: " + path);
                for (int i = 0; i < lit; ++i)
                    read_exact(f, &line[4 * (x + i) + c], 1, path);
                x += lit;
            }
        }
    }
}

HdrImage load_rgbe(const std::string& path) {
    File f = open_read(path);
    char buf[256];
    if (!std::fgets(buf, sizeof buf, f.get()) ||
        (std::strncmp(buf, "#?RADIANCE", 10) != 0 && std::strncmp(buf, "#?RGBE", 6) != 0))
        throw FormatError("missing Radiance signature: " + path);
    double exposure = 1.0;
    bool format_ok = false;
    for (;;) {
        if (!std::fgets(buf, sizeof buf, f.get()))
            throw FormatError("truncated RGBE header: " + path);
        if (buf[0] == '\n' || (buf[0] == '\r' && buf[1] == '\n')) break;
        if (std::strncmp(buf, "FORMAT=32-bit_rle_rgbe", 22) == 0) format_ok = true;
        else if (std::strncmp(buf, "EXPOSURE=", 9) == 0) exposure *= std::atof(buf + 9);
    }
    if (!format_ok) throw FormatError("unsupported RGBE FORMAT: " + path);
    int w = 0, h = 0;
    if (!std::fgets(buf, sizeof buf, f.get()) ||
        std::sscanf(buf, "-Y %d +X %d", &h, &w) != 2 || w <= 0 || h <= 0)
        throw FormatError("unsupported RGBE resolution line: " + path);

    HdrImage img(w, h);
    std::vector<uint8_t> line((size_t)w * 4);
    float inv_exp = exposure > 0.0 ? (float)(1.0 / exposure) : 1.0f;
    for (int y = 0; y < h; ++y) {
        read_rgbe_scanline(f.get(), line.data(), w, path);
        for (int x = 0; x < w; ++x) {
            float px[3];
            decode_rgbe_pixel(&line[4 * (size_t)x], px);
            img.r[(size_t)y * w + x] = px[0] * inv_exp;
            img.g[(size_t)y * w + x] = px[1] * inv_exp;
            img.b[(size_t)y * w + x] = px[2] * inv_exp;
        }
    }
    img.validate();
    return img;
}

void save_rgbe(const HdrImage& img, const std::string& path) {
    img.validate();
    File f = open_write(path);
    char header[128];
    int n = std::snprintf(header, sizeof header,
                          "#?RADIANCE\nFORMAT=32-bit_rle_rgbe\n\n-Y %d +X %d\n",
                          img.height, img.width);
    write_exact(f.get(), header, (size_t)n, path);
    std::vector<uint8_t> line((size_t)img.width * 4);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            float px[3] = {img.r[(size_t)y * img.width + x],
                           img.g[(size_t)y * img.width + x],
                           img.b[(size_t)y * img.width + x]};
            encode_rgbe_pixel(px, &line[4 * (size_t)x]);
        }
        write_exact(f.get(), line.data(), line.size(), path);
    }
}

// ---------------------------------------------------------------- PBM / PGM

BitImage load_pbm(const std::string& path) {
    File f = open_read(path);
    if (pnm_token(f.get(), path) != "P4")
        throw FormatError("not a binary PBM (P4): " + path);
    int w = pnm_int(f.get(), path);
    int h = pnm_int(f.get(), path);
    if (w <= 0 || h <= 0) throw FormatError("PBM with zero dimension: " + path);
    BitImage img(w, h);
    size_t row_bytes = ((size_t)w + 7) / 8;
    std::vector<uint8_t> row(row_bytes);
    for (int y = 0; y < h; ++y) {
        read_exact(f.get(), row.data(), row_bytes, path);
        for (int x = 0; x < w; ++x)
            img.set(x, y, (row[x >> 3] >> (7 - (x & 7))) & 1);
    }
    return img;
}

void save_pbm(const BitImage& img, const std::string& path) {
    File f = open_write(path);
    auto bytes = pbm_bytes(img);
    write_exact(f.get(), bytes.data(), bytes.size(), path);
}

GrayImage load_pgm(const std::string& path) {
    File f = open_read(path);
    if (pnm_token(f.get(), path) != "P5")
        throw FormatError("not a binary PGM (P5): " + path);
    int w = pnm_int(f.get(), path);
    int h = pnm_int(f.get(), path);
    int maxval = pnm_int(f.get(), path);
    if (w <= 0 || h <= 0) throw FormatError("PGM with zero dimension: " + path);
    if (maxval != 255) throw FormatError("only 8-bit PGM supported: " + path);
    GrayImage img(w, h);
    read_exact(f.get(), img.v.data(), img.v.size(), path);
    return img;
}

void save_pgm(const GrayImage& img, const std::string& path) {
    File f = open_write(path);
    char header[64];
    int n = std::snprintf(header, sizeof header, "P5\n%d %d\n255\n", img.width, img.height);
    write_exact(f.get(), header, (size_t)n, path);
    write_exact(f.get(), img.v.data(), img.v.size(), path);
}

} // namespace

std::vector<uint8_t> pbm_bytes(const BitImage& img) {
    char header[64];
    int n = std::snprintf(header, sizeof header, "P4\n%d %d\n", img.width, img.height);
    size_t row_bytes = ((size_t)img.width + 7) / 8;
    std::vector<uint8_t> out(header, header + n);
    for (int y = 0; y < img.height; ++y) {
        size_t base = out.size();
        out.resize(base + row_bytes, 0);
        for (int x = 0; x < img.width; ++x)
            if (img.at(x, y)) out[base + (x >> 3)] |= (uint8_t)(0x80 >> (x & 7));
    }
    return out;
}

BitImage bit_from_pbm_bytes(const std::vector<uint8_t>& bytes) {
    // Parse the same minimal P4 layout pbm_bytes() produces.
    std::string s(bytes.begin(), bytes.end());
    int w = 0, h = 0, off = 0;
    if (std::sscanf(s.c_str(), "P4\n%d %d\n%n", &w, &h, &off) != 2 || w <= 0 || h <= 0)
        throw FormatError("bad in-memory PBM payload");
    BitImage img(w, h);
    size_t row_bytes = ((size_t)w + 7) / 8;
    if (bytes.size() < (size_t)off + row_bytes * h)
        throw FormatError("truncated in-memory PBM payload");
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            img.set(x, y, (bytes[(size_t)off + y * row_bytes + (x >> 3)] >> (7 - (x & 7))) & 1);
    return img;
}

void rgbe_decode(const uint8_t rgbe[4], float out[3]) { decode_rgbe_pixel(rgbe, out); }
void rgbe_encode(const float rgb[3], uint8_t out[4]) { encode_rgbe_pixel(rgb, out); }

// PNG functions implemented in image_io_png.cpp.
SdrImage load_png_rgb(const std::string& path);
GrayImage load_png_gray(const std::string& path);
void save_png_rgb(const SdrImage& img, const std::string& path);
void save_png_gray(const GrayImage& img, const std::string& path);

ImageKind kind_from_path(const std::string& path) {
    if (ends_with(path, ".hdr")) return ImageKind::HdrRgbe;
    if (ends_with(path, ".pfm")) return ImageKind::Pfm;
    if (ends_with(path, ".png")) return ImageKind::Png;
    if (ends_with(path, ".pbm")) return ImageKind::Pbm;
    if (ends_with(path, ".pgm")) return ImageKind::Pgm;
    throw FormatError("unsupported image extension: " + path);
}

AnyImage load_image(const std::string& path, ImageKind kind) {
    switch (kind) {
        case ImageKind::HdrRgbe: return load_rgbe(path);
        case ImageKind::Pfm: return load_pfm(path);
        case ImageKind::Png: return load_png_rgb(path);
        case ImageKind::Pbm: return load_pbm(path);
        case ImageKind::Pgm: return load_pgm(path);
    }
    throw FormatError("unsupported image kind");
}

AnyImage load_image(const std::string& path) {
    return load_image(path, kind_from_path(path));
}

HdrImage load_hdr(const std::string& path) {
    ImageKind k = kind_from_path(path);
    if (k == ImageKind::HdrRgbe) return load_rgbe(path);
    if (k == ImageKind::Pfm) return load_pfm(path);
    throw FormatError("expected an HDR file (.hdr or .pfm): " + path);
}

SdrImage load_sdr(const std::string& path) {
    if (kind_from_path(path) != ImageKind::Png)
        throw FormatError("expected an 8-bit PNG: " + path);
    return load_png_rgb(path);
}

BitImage load_bit(const std::string& path) {
    if (kind_from_path(path) != ImageKind::Pbm)
        throw FormatError("expected a PBM (P4) file: " + path);
    return load_pbm(path);
}

GrayImage load_gray(const std::string& path) {
    ImageKind k = kind_from_path(path);
    if (k == ImageKind::Pgm) return load_pgm(path);
    if (k == ImageKind::Png) return load_png_gray(path);
    throw FormatError("expected a grayscale PGM or PNG: " + path);
}

void save_hdr(const HdrImage& img, const std::string& path) {
    ImageKind k = kind_from_path(path);
    if (k == ImageKind::HdrRgbe) save_rgbe(img, path);
    else if (k == ImageKind::Pfm) save_pfm(img, path);
    else throw FormatError("HDR images save as .hdr or .pfm: " + path);
}

void save_sdr(const SdrImage& img, const std::string& path) {
    if (img.colorspace != ColorSpace::RGB)
        throw FormatError("only RGB SDR images can be saved: " + path);
    if (kind_from_path(path) != ImageKind::Png)
        throw FormatError("SDR images save as .png: " + path);
    save_png_rgb(img, path);
}

void save_bit(const BitImage& img, const std::string& path) {
    if (kind_from_path(path) != ImageKind::Pbm)
        throw FormatError("bit images save as .pbm: " + path);
    save_pbm(img, path);
}

void save_gray(const GrayImage& img, const std::string& path) {
    ImageKind k = kind_from_path(path);
    if (k == ImageKind::Pgm) save_pgm(img, path);
    else if (k == ImageKind::Png) save_png_gray(img, path);
    else throw FormatError("gray images save as .pgm or .png: " + path);
}

} // namespace hdrwm

#include <png.h>

#include <csetjmp>
#include <cstdio>
#include <memory>
#include <vector>

#include "hdrwm/image_io.hpp"

namespace hdrwm {

namespace {

struct FileCloser {
    void operator()(FILE* f) const { if (f) std::fclose(f); }
};
using File = std::unique_ptr<FILE, FileCloser>;

struct PngRead {
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~PngRead() { if (png) png_destroy_read_struct(&png, &info, nullptr); }
};

struct PngWrite {
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~PngWrite() { if (png) png_destroy_write_struct(&png, &info); }
};

// Reads an 8-bit image; palette/16-bit/alpha inputs are normalized to
// 8-bit gray or RGB. Returns channel count (1 or 3).
int read_png(const std::string& path, int& w, int& h, std::vector<uint8_t>& data) {
    File f(std::fopen(path.c_str(), "rb"));
    if (!f) throw IoError("cannot open for reading: " + path);
    uint8_t sig[8];
    if (std::fread(sig, 1, 8, f.get()) != 8 || png_sig_cmp(sig, 0, 8))
        throw FormatError("not a PNG file: " + path);

    PngRead ctx;
    ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!ctx.png) throw IoError("libpng init failed");
    ctx.info = png_create_info_struct(ctx.png);
    if (!ctx.info) throw IoError("libpng info init failed");
    if (setjmp(png_jmpbuf(ctx.png)))
        throw FormatError("malformed PNG: " + path);

    png_init_io(ctx.png, f.get());
    png_set_sig_bytes(ctx.png, 8);
    png_read_info(ctx.png, ctx.info);

    png_uint_32 pw, ph;
    int bit_depth, color_type;
    png_get_IHDR(ctx.png, ctx.info, &pw, &ph, &bit_depth, &color_type, nullptr, nullptr, nullptr);
    if (pw == 0 || ph == 0) throw FormatError("PNG with zero dimension: " + path);

    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(ctx.png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8)
        png_set_expand_gray_1_2_4_to_8(ctx.png);
    if (bit_depth == 16) png_set_strip_16(ctx.png);
    if (png_get_valid(ctx.png, ctx.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(ctx.png);
    png_set_strip_alpha(ctx.png);
    png_read_update_info(ctx.png, ctx.info);

    int channels = png_get_channels(ctx.png, ctx.info);
    if (channels != 1 && channels != 3)
        throw FormatError("unsupported PNG channel layout: " + path);

    w = (int)pw;
    h = (int)ph;
    data.resize((size_t)w * h * channels);
    std::vector<png_bytep> rows(h);
    for (int y = 0; y < h; ++y) rows[y] = data.data() + (size_t)y * w * channels;
    png_read_image(ctx.png, rows.data());
    png_read_end(ctx.png, nullptr);
    return channels;
}

void write_png(const std::string& path, int w, int h, int channels,
               const std::vector<uint8_t>& data) {
    File f(std::fopen(path.c_str(), "wb"));
    if (!f) throw IoError("cannot open for writing: " + path);

    PngWrite ctx;
    ctx.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!ctx.png) throw IoError("libpng init failed");
    ctx.info = png_create_info_struct(ctx.png);
    if (!ctx.info) throw IoError("libpng info init failed");
    if (setjmp(png_jmpbuf(ctx.png)))
        throw IoError("PNG write failed: " + path);

    png_init_io(ctx.png, f.get());
    png_set_IHDR(ctx.png, ctx.info, (png_uint_32)w, (png_uint_32)h, 8,
                 channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_set_compression_level(ctx.png, 6);
    png_write_info(ctx.png, ctx.info);
    std::vector<png_bytep> rows(h);
    for (int y = 0; y < h; ++y)
        rows[y] = const_cast<png_bytep>(data.data() + (size_t)y * w * channels);
    png_write_image(ctx.png, rows.data());
    png_write_end(ctx.png, nullptr);
}

} // namespace

SdrImage load_png_rgb(const std::string& path) {
    int w, h;
    std::vector<uint8_t> data;
    int ch = read_png(path, w, h, data);
    SdrImage img(w, h, ColorSpace::RGB);
    if (ch == 3) {
        for (size_t i = 0, n = img.pixel_count(); i < n; ++i) {
            img.p0[i] = data[3 * i];
            img.p1[i] = data[3 * i + 1];
            img.p2[i] = data[3 * i + 2];
        }
    } else {
        for (size_t i = 0, n = img.pixel_count(); i < n; ++i)
            img.p0[i] = img.p1[i] = img.p2[i] = data[i];
    }
    return img;
}

GrayImage load_png_gray(const std::string& path) {
    int w, h;
    std::vector<uint8_t> data;
    int ch = read_png(path, w, h, data);
    if (ch != 1) throw FormatError("expected grayscale PNG: " + path);
    GrayImage img(w, h);
    img.v = std::move(data);
    return img;
}

void save_png_rgb(const SdrImage& img, const std::string& path) {
    std::vector<uint8_t> data((size_t)img.width * img.height * 3);
    for (size_t i = 0, n = img.pixel_count(); i < n; ++i) {
        data[3 * i] = img.p0[i];
        data[3 * i + 1] = img.p1[i];
        data[3 * i + 2] = img.p2[i];
    }
    write_png(path, img.width, img.height, 3, data);
}

void save_png_gray(const GrayImage& img, const std::string& path) {
    write_png(path, img.width, img.height, 1, img.v);
}

} // namespace hdrwm

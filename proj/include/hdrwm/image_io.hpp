#pragma once

#include <string>
#include <variant>
#include <vector>

#include "hdrwm/image.hpp"

namespace hdrwm {

// Single 8-bit plane (saliency maps, exported masks, luma dumps).
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> v;

    GrayImage() = default;
    GrayImage(int w, int h) : width(w), height(h), v((size_t)w * h, 0) {}
};

enum class ImageKind { HdrRgbe, Pfm, Png, Pbm, Pgm };

using AnyImage = std::variant<HdrImage, SdrImage, BitImage, GrayImage>;

// Kind inferred from the file extension (.hdr .pfm .png .pbm .pgm).
ImageKind kind_from_path(const std::string& path);

AnyImage load_image(const std::string& path, ImageKind kind);
AnyImage load_image(const std::string& path);

// Typed loaders; throw FormatError when the file decodes to another type.
HdrImage load_hdr(const std::string& path);          // .hdr or .pfm
SdrImage load_sdr(const std::string& path);          // .png (RGB; gray replicated)
BitImage load_bit(const std::string& path);          // .pbm (P4)
GrayImage load_gray(const std::string& path);        // .pgm (P5) or grayscale .png

void save_hdr(const HdrImage& img, const std::string& path); // .hdr or .pfm
void save_sdr(const SdrImage& img, const std::string& path); // .png, RGB only
void save_bit(const BitImage& img, const std::string& path); // .pbm (P4)
void save_gray(const GrayImage& img, const std::string& path); // .pgm or .png

// Radiance RGBE <-> linear float for one pixel; decode convention
// value = (mantissa + 0.5)/256 * 2^(exponent-128).
void rgbe_decode(const uint8_t rgbe[4], float out[3]);
void rgbe_encode(const float rgb[3], uint8_t out[4]);

// In-memory PBM (P4) bytes, used for the sidecar mask payload.
std::vector<uint8_t> pbm_bytes(const BitImage& img);
BitImage bit_from_pbm_bytes(const std::vector<uint8_t>& bytes);

} // namespace hdrwm

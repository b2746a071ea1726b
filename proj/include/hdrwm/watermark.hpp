#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hdrwm/image.hpp"
#include "hdrwm/keys.hpp"
#include "hdrwm/lwt.hpp"
#include "hdrwm/saliency.hpp"
#include "hdrwm/tonemap.hpp"

namespace hdrwm {

inline constexpr const char* kToolVersion = "hdrwm 1.0.0";
inline constexpr int kEmbedSize = 512; // working resolution of the pipeline

enum class TmoKind { Durand, Paper };
enum class Region { Foreground, Background };

struct EmbedParams {
    int delta_base = 4;
    int bitplane_n = 2;    // bit-plane view of the quantizer (delta = 2^n)
    double alpha = 0.04;   // background strength
    double beta = 0.02;    // foreground strength
    std::vector<Band> subbands = {Band::HL, Band::LH, Band::HH};
    int tau_redundancy = 16;
    int tau_delta = 24;
    float saliency_threshold = 0.5f;

    // Strength-to-step mapping: the defaults land on delta_base for both
    // regions and raising a strength raises that region's step in proportion.
    int delta_fg() const { return std::max(2, (int)std::lround(beta * delta_base / 0.02)); }
    int delta_bg() const { return std::max(2, (int)std::lround(alpha * delta_base / 0.04)); }

    void validate() const;
};

// How the binary mask for segmentation is produced.
struct SaliencyChoice {
    enum class Mode { Builtin, External, Uniform } mode = Mode::Builtin;
    GrayImage external_map; // used when mode == External
};

// Everything the extractor needs besides the key. Stored as a JSON sidecar
// next to the watermarked HDR output.
struct Sidecar {
    int schema = 1;
    std::string tool = kToolVersion;
    std::string key_fingerprint;
    TmoKind tmo = TmoKind::Durand;
    int tau = 0;
    int host_w = 0, host_h = 0;
    int wm_w = 0, wm_h = 0;
    EmbedParams params;
    BitImage mask; // 512x512 segmentation mask
    // Carrier cells the embedder rerouted around (saturation/gamut); packed
    // bitmaps in band-major cell order.
    std::vector<uint8_t> excluded_fg, excluded_bg, excluded_tau;
    std::optional<DurandMeta> durand;

    void save(const std::string& path) const;
    static Sidecar load(const std::string& path);
};

// Host prepared for embedding: tone-mapped, resized to the working
// resolution. Reusable across embeds with different parameters or masks.
struct PreparedHost {
    TmoKind tmo = TmoKind::Durand;
    HdrImage host512;
    SdrImage sdr512; // RGB rendering of host512
    DurandMeta durand_meta;
    TauParam tau;
    int orig_w = 0, orig_h = 0;
};

PreparedHost prepare_host(const HdrImage& host, TmoKind tmo,
                          const DurandParams& dp = DurandParams{});

struct EmbedResult {
    HdrImage watermarked_hdr;
    SdrImage watermarked_sdr; // 512x512 RGB, equals the re-rendered HDR
    Sidecar sidecar;
    int verify_rounds = 0;       // embed/verify iterations until exact
    size_t excluded_cells = 0;   // carriers rerouted for saturation/gamut
};

EmbedResult embed_watermark(const PreparedHost& host, const BitImage& watermark,
                            const SecretKey& key, const EmbedParams& params,
                            const SaliencyChoice& saliency = {});

EmbedResult embed_watermark(const HdrImage& host, const BitImage& watermark,
                            const SecretKey& key, const EmbedParams& params,
                            TmoKind tmo = TmoKind::Durand, const SaliencyChoice& saliency = {});

struct ExtractResult {
    BitImage watermark;
    int tau_recovered = 0;
    bool tau_matches = false; // equals the sidecar's recorded tau
};

ExtractResult extract_watermark(const SdrImage& image, const SecretKey& key,
                                const Sidecar& sidecar);

// Keyed-shuffled carrier addresses for one region, exposed for tests and
// capacity probing. Cells are flat ids: subband_index * (sub_w*sub_h) + pos.
struct CarrierPlan {
    Region region;
    size_t needed = 0;
    std::vector<uint32_t> order; // shuffled eligible cells, spares included
};

CarrierPlan derive_carrier_plan(const BinaryMask& mask512, Region region,
                                const EmbedParams& params, const SecretKey& key,
                                size_t needed_bits);

// Half-resolution carrier mask: nearest-neighbor downsample of the 512 mask,
// the same reduction partition_watermark applies for a 256x256 watermark.
BinaryMask subband_mask(const BinaryMask& mask512);

// Foreground support cells at sub-band resolution, eroded by two cells so
// background-stage block updates cannot reach a foreground carrier.
BinaryMask eroded_foreground(const BinaryMask& sub_mask);

} // namespace hdrwm

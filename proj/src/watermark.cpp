#include "hdrwm/watermark.hpp"

#include <algorithm>
#include <set>

#include "hdrwm/color.hpp"
#include "hdrwm/qim.hpp"
#include "hdrwm/resize.hpp"

namespace hdrwm {

namespace {

// Lattice offset: carriers are sampled as coefficient + kOffset so the
// quantizer always sees a non-negative value regardless of sign.
constexpr int32_t kCarrierOffset = 32768;
constexpr int kMaxVerifyRounds = 16;

enum class StageMode { Dual, SingleFg, SingleBg };

struct Bitmap {
    std::vector<uint8_t> bytes;
    explicit Bitmap(size_t nbits = 0) : bytes((nbits + 7) / 8, 0) {}
    bool get(uint32_t i) const { return (bytes[i >> 3] >> (i & 7)) & 1; }
    void set(uint32_t i) { bytes[i >> 3] |= (uint8_t)(1u << (i & 7)); }
    size_t count() const {
        size_t n = 0;
        for (uint8_t b : bytes) n += (size_t)__builtin_popcount(b);
        return n;
    }
};

StageMode stage_mode(const BinaryMask& sub) {
    size_t ones = sub.popcount();
    if (ones == sub.bits.size()) return StageMode::SingleFg;
    if (ones == 0) return StageMode::SingleBg;
    return StageMode::Dual;
}

// bit index i of the plan -> carrier cell, skipping excluded cells. A bit
// whose base cell is excluded moves to the first free spare at the tail of
// the shuffled order, so exclusions never shift other assignments.
std::vector<uint32_t> assign_cells(const CarrierPlan& plan, const Bitmap& excluded) {
    std::vector<uint32_t> cells(plan.needed);
    size_t spare = plan.needed;
    for (size_t i = 0; i < plan.needed; ++i) {
        uint32_t c = plan.order[i];
        if (excluded.get(c)) {
            while (spare < plan.order.size() && excluded.get(plan.order[spare])) ++spare;
            if (spare >= plan.order.size())
                throw CapacityError("carrier capacity exhausted after exclusions",
                                    (long long)(plan.order.size() - excluded.count()),
                                    (long long)plan.needed);
            c = plan.order[spare++];
        }
        cells[i] = c;
    }
    return cells;
}

std::vector<int32_t> luma_i32(const SdrImage& ycc) {
    std::vector<int32_t> y(ycc.pixel_count());
    for (size_t i = 0; i < y.size(); ++i) y[i] = ycc.p0[i];
    return y;
}

int32_t& band_coef(SubbandSet& bands, const std::vector<Band>& subbands, uint32_t cell) {
    size_t n = (size_t)bands.sub_w * bands.sub_h;
    return bands.band(subbands[cell / n])[cell % n];
}

int32_t band_coef(const SubbandSet& bands, const std::vector<Band>& subbands, uint32_t cell) {
    size_t n = (size_t)bands.sub_w * bands.sub_h;
    return bands.band(subbands[cell / n])[cell % n];
}

// Watermark routing: scan-order positions of mask-ones (foreground stream)
// and mask-zeros (background stream) at watermark resolution.
struct Routing {
    std::vector<uint32_t> fg_pos, bg_pos;
};

Routing route_watermark(const BinaryMask& wm_mask) {
    Routing r;
    for (uint32_t i = 0; i < wm_mask.bits.size(); ++i)
        (wm_mask.bits[i] ? r.fg_pos : r.bg_pos).push_back(i);
    return r;
}

std::vector<uint8_t> gather_bits(const BitImage& wm, const std::vector<uint32_t>& pos) {
    std::vector<uint8_t> out(pos.size());
    for (size_t i = 0; i < pos.size(); ++i) out[i] = wm.bits[pos[i]];
    return out;
}

std::vector<uint8_t> tau_bit_sequence(int tau, int redundancy) {
    std::vector<uint8_t> seq;
    seq.reserve(8 * (size_t)redundancy);
    for (int b = 7; b >= 0; --b)
        for (int r = 0; r < redundancy; ++r) seq.push_back((uint8_t)((tau >> b) & 1));
    return seq;
}

struct StagePlan {
    WaveletKernel kernel;
    std::vector<uint32_t> cells;      // carrier cell per payload bit
    const std::vector<uint8_t>* bits; // payload bit per carrier
    int delta;
};

// Applies one transform stage: forward, quantize every carrier, inverse.
std::vector<int32_t> run_stage(const std::vector<int32_t>& y, int w, int h,
                               const std::vector<Band>& subbands,
                               const std::vector<StagePlan*>& plans, WaveletKernel kernel,
                               const std::vector<uint32_t>* tau_cells,
                               const std::vector<uint8_t>* tau_bits, int tau_delta) {
    SubbandSet bands = lwt_forward(y, w, h, kernel);
    for (const StagePlan* p : plans) {
        for (size_t i = 0; i < p->cells.size(); ++i) {
            int32_t& c = band_coef(bands, subbands, p->cells[i]);
            c = qim_embed(c + kCarrierOffset, (*p->bits)[i], p->delta) - kCarrierOffset;
        }
    }
    if (tau_cells) {
        for (size_t i = 0; i < tau_cells->size(); ++i) {
            int32_t& c = bands.ll[(*tau_cells)[i]];
            c = qim_embed(c + kCarrierOffset, (*tau_bits)[i], tau_delta) - kCarrierOffset;
        }
    }
    return lwt_inverse(bands);
}

SdrImage finish_sdr(const std::vector<int32_t>& y, const SdrImage& ycc) {
    SdrImage out(ycc.width, ycc.height, ColorSpace::YCbCr);
    for (size_t i = 0; i < y.size(); ++i)
        out.p0[i] = (uint8_t)std::clamp(y[i], 0, 255);
    out.p1 = ycc.p1;
    out.p2 = ycc.p2;
    return ycbcr_to_rgb(out);
}

// Cells whose pixel support sits too close to the 8-bit or gamut limits are
// excluded up front; the verify loop catches anything the margin misses.
void preguard(const SdrImage& ycc, const BinaryMask& sub, size_t nbands, int margin_payload,
              int margin_tau, Bitmap& ex_fg, Bitmap& ex_bg, Bitmap& ex_tau) {
    int w = ycc.width, h = ycc.height;
    int sw = sub.width, sh = sub.height;
    std::vector<uint8_t> risky((size_t)w * h, 0);
    std::vector<int> margin((size_t)w * h, 0);
    for (size_t i = 0; i < ycc.pixel_count(); ++i) {
        int Y = ycc.p0[i], Cb = ycc.p1[i] - 128, Cr = ycc.p2[i] - 128;
        int R = Y + ((91881 * Cr + 32768) >> 16);
        int G = Y - ((22554 * Cb + 46802 * Cr + 32768) >> 16);
        int B = Y + ((116130 * Cb + 32768) >> 16);
        int lo = std::min({Y, R, G, B});
        int hi = std::max({Y, R, G, B});
        margin[i] = std::min(lo, 255 - hi);
    }
    auto cell_risky = [&](int cx, int cy, int need) {
        int x0 = std::max(0, 2 * cx - 2), x1 = std::min(w - 1, 2 * cx + 3);
        int y0 = std::max(0, 2 * cy - 2), y1 = std::min(h - 1, 2 * cy + 3);
        for (int y = y0; y <= y1; ++y)
            for (int x = x0; x <= x1; ++x)
                if (margin[(size_t)y * w + x] < need) return true;
        return false;
    };
    for (int cy = 0; cy < sh; ++cy)
        for (int cx = 0; cx < sw; ++cx) {
            uint32_t pos = (uint32_t)(cy * sw + cx);
            if (cell_risky(cx, cy, margin_payload))
                for (size_t b = 0; b < nbands; ++b) {
                    ex_fg.set((uint32_t)(b * sw * sh) + pos);
                    ex_bg.set((uint32_t)(b * sw * sh) + pos);
                }
            if (cell_risky(cx, cy, margin_tau)) ex_tau.set(pos);
        }
}

struct DecodeView {
    SubbandSet cdf, haar;
    bool has_cdf = false, has_haar = false;
};

DecodeView analyze(const std::vector<int32_t>& y, int w, int h, StageMode mode) {
    DecodeView v;
    if (mode != StageMode::SingleBg) {
        v.cdf = lwt_forward(y, w, h, WaveletKernel::Cdf22);
        v.has_cdf = true;
    }
    if (mode != StageMode::SingleFg) {
        v.haar = lwt_forward(y, w, h, WaveletKernel::Haar);
        v.has_haar = true;
    }
    return v;
}

const SubbandSet& stage_bands(const DecodeView& v, StageMode mode, Region region) {
    if (mode == StageMode::SingleBg) return v.haar;
    if (mode == StageMode::SingleFg) return v.cdf;
    return region == Region::Foreground ? v.cdf : v.haar;
}

const SubbandSet& tau_bands(const DecodeView& v, StageMode mode) {
    // tau lives in the final-stage LL: haar unless the mask is all-foreground.
    return mode == StageMode::SingleFg ? v.cdf : v.haar;
}

} // namespace

void EmbedParams::validate() const {
    if (delta_base < 2) throw ConfigError("delta_base must be at least 2");
    if (!(alpha > 0.0 && alpha <= 1.0) || !(beta > 0.0 && beta <= 1.0))
        throw ConfigError("alpha and beta must lie in (0, 1]");
    if (subbands.empty()) throw ConfigError("at least one detail sub-band is required");
    std::set<Band> seen;
    for (Band b : subbands) {
        if (b == Band::LL) throw ConfigError("LL is reserved for tau synchronization");
        if (!seen.insert(b).second) throw ConfigError("duplicate sub-band in selection");
    }
    if (bitplane_n < 0 || bitplane_n >= 31) throw ConfigError("bit plane index out of range");
    if (tau_redundancy < 3) throw ConfigError("tau redundancy must be at least 3");
    if (tau_delta < 2) throw ConfigError("tau_delta must be at least 2");
    if (saliency_threshold < 0.0f || saliency_threshold > 1.0f)
        throw ConfigError("saliency threshold must lie in [0, 1]");
}

BinaryMask subband_mask(const BinaryMask& mask512) {
    BinaryMask sub(mask512.width / 2, mask512.height / 2);
    sub.threshold_used = mask512.threshold_used;
    for (int y = 0; y < sub.height; ++y)
        for (int x = 0; x < sub.width; ++x)
            sub.bits[(size_t)y * sub.width + x] = mask512.at(2 * x, 2 * y);
    return sub;
}

BinaryMask eroded_foreground(const BinaryMask& sub) {
    BinaryMask out(sub.width, sub.height);
    out.threshold_used = sub.threshold_used;
    for (int y = 0; y < sub.height; ++y)
        for (int x = 0; x < sub.width; ++x) {
            bool ok = sub.at(x, y);
            for (int dy = -2; ok && dy <= 2; ++dy)
                for (int dx = -2; ok && dx <= 2; ++dx) {
                    int nx = std::clamp(x + dx, 0, sub.width - 1);
                    int ny = std::clamp(y + dy, 0, sub.height - 1);
                    ok = sub.at(nx, ny);
                }
            out.bits[(size_t)y * sub.width + x] = ok ? 1 : 0;
        }
    return out;
}

CarrierPlan derive_carrier_plan(const BinaryMask& mask512, Region region,
                                const EmbedParams& params, const SecretKey& key,
                                size_t needed_bits) {
    params.validate();
    BinaryMask sub = subband_mask(mask512);
    StageMode mode = stage_mode(sub);

    BinaryMask eligible(sub.width, sub.height);
    if (region == Region::Foreground) {
        eligible = (mode == StageMode::Dual) ? eroded_foreground(sub) : sub;
    } else {
        for (size_t i = 0; i < sub.bits.size(); ++i) eligible.bits[i] = 1 - sub.bits[i];
    }

    CarrierPlan plan;
    plan.region = region;
    plan.needed = needed_bits;
    size_t sub_n = sub.bits.size();
    for (size_t b = 0; b < params.subbands.size(); ++b)
        for (uint32_t i = 0; i < sub_n; ++i)
            if (eligible.bits[i]) plan.order.push_back((uint32_t)(b * sub_n) + i);

    if (plan.order.size() < needed_bits)
        throw CapacityError(std::string("insufficient carrier capacity in the ") +
                                (region == Region::Foreground ? "foreground" : "background") +
                                " region",
                            (long long)plan.order.size(), (long long)needed_bits);

    auto perm = keyed_permutation(
        key, region == Region::Foreground ? "sample-f" : "sample-b", plan.order.size());
    plan.order = apply_permutation(plan.order, perm, true);
    return plan;
}

PreparedHost prepare_host(const HdrImage& host, TmoKind tmo, const DurandParams& dp) {
    host.validate();
    PreparedHost out;
    out.tmo = tmo;
    out.orig_w = host.width;
    out.orig_h = host.height;
    // The exact SDR<->HDR correspondence needs the tone-map decomposition at
    // the embedding resolution, so any resize happens in the HDR domain.
    const HdrImage* h512 = &host;
    HdrImage resized;
    if (host.width != kEmbedSize || host.height != kEmbedSize) {
        resized = resize_cubic(host, kEmbedSize, kEmbedSize);
        h512 = &resized;
    }
    out.host512 = *h512;
    out.tau = compute_tau(out.host512);
    if (tmo == TmoKind::Durand) {
        out.sdr512 = tonemap_durand(out.host512, dp, &out.durand_meta);
    } else {
        out.sdr512 = tonemap_paper(out.host512, out.tau).hprime;
    }
    return out;
}

EmbedResult embed_watermark(const PreparedHost& host, const BitImage& watermark,
                            const SecretKey& key, const EmbedParams& params,
                            const SaliencyChoice& saliency) {
    params.validate();
    if (watermark.width < 1 || watermark.height < 1)
        throw FormatError("empty watermark");
    for (uint8_t b : watermark.bits)
        if (b > 1) throw FormatError("watermark must be binary");

    const int W = kEmbedSize;

    // Segmentation mask.
    BinaryMask mask(W, W);
    switch (saliency.mode) {
        case SaliencyChoice::Mode::Builtin:
            mask = threshold_mask(detect_saliency_builtin(host.sdr512),
                                  params.saliency_threshold);
            break;
        case SaliencyChoice::Mode::External:
            mask = threshold_mask(saliency_from_gray(saliency.external_map, W, W),
                                  params.saliency_threshold);
            break;
        case SaliencyChoice::Mode::Uniform:
            std::fill(mask.bits.begin(), mask.bits.end(), (uint8_t)1);
            mask.threshold_used = 0.0f;
            break;
    }

    SdrImage ycc = rgb_to_ycbcr(host.sdr512);
    std::vector<int32_t> y0 = luma_i32(ycc);

    BinaryMask sub = subband_mask(mask);
    StageMode mode = stage_mode(sub);

    // Watermark routing mask at watermark resolution. For the default
    // half-host watermark this is exactly the sub-band carrier mask.
    BinaryMask wm_mask = (watermark.width == sub.width && watermark.height == sub.height)
                             ? sub
                             : BinaryMask::from_bits(
                                   resize_nearest(mask.as_bits(), watermark.width,
                                                  watermark.height),
                                   mask.threshold_used);

    Routing routing = route_watermark(wm_mask);
    auto fg_list = gather_bits(watermark, routing.fg_pos);
    auto bg_list = gather_bits(watermark, routing.bg_pos);
    auto perm_f = keyed_permutation(key, "perm-f", fg_list.size());
    auto perm_b = keyed_permutation(key, "perm-b", bg_list.size());
    auto fg_seq = apply_permutation(fg_list, perm_f, true);
    auto bg_seq = apply_permutation(bg_list, perm_b, true);

    CarrierPlan plan_f = derive_carrier_plan(mask, Region::Foreground, params, key,
                                             fg_seq.size());
    CarrierPlan plan_b = derive_carrier_plan(mask, Region::Background, params, key,
                                             bg_seq.size());

    // tau carriers live in the LL of the final (background) stage.
    std::vector<uint8_t> tau_seq = tau_bit_sequence(host.tau.tau, params.tau_redundancy);
    CarrierPlan plan_tau;
    plan_tau.needed = tau_seq.size();
    {
        size_t sub_n = sub.bits.size();
        for (uint32_t i = 0; i < sub_n; ++i) {
            bool bg_cell = sub.bits[i] == 0;
            if (mode == StageMode::SingleFg ? true : bg_cell) plan_tau.order.push_back(i);
        }
        if (plan_tau.order.size() < plan_tau.needed)
            throw CapacityError("insufficient LL capacity for tau",
                                (long long)plan_tau.order.size(), (long long)plan_tau.needed);
        auto perm = keyed_permutation(key, "tau", plan_tau.order.size());
        plan_tau.order = apply_permutation(plan_tau.order, perm, true);
    }

    const size_t nbands = params.subbands.size();
    const size_t sub_n = sub.bits.size();
    Bitmap ex_fg(nbands * sub_n), ex_bg(nbands * sub_n), ex_tau(sub_n);
    preguard(ycc, sub, nbands, std::max(params.delta_fg(), params.delta_bg()) + 2,
             params.tau_delta + 2, ex_fg, ex_bg, ex_tau);

    const int delta_f = params.delta_fg();
    const int delta_b = params.delta_bg();

    std::vector<int32_t> y_final;
    SdrImage sdr_out;
    int rounds = 0;
    for (;;) {
        if (++rounds > kMaxVerifyRounds)
            throw CapacityError("embedding failed to converge to an exactly decodable image",
                                0, 0);
        auto cells_f = assign_cells(plan_f, ex_fg);
        auto cells_b = assign_cells(plan_b, ex_bg);
        auto cells_tau = assign_cells(plan_tau, ex_tau);

        StagePlan sp_f{WaveletKernel::Cdf22, cells_f, &fg_seq, delta_f};
        StagePlan sp_b{WaveletKernel::Haar, cells_b, &bg_seq, delta_b};

        std::vector<int32_t> y;
        switch (mode) {
            case StageMode::Dual: {
                std::vector<StagePlan*> first{&sp_f};
                y = run_stage(y0, W, W, params.subbands, first, WaveletKernel::Cdf22,
                              nullptr, nullptr, 0);
                std::vector<StagePlan*> second{&sp_b};
                y = run_stage(y, W, W, params.subbands, second, WaveletKernel::Haar,
                              &cells_tau, &tau_seq, params.tau_delta);
                break;
            }
            case StageMode::SingleFg: {
                std::vector<StagePlan*> both{&sp_f, &sp_b};
                y = run_stage(y0, W, W, params.subbands, both, WaveletKernel::Cdf22,
                              &cells_tau, &tau_seq, params.tau_delta);
                break;
            }
            case StageMode::SingleBg: {
                std::vector<StagePlan*> both{&sp_f, &sp_b};
                y = run_stage(y0, W, W, params.subbands, both, WaveletKernel::Haar,
                              &cells_tau, &tau_seq, params.tau_delta);
                break;
            }
        }

        // Verify a full decode from the output RGB; any carrier that fails
        // (saturation, gamut clamp) is excluded and its bit rerouted.
        sdr_out = finish_sdr(y, ycc);
        SdrImage ycc_back = rgb_to_ycbcr(sdr_out);
        DecodeView view = analyze(luma_i32(ycc_back), W, W, mode);

        size_t dirty = 0;
        const SubbandSet& fg_bands = stage_bands(view, mode, Region::Foreground);
        for (size_t i = 0; i < cells_f.size(); ++i)
            if (qim_extract(band_coef(fg_bands, params.subbands, cells_f[i]) + kCarrierOffset,
                            delta_f) != fg_seq[i]) {
                ex_fg.set(cells_f[i]);
                ++dirty;
            }
        const SubbandSet& bg_bands = stage_bands(view, mode, Region::Background);
        for (size_t i = 0; i < cells_b.size(); ++i)
            if (qim_extract(band_coef(bg_bands, params.subbands, cells_b[i]) + kCarrierOffset,
                            delta_b) != bg_seq[i]) {
                ex_bg.set(cells_b[i]);
                ++dirty;
            }
        const SubbandSet& tb = tau_bands(view, mode);
        for (size_t i = 0; i < cells_tau.size(); ++i)
            if (qim_extract(tb.ll[cells_tau[i]] + kCarrierOffset, params.tau_delta) !=
                tau_seq[i]) {
                ex_tau.set(cells_tau[i]);
                ++dirty;
            }
        if (dirty == 0) {
            y_final = std::move(y);
            break;
        }
    }
    (void)y_final;

    EmbedResult res;
    res.verify_rounds = rounds;
    res.excluded_cells = ex_fg.count() + ex_bg.count() + ex_tau.count();
    res.watermarked_sdr = sdr_out;
    if (host.tmo == TmoKind::Durand)
        res.watermarked_hdr = inverse_tonemap_durand(sdr_out, host.durand_meta);
    else
        res.watermarked_hdr = inverse_tonemap_paper(sdr_out, host.tau);

    Sidecar& sc = res.sidecar;
    sc.key_fingerprint = key.fingerprint();
    sc.tmo = host.tmo;
    sc.tau = host.tau.tau;
    sc.host_w = host.orig_w;
    sc.host_h = host.orig_h;
    sc.wm_w = watermark.width;
    sc.wm_h = watermark.height;
    sc.params = params;
    sc.mask = mask.as_bits();
    sc.excluded_fg = ex_fg.bytes;
    sc.excluded_bg = ex_bg.bytes;
    sc.excluded_tau = ex_tau.bytes;
    if (host.tmo == TmoKind::Durand) sc.durand = host.durand_meta;
    return res;
}

EmbedResult embed_watermark(const HdrImage& host, const BitImage& watermark,
                            const SecretKey& key, const EmbedParams& params, TmoKind tmo,
                            const SaliencyChoice& saliency) {
    return embed_watermark(prepare_host(host, tmo), watermark, key, params, saliency);
}

ExtractResult extract_watermark(const SdrImage& image, const SecretKey& key,
                                const Sidecar& sc) {
    sc.params.validate();
    if (sc.mask.width != kEmbedSize || sc.mask.height != kEmbedSize)
        throw FormatError("sidecar mask has unexpected dimensions");
    if (sc.wm_w < 1 || sc.wm_h < 1) throw FormatError("sidecar watermark dims invalid");

    const int W = kEmbedSize;
    SdrImage img = image;
    if (img.width != W || img.height != W) img = resize_cubic(img, W, W);
    if (img.colorspace != ColorSpace::RGB)
        throw FormatError("extraction expects an RGB SDR image");

    BinaryMask mask = BinaryMask::from_bits(sc.mask);
    BinaryMask sub = subband_mask(mask);
    StageMode mode = stage_mode(sub);
    BinaryMask wm_mask = (sc.wm_w == sub.width && sc.wm_h == sub.height)
                             ? sub
                             : BinaryMask::from_bits(
                                   resize_nearest(mask.as_bits(), sc.wm_w, sc.wm_h),
                                   mask.threshold_used);
    Routing routing = route_watermark(wm_mask);

    CarrierPlan plan_f = derive_carrier_plan(mask, Region::Foreground, sc.params, key,
                                             routing.fg_pos.size());
    CarrierPlan plan_b = derive_carrier_plan(mask, Region::Background, sc.params, key,
                                             routing.bg_pos.size());
    CarrierPlan plan_tau;
    plan_tau.needed = 8 * (size_t)sc.params.tau_redundancy;
    {
        size_t sub_n = sub.bits.size();
        for (uint32_t i = 0; i < sub_n; ++i) {
            bool bg_cell = sub.bits[i] == 0;
            if (mode == StageMode::SingleFg ? true : bg_cell) plan_tau.order.push_back(i);
        }
        if (plan_tau.order.size() < plan_tau.needed)
            throw CapacityError("sidecar/params mismatch: no room for tau",
                                (long long)plan_tau.order.size(), (long long)plan_tau.needed);
        auto perm = keyed_permutation(key, "tau", plan_tau.order.size());
        plan_tau.order = apply_permutation(plan_tau.order, perm, true);
    }

    const size_t nbands = sc.params.subbands.size();
    const size_t sub_n = sub.bits.size();
    Bitmap ex_fg(nbands * sub_n), ex_bg(nbands * sub_n), ex_tau(sub_n);
    if (sc.excluded_fg.size() != ex_fg.bytes.size() ||
        sc.excluded_bg.size() != ex_bg.bytes.size() ||
        sc.excluded_tau.size() != ex_tau.bytes.size())
        throw FormatError("sidecar exclusion bitmaps do not match the parameter set");
    ex_fg.bytes = sc.excluded_fg;
    ex_bg.bytes = sc.excluded_bg;
    ex_tau.bytes = sc.excluded_tau;

    auto cells_f = assign_cells(plan_f, ex_fg);
    auto cells_b = assign_cells(plan_b, ex_bg);
    auto cells_tau = assign_cells(plan_tau, ex_tau);

    SdrImage ycc = rgb_to_ycbcr(img);
    DecodeView view = analyze(luma_i32(ycc), W, W, mode);

    const int delta_f = sc.params.delta_fg();
    const int delta_b = sc.params.delta_bg();

    std::vector<uint8_t> fg_seq(cells_f.size()), bg_seq(cells_b.size());
    const SubbandSet& fg_bands = stage_bands(view, mode, Region::Foreground);
    for (size_t i = 0; i < cells_f.size(); ++i)
        fg_seq[i] = (uint8_t)qim_extract(
            band_coef(fg_bands, sc.params.subbands, cells_f[i]) + kCarrierOffset, delta_f);
    const SubbandSet& bg_bands = stage_bands(view, mode, Region::Background);
    for (size_t i = 0; i < cells_b.size(); ++i)
        bg_seq[i] = (uint8_t)qim_extract(
            band_coef(bg_bands, sc.params.subbands, cells_b[i]) + kCarrierOffset, delta_b);

    auto perm_f = keyed_permutation(key, "perm-f", fg_seq.size());
    auto perm_b = keyed_permutation(key, "perm-b", bg_seq.size());
    auto fg_list = apply_permutation(fg_seq, perm_f, false);
    auto bg_list = apply_permutation(bg_seq, perm_b, false);

    ExtractResult res;
    res.watermark = BitImage(sc.wm_w, sc.wm_h);
    for (size_t i = 0; i < routing.fg_pos.size(); ++i)
        res.watermark.bits[routing.fg_pos[i]] = fg_list[i];
    for (size_t i = 0; i < routing.bg_pos.size(); ++i)
        res.watermark.bits[routing.bg_pos[i]] = bg_list[i];

    // Hard per-bit majority over the redundancy group; ties read as 1.
    const SubbandSet& tb = tau_bands(view, mode);
    int tau = 0;
    int red = sc.params.tau_redundancy;
    for (int b = 0; b < 8; ++b) {
        int votes = 0;
        for (int r = 0; r < red; ++r)
            votes += qim_extract(tb.ll[cells_tau[(size_t)b * red + r]] + kCarrierOffset,
                                 sc.params.tau_delta);
        int bit = 2 * votes >= red ? 1 : 0;
        tau |= bit << (7 - b);
    }
    res.tau_recovered = tau;
    res.tau_matches = tau == sc.tau;
    return res;
}

} // namespace hdrwm

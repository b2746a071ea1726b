// Sidecar serialization: JSON with base64 payloads; the tone-map base layer
// is zlib-compressed.

#include <zlib.h>

#include <cstring>
#include <fstream>

#include <json.hpp>

#include "hdrwm/image_io.hpp"
#include "hdrwm/watermark.hpp"

namespace hdrwm {

using nlohmann::json;

namespace {

const char kB64[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

std::string b64_encode(const std::vector<uint8_t>& data) {
    std::string out;
    out.reserve((data.size() + 2) / 3 * 4);
    size_t i = 0;
    for (; i + 3 <= data.size(); i += 3) {
        uint32_t v = (data[i] << 16) | (data[i + 1] << 8) | data[i + 2];
        out.push_back(kB64[(v >> 18) & 63]);
        out.push_back(kB64[(v >> 12) & 63]);
        out.push_back(kB64[(v >> 6) & 63]);
        out.push_back(kB64[v & 63]);
    }
    size_t rem = data.size() - i;
    if (rem == 1) {
        uint32_t v = data[i] << 16;
        out.push_back(kB64[(v >> 18) & 63]);
        out.push_back(kB64[(v >> 12) & 63]);
        out += "==";
    } else if (rem == 2) {
        uint32_t v = (data[i] << 16) | (data[i + 1] << 8);
        out.push_back(kB64[(v >> 18) & 63]);
        out.push_back(kB64[(v >> 12) & 63]);
        out.push_back(kB64[(v >> 6) & 63]);
        out.push_back('=');
    }
    return out;
}

std::vector<uint8_t> b64_decode(const std::string& s) {
    int8_t table[256];
    std::fill(std::begin(table), std::end(table), (int8_t)-1);
    for (int i = 0; i < 64; ++i) table[(uint8_t)kB64[i]] = (int8_t)i;
    std::vector<uint8_t> out;
    uint32_t acc = 0;
    int bits = 0;
    for (char c : s) {
        if (c == '=') break;
        int8_t v = table[(uint8_t)c];
        if (v < 0) throw FormatError("invalid base64 in sidecar");
        acc = (acc << 6) | (uint32_t)v;
        bits += 6;
        if (bits >= 8) {
            bits -= 8;
            out.push_back((uint8_t)(acc >> bits));
        }
    }
    return out;
}

std::vector<uint8_t> zlib_pack(const uint8_t* data, size_t n) {
    uLongf bound = compressBound((uLong)n);
    std::vector<uint8_t> out(bound);
    if (compress2(out.data(), &bound, data, (uLong)n, 6) != Z_OK)
        throw IoError("zlib compression failed");
    out.resize(bound);
    return out;
}

std::vector<uint8_t> zlib_unpack(const std::vector<uint8_t>& data, size_t expect) {
    std::vector<uint8_t> out(expect);
    uLongf got = (uLongf)expect;
    if (uncompress(out.data(), &got, data.data(), (uLong)data.size()) != Z_OK || got != expect)
        throw FormatError("sidecar base layer fails to decompress");
    return out;
}

json params_to_json(const EmbedParams& p) {
    json bands = json::array();
    for (Band b : p.subbands) bands.push_back(band_name(b));
    return json{{"delta_base", p.delta_base},
                {"bitplane_n", p.bitplane_n},
                {"alpha", p.alpha},
                {"beta", p.beta},
                {"subbands", bands},
                {"tau_redundancy", p.tau_redundancy},
                {"tau_delta", p.tau_delta},
                {"saliency_threshold", p.saliency_threshold}};
}

EmbedParams params_from_json(const json& j) {
    EmbedParams p;
    p.delta_base = j.at("delta_base").get<int>();
    p.bitplane_n = j.at("bitplane_n").get<int>();
    p.alpha = j.at("alpha").get<double>();
    p.beta = j.at("beta").get<double>();
    p.subbands.clear();
    for (const auto& b : j.at("subbands")) {
        std::string name = b.get<std::string>();
        if (name == "HL") p.subbands.push_back(Band::HL);
        else if (name == "LH") p.subbands.push_back(Band::LH);
        else if (name == "HH") p.subbands.push_back(Band::HH);
        else throw FormatError("sidecar lists unknown sub-band: " + name);
    }
    p.tau_redundancy = j.at("tau_redundancy").get<int>();
    p.tau_delta = j.at("tau_delta").get<int>();
    p.saliency_threshold = j.at("saliency_threshold").get<float>();
    p.validate();
    return p;
}

} // namespace

void Sidecar::save(const std::string& path) const {
    json j;
    j["schema"] = schema;
    j["tool"] = tool;
    j["key_fingerprint"] = key_fingerprint;
    j["tmo"] = tmo == TmoKind::Durand ? "durand" : "paper";
    j["tau"] = tau;
    j["host"] = {{"width", host_w}, {"height", host_h}};
    j["watermark"] = {{"width", wm_w}, {"height", wm_h}};
    j["params"] = params_to_json(params);
    j["mask_pbm_b64"] = b64_encode(pbm_bytes(mask));
    j["excluded"] = {{"fg_b64", b64_encode(excluded_fg)},
                     {"bg_b64", b64_encode(excluded_bg)},
                     {"tau_b64", b64_encode(excluded_tau)}};
    if (durand) {
        auto packed = zlib_pack((const uint8_t*)durand->base.data(),
                                durand->base.size() * sizeof(float));
        j["durand"] = {{"width", durand->width},
                       {"height", durand->height},
                       {"lum_max", durand->lum_max},
                       {"comp", durand->comp},
                       {"base_max", durand->base_max},
                       {"base_checksum", durand->base_checksum},
                       {"base_zlib_b64", b64_encode(packed)}};
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open sidecar for writing: " + path);
    out << j.dump(2) << "\n";
    if (!out) throw IoError("sidecar write failed: " + path);
}

Sidecar Sidecar::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open sidecar: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw FormatError(std::string("malformed sidecar JSON: ") + e.what());
    }
    Sidecar sc;
    try {
        sc.schema = j.at("schema").get<int>();
        if (sc.schema != 1) throw FormatError("unsupported sidecar schema");
        sc.tool = j.at("tool").get<std::string>();
        sc.key_fingerprint = j.at("key_fingerprint").get<std::string>();
        std::string tmo = j.at("tmo").get<std::string>();
        if (tmo == "durand") sc.tmo = TmoKind::Durand;
        else if (tmo == "paper") sc.tmo = TmoKind::Paper;
        else throw FormatError("sidecar names unknown tone-map operator: " + tmo);
        sc.tau = j.at("tau").get<int>();
        sc.host_w = j.at("host").at("width").get<int>();
        sc.host_h = j.at("host").at("height").get<int>();
        sc.wm_w = j.at("watermark").at("width").get<int>();
        sc.wm_h = j.at("watermark").at("height").get<int>();
        sc.params = params_from_json(j.at("params"));
        sc.mask = bit_from_pbm_bytes(b64_decode(j.at("mask_pbm_b64").get<std::string>()));
        sc.excluded_fg = b64_decode(j.at("excluded").at("fg_b64").get<std::string>());
        sc.excluded_bg = b64_decode(j.at("excluded").at("bg_b64").get<std::string>());
        sc.excluded_tau = b64_decode(j.at("excluded").at("tau_b64").get<std::string>());
        if (j.contains("durand")) {
            DurandMeta m;
            const auto& d = j.at("durand");
            m.width = d.at("width").get<int>();
            m.height = d.at("height").get<int>();
            m.lum_max = d.at("lum_max").get<double>();
            m.comp = d.at("comp").get<double>();
            m.base_max = d.at("base_max").get<double>();
            m.base_checksum = d.at("base_checksum").get<uint64_t>();
            auto raw = zlib_unpack(b64_decode(d.at("base_zlib_b64").get<std::string>()),
                                   (size_t)m.width * m.height * sizeof(float));
            m.base.resize((size_t)m.width * m.height);
            std::memcpy(m.base.data(), raw.data(), raw.size());
            if (plane_checksum(m.base) != m.base_checksum)
                throw FormatError("sidecar base layer fails its checksum");
            sc.durand = std::move(m);
        }
    } catch (const json::exception& e) {
        throw FormatError(std::string("sidecar is missing fields: ") + e.what());
    }
    return sc;
}

} // namespace hdrwm

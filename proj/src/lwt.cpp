#include "hdrwm/lwt.hpp"

#include <string>

#include "hdrwm/kernels.hpp"

namespace hdrwm {

namespace {

using kernels::Kernels;

// 1-D forward lifting of a deinterleaved signal: even/odd of length n each.
// ebuf must have room for n+1 entries (mirror slot), dbuf for n+2 with the
// payload at dbuf+1 (mirror slot at index 0). Results: s in sbuf, d at dbuf+1.
void lift_fwd(const Kernels& K, WaveletKernel k,
              int32_t* ebuf, const int32_t* obuf, int32_t* sbuf, int32_t* dbuf, size_t n) {
    if (k == WaveletKernel::Haar) {
        K.haar_fwd(ebuf, obuf, sbuf, dbuf + 1, n);
        return;
    }
    ebuf[n] = ebuf[n - 1]; // symmetric extension
    K.cdf53_predict(obuf, ebuf, ebuf + 1, dbuf + 1, n);
    dbuf[0] = dbuf[1];
    K.cdf53_update(ebuf, dbuf, dbuf + 1, sbuf, n);
}

void lift_inv(const Kernels& K, WaveletKernel k,
              const int32_t* sbuf, int32_t* dbuf, int32_t* ebuf, int32_t* obuf, size_t n) {
    if (k == WaveletKernel::Haar) {
        K.haar_inv(sbuf, dbuf + 1, ebuf, obuf, n);
        return;
    }
    dbuf[0] = dbuf[1];
    K.cdf53_unupdate(sbuf, dbuf, dbuf + 1, ebuf, n);
    ebuf[n] = ebuf[n - 1];
    K.cdf53_unpredict(dbuf + 1, ebuf, ebuf + 1, obuf, n);
}

} // namespace

SubbandSet lwt_forward(const std::vector<int32_t>& plane, int w, int h, WaveletKernel k) {
    if (w < 2 || h < 2) throw FormatError("LWT needs at least a 2x2 plane");
    const Kernels& K = kernels::active();

    SubbandSet out;
    out.src_w = w;
    out.src_h = h;
    out.kernel = k;
    out.padded = (w % 2) || (h % 2);
    int pw = w + (w % 2), ph = h + (h % 2);
    out.sub_w = pw / 2;
    out.sub_h = ph / 2;

    // Edge-replicated copy when a dimension is odd.
    const std::vector<int32_t>* src = &plane;
    std::vector<int32_t> padded;
    if (out.padded) {
        padded.resize((size_t)pw * ph);
        for (int y = 0; y < ph; ++y) {
            int sy = y < h ? y : h - 1;
            for (int x = 0; x < pw; ++x)
                padded[(size_t)y * pw + x] = plane[(size_t)sy * w + (x < w ? x : w - 1)];
        }
        src = &padded;
    }

    const int n = out.sub_w;
    // Row pass into horizontal low/high half planes.
    std::vector<int32_t> lo((size_t)n * ph), hi((size_t)n * ph);
    std::vector<int32_t> ebuf(n + 1), obuf(n), dbuf(n + 2);
    for (int y = 0; y < ph; ++y) {
        const int32_t* row = src->data() + (size_t)y * pw;
        for (int i = 0; i < n; ++i) {
            ebuf[i] = row[2 * i];
            obuf[i] = row[2 * i + 1];
        }
        lift_fwd(K, k, ebuf.data(), obuf.data(), lo.data() + (size_t)y * n, dbuf.data(), n);
        for (int i = 0; i < n; ++i) hi[(size_t)y * n + i] = dbuf[1 + i];
    }

    // Column pass: rows of the half planes are the even/odd elements.
    const int m = out.sub_h;
    out.ll.resize((size_t)n * m);
    out.hl.resize((size_t)n * m);
    out.lh.resize((size_t)n * m);
    out.hh.resize((size_t)n * m);

    auto column_pass = [&](const std::vector<int32_t>& half, std::vector<int32_t>& s_out,
                           std::vector<int32_t>& d_out) {
        if (k == WaveletKernel::Haar) {
            for (int j = 0; j < m; ++j)
                K.haar_fwd(half.data() + (size_t)(2 * j) * n,
                           half.data() + (size_t)(2 * j + 1) * n,
                           s_out.data() + (size_t)j * n, d_out.data() + (size_t)j * n, n);
            return;
        }
        for (int j = 0; j < m; ++j) {
            const int32_t* e0 = half.data() + (size_t)(2 * j) * n;
            const int32_t* e1 = 2 * j + 2 < ph ? half.data() + (size_t)(2 * j + 2) * n : e0;
            K.cdf53_predict(half.data() + (size_t)(2 * j + 1) * n, e0, e1,
                            d_out.data() + (size_t)j * n, n);
        }
        for (int j = 0; j < m; ++j) {
            const int32_t* d0 = d_out.data() + (size_t)(j > 0 ? j - 1 : 0) * n;
            K.cdf53_update(half.data() + (size_t)(2 * j) * n, d0,
                           d_out.data() + (size_t)j * n, s_out.data() + (size_t)j * n, n);
        }
    };
    column_pass(lo, out.ll, out.lh);
    column_pass(hi, out.hl, out.hh);
    return out;
}

std::vector<int32_t> lwt_inverse(const SubbandSet& bands) {
    const Kernels& K = kernels::active();
    const WaveletKernel k = bands.kernel;
    const int n = bands.sub_w, m = bands.sub_h;
    if (n <= 0 || m <= 0 || bands.ll.size() != (size_t)n * m)
        throw FormatError("malformed sub-band set");
    const int pw = 2 * n, ph = 2 * m;

    std::vector<int32_t> lo((size_t)n * ph), hi((size_t)n * ph);
    auto column_inverse = [&](const std::vector<int32_t>& s_in, const std::vector<int32_t>& d_in,
                              std::vector<int32_t>& half) {
        if (k == WaveletKernel::Haar) {
            for (int j = 0; j < m; ++j)
                K.haar_inv(s_in.data() + (size_t)j * n, d_in.data() + (size_t)j * n,
                           half.data() + (size_t)(2 * j) * n,
                           half.data() + (size_t)(2 * j + 1) * n, n);
            return;
        }
        for (int j = 0; j < m; ++j) {
            const int32_t* d0 = d_in.data() + (size_t)(j > 0 ? j - 1 : 0) * n;
            K.cdf53_unupdate(s_in.data() + (size_t)j * n, d0, d_in.data() + (size_t)j * n,
                             half.data() + (size_t)(2 * j) * n, n);
        }
        for (int j = 0; j < m; ++j) {
            const int32_t* e0 = half.data() + (size_t)(2 * j) * n;
            const int32_t* e1 = 2 * j + 2 < ph ? half.data() + (size_t)(2 * j + 2) * n : e0;
            K.cdf53_unpredict(d_in.data() + (size_t)j * n, e0, e1,
                              half.data() + (size_t)(2 * j + 1) * n, n);
        }
    };
    column_inverse(bands.ll, bands.lh, lo);
    column_inverse(bands.hl, bands.hh, hi);

    std::vector<int32_t> plane((size_t)pw * ph);
    std::vector<int32_t> ebuf(n + 1), obuf(n), dbuf(n + 2), sbuf(n);
    for (int y = 0; y < ph; ++y) {
        for (int i = 0; i < n; ++i) {
            sbuf[i] = lo[(size_t)y * n + i];
            dbuf[1 + i] = hi[(size_t)y * n + i];
        }
        lift_inv(K, k, sbuf.data(), dbuf.data(), ebuf.data(), obuf.data(), n);
        int32_t* row = plane.data() + (size_t)y * pw;
        for (int i = 0; i < n; ++i) {
            row[2 * i] = ebuf[i];
            row[2 * i + 1] = obuf[i];
        }
    }

    if (!bands.padded && bands.src_w == pw && bands.src_h == ph) return plane;
    // Crop back to the original dims.
    std::vector<int32_t> out((size_t)bands.src_w * bands.src_h);
    for (int y = 0; y < bands.src_h; ++y)
        for (int x = 0; x < bands.src_w; ++x)
            out[(size_t)y * bands.src_w + x] = plane[(size_t)y * pw + x];
    return out;
}

const char* band_name(Band b) {
    switch (b) {
        case Band::LL: return "LL";
        case Band::HL: return "HL";
        case Band::LH: return "LH";
        default: return "HH";
    }
}

const char* kernel_name(WaveletKernel k) {
    return k == WaveletKernel::Haar ? "haar" : "cdf22";
}

WaveletKernel kernel_from_name(const std::string& s) {
    if (s == "haar") return WaveletKernel::Haar;
    if (s == "cdf22") return WaveletKernel::Cdf22;
    throw ConfigError("unknown wavelet kernel: " + s);
}

} // namespace hdrwm

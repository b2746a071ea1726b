#pragma once

#include <cstdint>
#include <vector>

#include "hdrwm/errors.hpp"

namespace hdrwm {

enum class WaveletKernel { Haar, Cdf22 };

enum class Band { LL = 0, HL = 1, LH = 2, HH = 3 };

const char* band_name(Band b);
const char* kernel_name(WaveletKernel k);
WaveletKernel kernel_from_name(const std::string& s);

// One level of integer lifting sub-bands. HL is the horizontal-highpass /
// vertical-lowpass plane, LH the transpose. Reconstruction is exact.
struct SubbandSet {
    int sub_w = 0, sub_h = 0;   // plane dims (padded source / 2)
    int src_w = 0, src_h = 0;   // original plane dims
    bool padded = false;        // source had an odd dimension, edge-replicated
    WaveletKernel kernel = WaveletKernel::Haar;
    std::vector<int32_t> ll, hl, lh, hh;

    std::vector<int32_t>& band(Band b) {
        switch (b) {
            case Band::LL: return ll;
            case Band::HL: return hl;
            case Band::LH: return lh;
            default: return hh;
        }
    }
    const std::vector<int32_t>& band(Band b) const {
        return const_cast<SubbandSet*>(this)->band(b);
    }
};

// Row-then-column lifting with symmetric boundary extension.
//   haar:  d = odd - even,              s = even + floor(d/2)
//   cdf22: d = odd - floor((eL+eR)/2),  s = even + floor((dL+dR+2)/4)
SubbandSet lwt_forward(const std::vector<int32_t>& plane, int w, int h, WaveletKernel k);

// Exact inverse; output has the original src_w x src_h dims.
std::vector<int32_t> lwt_inverse(const SubbandSet& bands);

} // namespace hdrwm

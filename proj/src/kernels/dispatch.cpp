#include "hdrwm/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace hdrwm::kernels {

namespace {

const Kernels* select() {
    const char* env = std::getenv("HDRWM_SIMD");
    if (env && std::strcmp(env, "scalar") == 0) return &scalar();
    const Kernels* v = avx2();
    if (env && std::strcmp(env, "avx2") == 0 && !v)
        return &scalar(); // requested backend unavailable; fall back
    return v ? v : &scalar();
}

} // namespace

const Kernels& active() {
    static const Kernels* k = select();
    return *k;
}

const char* backend_name() { return active().name; }

} // namespace hdrwm::kernels

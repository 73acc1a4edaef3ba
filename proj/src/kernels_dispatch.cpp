#include "mfg/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace mfg::kernels {

#ifdef MFG_HAVE_AVX2_TU
const Ops* avx2_ops_impl();
#endif

const Ops* avx2_ops() {
#ifdef MFG_HAVE_AVX2_TU
#if defined(__x86_64__) || defined(__i386__)
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
        return avx2_ops_impl();
    }
#endif
#endif
    return nullptr;
}

namespace {

const Ops* select() {
    const char* forced = std::getenv("MFG_KERNELS");
    if (forced != nullptr && std::strcmp(forced, "scalar") == 0) return &scalar_ops();
    const Ops* simd = avx2_ops();
    if (forced != nullptr && std::strcmp(forced, "avx2") == 0 && simd == nullptr) {
        return &scalar_ops(); // requested variant unavailable
    }
    return simd != nullptr ? simd : &scalar_ops();
}

} // namespace

const Ops& ops() {
    static const Ops* selected = select();
    return *selected;
}

} // namespace mfg::kernels

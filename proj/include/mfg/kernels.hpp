#pragma once

#include <cstddef>

// Dense double-precision primitives behind the solver's inner loops.
//
// Two implementations exist: a scalar reference and an AVX2+FMA variant
// compiled in its own translation unit. mfg::kernels::ops() returns the
// best variant the CPU supports; MFG_KERNELS=scalar|avx2 in the environment
// forces one (unsupported forces fall back to scalar). Selection happens
// once per process, so a given run is bitwise reproducible.

namespace mfg::kernels {

struct Ops {
    const char* name;

    double (*dot)(const double* a, const double* b, std::size_t n);
    double (*sum)(const double* a, std::size_t n);
    double (*max)(const double* a, std::size_t n);
    // sum of squared differences
    double (*l2sq_diff)(const double* a, const double* b, std::size_t n);
    // max |a[i] - b[i]|
    double (*linf_diff)(const double* a, const double* b, std::size_t n);
    // y = a*x + b*y
    void (*axpby)(double a, const double* x, double b, double* y, std::size_t n);
    // y += c*x
    void (*add_scaled)(const double* x, double c, double* y, std::size_t n);
    void (*scale)(double* y, double c, std::size_t n);
    // y[i] = exp(x[i])
    void (*vexp)(const double* x, double* y, std::size_t n);
};

const Ops& scalar_ops();

// AVX2+FMA variant, or nullptr when the binary or CPU lacks support.
const Ops* avx2_ops();

// Runtime-selected variant (cached after the first call).
const Ops& ops();

} // namespace mfg::kernels

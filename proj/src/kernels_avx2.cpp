// AVX2+FMA kernel variants. This TU is compiled with -mavx2 -mfma; nothing
// here runs unless the dispatcher verified CPU support first.

#include "mfg/kernels.hpp"

#include <cmath>
#include <immintrin.h>

namespace mfg::kernels {
namespace {

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double r = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (; i < n; ++i) r += a[i] * b[i];
    return r;
}

double sum_avx2(const double* a, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double r = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (; i < n; ++i) r += a[i];
    return r;
}

double max_avx2(const double* a, std::size_t n) {
    double m = a[0];
    std::size_t i = 0;
    if (n >= 4) {
        __m256d vm = _mm256_loadu_pd(a);
        for (i = 4; i + 4 <= n; i += 4) vm = _mm256_max_pd(vm, _mm256_loadu_pd(a + i));
        alignas(32) double lanes[4];
        _mm256_store_pd(lanes, vm);
        m = lanes[0];
        for (int k = 1; k < 4; ++k)
            if (lanes[k] > m) m = lanes[k];
    }
    for (; i < n; ++i)
        if (a[i] > m) m = a[i];
    return m;
}

double l2sq_diff_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_fmadd_pd(d, d, acc);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double r = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        r += d * d;
    }
    return r;
}

double linf_diff_avx2(const double* a, const double* b, std::size_t n) {
    const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    __m256d vm = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        vm = _mm256_max_pd(vm, _mm256_and_pd(d, abs_mask));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, vm);
    double m = lanes[0];
    for (int k = 1; k < 4; ++k)
        if (lanes[k] > m) m = lanes[k];
    for (; i < n; ++i) {
        const double d = std::fabs(a[i] - b[i]);
        if (d > m) m = d;
    }
    return m;
}

void axpby_avx2(double a, const double* x, double b, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    const __m256d vb = _mm256_set1_pd(b);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d r =
            _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_mul_pd(vb, _mm256_loadu_pd(y + i)));
        _mm256_storeu_pd(y + i, r);
    }
    for (; i < n; ++i) y[i] = a * x[i] + b * y[i];
}

void add_scaled_avx2(const double* x, double c, double* y, std::size_t n) {
    const __m256d vc = _mm256_set1_pd(c);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d r = _mm256_fmadd_pd(vc, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        _mm256_storeu_pd(y + i, r);
    }
    for (; i < n; ++i) y[i] += c * x[i];
}

void scale_avx2(double* y, double c, std::size_t n) {
    const __m256d vc = _mm256_set1_pd(c);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(y + i, _mm256_mul_pd(vc, _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) y[i] *= c;
}

// exp for 4 doubles: n = round(x/ln2), degree-13 Taylor on the reduced
// argument, 2^n via exponent-bit arithmetic. |r| <= ln2/2 keeps the
// truncation term below one ulp. Inputs under -708 flush to zero (softmax
// never needs subnormal weights); inputs over the overflow threshold
// saturate to +inf like std::exp.
__m256d exp4(__m256d x) {
    const __m256d log2e = _mm256_set1_pd(1.44269504088896340736);
    const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
    const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);
    const __m256d underflow = _mm256_set1_pd(-708.0);
    const __m256d overflow = _mm256_set1_pd(709.782712893384);

    const __m256d zero_mask = _mm256_cmp_pd(x, underflow, _CMP_LT_OQ);
    const __m256d inf_mask = _mm256_cmp_pd(x, overflow, _CMP_GT_OQ);
    x = _mm256_max_pd(x, underflow);
    x = _mm256_min_pd(x, overflow);

    const __m128i ni = _mm256_cvtpd_epi32(_mm256_mul_pd(x, log2e)); // round to nearest
    const __m256d n = _mm256_cvtepi32_pd(ni);
    __m256d r = _mm256_fnmadd_pd(n, ln2_hi, x);
    r = _mm256_fnmadd_pd(n, ln2_lo, r);

    __m256d p = _mm256_set1_pd(1.0 / 6227020800.0); // 1/13!
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 479001600.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 39916800.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 3628800.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 362880.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 40320.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 5040.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 720.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 120.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 24.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 6.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(0.5));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));

    // 2^n with n in [-1023, 1024]: add the IEEE bias and shift into the
    // exponent field.
    const __m256i n64 = _mm256_cvtepi32_epi64(ni);
    const __m256i bias = _mm256_add_epi64(n64, _mm256_set1_epi64x(1023));
    const __m256d pow2 = _mm256_castsi256_pd(_mm256_slli_epi64(bias, 52));
    __m256d res = _mm256_mul_pd(p, pow2);

    res = _mm256_andnot_pd(zero_mask, res);
    const __m256d inf = _mm256_set1_pd(HUGE_VAL);
    res = _mm256_blendv_pd(res, inf, inf_mask);
    return res;
}

void vexp_avx2(const double* x, double* y, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(y + i, exp4(_mm256_loadu_pd(x + i)));
    if (i < n) {
        alignas(32) double tail_in[4] = {0.0, 0.0, 0.0, 0.0};
        alignas(32) double tail_out[4];
        for (std::size_t k = i; k < n; ++k) tail_in[k - i] = x[k];
        _mm256_store_pd(tail_out, exp4(_mm256_load_pd(tail_in)));
        for (std::size_t k = i; k < n; ++k) y[k] = tail_out[k - i];
    }
}

constexpr Ops kAvx2Ops = {
    "avx2",         dot_avx2,       sum_avx2,   max_avx2,
    l2sq_diff_avx2, linf_diff_avx2, axpby_avx2, add_scaled_avx2,
    scale_avx2,     vexp_avx2,
};

} // namespace

const Ops* avx2_ops_impl() { return &kAvx2Ops; }

} // namespace mfg::kernels

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "mfg/kernels.hpp"
#include "mfg/rng.hpp"

using mfg::Rng;
namespace kernels = mfg::kernels;

namespace {

std::vector<double> random_vec(Rng& rng, std::size_t n, double lo, double hi) {
    std::vector<double> v(n);
    for (auto& x : v) x = lo + (hi - lo) * rng.uniform();
    return v;
}

} // namespace

TEST_CASE("scalar kernels agree with naive formulas") {
    const auto& k = kernels::scalar_ops();
    const std::vector<double> a{1.0, -2.0, 3.0, 0.5};
    const std::vector<double> b{2.0, 0.5, -1.0, 4.0};
    CHECK(k.dot(a.data(), b.data(), 4) == doctest::Approx(2.0 - 1.0 - 3.0 + 2.0));
    CHECK(k.sum(a.data(), 4) == doctest::Approx(2.5));
    CHECK(k.max(a.data(), 4) == doctest::Approx(3.0));
    CHECK(k.l2sq_diff(a.data(), b.data(), 4) ==
          doctest::Approx(1.0 + 6.25 + 16.0 + 12.25));
    CHECK(k.linf_diff(a.data(), b.data(), 4) == doctest::Approx(4.0));

    std::vector<double> y = a;
    k.axpby(2.0, b.data(), 0.5, y.data(), 4);
    CHECK(y[0] == doctest::Approx(4.5));
    CHECK(y[3] == doctest::Approx(8.25));

    y = a;
    k.add_scaled(b.data(), -1.0, y.data(), 4);
    CHECK(y[2] == doctest::Approx(4.0));

    y = a;
    k.scale(y.data(), 3.0, 4);
    CHECK(y[1] == doctest::Approx(-6.0));
}

TEST_CASE("vexp matches std::exp across magnitudes") {
    const auto& k = kernels::ops();
    std::vector<double> xs{0.0,   1.0,    -1.0,   0.5,  -0.5,  10.0, -10.0,
                           100.0, -100.0, -700.0, 700.0, 1e-12, -1e-12};
    std::vector<double> out(xs.size());
    k.vexp(xs.data(), out.data(), xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double expect = std::exp(xs[i]);
        CHECK(out[i] == doctest::Approx(expect).epsilon(1e-13));
    }

    // extreme arguments: saturation semantics
    std::vector<double> extreme{-1e9, -800.0, 710.0, 1e9};
    std::vector<double> eo(extreme.size());
    k.vexp(extreme.data(), eo.data(), extreme.size());
    CHECK(eo[0] == 0.0);
    CHECK(eo[1] == 0.0);
    CHECK(std::isinf(eo[2]));
    CHECK(std::isinf(eo[3]));
}

TEST_CASE("avx2 kernels match scalar reference on random data") {
    const kernels::Ops* simd = kernels::avx2_ops();
    if (simd == nullptr) {
        MESSAGE("no AVX2 on this host; dispatch check only");
        CHECK(std::string(kernels::ops().name) == "scalar");
        return;
    }
    const auto& ref = kernels::scalar_ops();
    Rng rng(20240601);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform_index(130));
        const auto a = random_vec(rng, n, -50.0, 50.0);
        const auto b = random_vec(rng, n, -50.0, 50.0);

        CHECK(simd->dot(a.data(), b.data(), n) ==
              doctest::Approx(ref.dot(a.data(), b.data(), n)).epsilon(1e-12));
        CHECK(simd->sum(a.data(), n) == doctest::Approx(ref.sum(a.data(), n)).epsilon(1e-12));
        CHECK(simd->max(a.data(), n) == ref.max(a.data(), n));
        CHECK(simd->l2sq_diff(a.data(), b.data(), n) ==
              doctest::Approx(ref.l2sq_diff(a.data(), b.data(), n)).epsilon(1e-12));
        CHECK(simd->linf_diff(a.data(), b.data(), n) == ref.linf_diff(a.data(), b.data(), n));

        std::vector<double> y1 = a, y2 = a;
        const double ca = -3.0 + 6.0 * rng.uniform();
        const double cb = -3.0 + 6.0 * rng.uniform();
        simd->axpby(ca, b.data(), cb, y1.data(), n);
        ref.axpby(ca, b.data(), cb, y2.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-13));

        y1 = a;
        y2 = a;
        simd->add_scaled(b.data(), ca, y1.data(), n);
        ref.add_scaled(b.data(), ca, y2.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-13));

        const auto logits = random_vec(rng, n, -40.0, 3.0);
        std::vector<double> e1(n), e2(n);
        simd->vexp(logits.data(), e1.data(), n);
        ref.vexp(logits.data(), e2.data(), n);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(e1[i] == doctest::Approx(e2[i]).epsilon(1e-13));
        }
    }
}

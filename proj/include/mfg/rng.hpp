#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace mfg {

// Seeded generator with a frozen uniform mapping. std::mt19937_64 output is
// specified bit-for-bit by the standard; the distributions are not, so we
// never use std::uniform_*_distribution. Every sampling routine in the
// solver draws through this wrapper, which is what makes runs reproducible
// across compilers and standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform on [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n).
    int uniform_index(int n) {
        const int i = static_cast<int>(uniform() * static_cast<double>(n));
        return i < n ? i : n - 1;
    }

    // Uniform point on the probability simplex (normalized exponentials).
    std::vector<double> simplex(int n) {
        std::vector<double> v(static_cast<std::size_t>(n));
        double total = 0.0;
        for (auto& x : v) {
            x = -std::log(1.0 - uniform());
            total += x;
        }
        for (auto& x : v) x /= total;
        return v;
    }

    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

// Inverse-CDF draw over an array of weights that sum to ~1, scanning in
// index order. Used for both next-state and action sampling so that one
// uniform variate consumes per draw.
inline int inverse_cdf_index(std::span<const double> probs, double u) {
    double cum = 0.0;
    int last_positive = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] <= 0.0) continue;
        cum += probs[i];
        last_positive = static_cast<int>(i);
        if (u < cum) return static_cast<int>(i);
    }
    return last_positive; // float drift left cum slightly below 1
}

} // namespace mfg

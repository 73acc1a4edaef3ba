#pragma once

// Shared helpers for the test suites: a tiny deterministic generator for
// random tables/MDPs and the independent linear-algebra oracles the solver
// tests check against. Everything here is test-only and deliberately avoids
// the library's solver code paths.

#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include "mfg/rng.hpp"
#include "mfg/tabular_env.hpp"
#include "mfg/types.hpp"

namespace mfg::test {

inline double uniform_in(Rng& rng, double lo, double hi) {
    return lo + (hi - lo) * rng.uniform();
}

inline QTable random_qtable(Rng& rng, int S, int A, double lo = -1.0, double hi = 1.0) {
    QTable q(S, A);
    for (int s = 0; s < S; ++s) {
        for (int a = 0; a < A; ++a) q(s, a) = uniform_in(rng, lo, hi);
    }
    return q;
}

inline std::vector<double> random_simplex(Rng& rng, int n) { return rng.simplex(n); }

// Random dense stochastic kernel with strictly positive entries (keeps the
// chain aperiodic and irreducible).
inline std::vector<std::vector<std::vector<double>>> random_kernel(Rng& rng, int S, int A,
                                                                   double min_entry = 0.02) {
    std::vector<std::vector<std::vector<double>>> kernel(
        static_cast<std::size_t>(S),
        std::vector<std::vector<double>>(static_cast<std::size_t>(A)));
    for (int s = 0; s < S; ++s) {
        for (int a = 0; a < A; ++a) {
            std::vector<double> row(static_cast<std::size_t>(S));
            double total = 0.0;
            for (auto& p : row) {
                p = min_entry + rng.uniform();
                total += p;
            }
            for (auto& p : row) p /= total;
            kernel[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)] = std::move(row);
        }
    }
    return kernel;
}

inline std::vector<std::vector<double>> random_rewards(Rng& rng, int S, int A, double scale = 1.0) {
    std::vector<std::vector<double>> r(static_cast<std::size_t>(S),
                                       std::vector<double>(static_cast<std::size_t>(A)));
    for (auto& row : r) {
        for (auto& x : row) x = uniform_in(rng, -scale, scale);
    }
    return r;
}

inline std::unique_ptr<TabularEnv> random_env(Rng& rng, int S, int A, double gamma,
                                              double reward_scale = 1.0) {
    return make_tabular_env("random", random_kernel(rng, S, A),
                            random_rewards(rng, S, A, reward_scale), gamma);
}

// --- independent oracles -------------------------------------------------

// Plain Gaussian elimination with partial pivoting; n stays tiny here.
inline std::vector<double> solve_linear(std::vector<std::vector<double>> a,
                                        std::vector<double> b) {
    const int n = static_cast<int>(b.size());
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r) {
            if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
        }
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        if (std::fabs(a[col][col]) < 1e-14) throw std::runtime_error("oracle: singular system");
        for (int r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int r = n - 1; r >= 0; --r) {
        double acc = b[static_cast<std::size_t>(r)];
        for (int c = r + 1; c < n; ++c) acc -= a[r][c] * x[static_cast<std::size_t>(c)];
        x[static_cast<std::size_t>(r)] = acc / a[r][r];
    }
    return x;
}

// Value of a fixed deterministic policy: solve (I - gamma P_pi) v = r_pi.
inline std::vector<double> policy_value_oracle(
    const std::vector<std::vector<std::vector<double>>>& kernel,
    const std::vector<std::vector<double>>& reward, const std::vector<int>& policy,
    double gamma) {
    const int S = static_cast<int>(kernel.size());
    std::vector<std::vector<double>> a(static_cast<std::size_t>(S),
                                       std::vector<double>(static_cast<std::size_t>(S), 0.0));
    std::vector<double> b(static_cast<std::size_t>(S));
    for (int s = 0; s < S; ++s) {
        const int act = policy[static_cast<std::size_t>(s)];
        for (int s2 = 0; s2 < S; ++s2) {
            a[s][s2] = (s == s2 ? 1.0 : 0.0) -
                       gamma * kernel[static_cast<std::size_t>(s)][static_cast<std::size_t>(act)]
                                     [static_cast<std::size_t>(s2)];
        }
        b[static_cast<std::size_t>(s)] = reward[static_cast<std::size_t>(s)]
                                               [static_cast<std::size_t>(act)];
    }
    return solve_linear(std::move(a), std::move(b));
}

// Optimal Q by exhaustive deterministic-policy enumeration: V* is the
// pointwise max of policy values, then one backup produces Q*.
inline QTable brute_force_optimal_q(const std::vector<std::vector<std::vector<double>>>& kernel,
                                    const std::vector<std::vector<double>>& reward,
                                    double gamma) {
    const int S = static_cast<int>(kernel.size());
    const int A = static_cast<int>(kernel[0].size());
    std::vector<double> v_star(static_cast<std::size_t>(S),
                               -std::numeric_limits<double>::infinity());
    std::vector<int> policy(static_cast<std::size_t>(S), 0);
    std::int64_t total = 1;
    for (int s = 0; s < S; ++s) total *= A;
    for (std::int64_t index = 0; index < total; ++index) {
        std::int64_t rest = index;
        for (int s = 0; s < S; ++s) {
            policy[static_cast<std::size_t>(s)] = static_cast<int>(rest % A);
            rest /= A;
        }
        const auto v = policy_value_oracle(kernel, reward, policy, gamma);
        for (int s = 0; s < S; ++s) {
            v_star[static_cast<std::size_t>(s)] =
                std::max(v_star[static_cast<std::size_t>(s)], v[static_cast<std::size_t>(s)]);
        }
    }
    QTable q(S, A);
    for (int s = 0; s < S; ++s) {
        for (int a = 0; a < A; ++a) {
            double exp_v = 0.0;
            for (int s2 = 0; s2 < S; ++s2) {
                exp_v += kernel[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)]
                               [static_cast<std::size_t>(s2)] *
                         v_star[static_cast<std::size_t>(s2)];
            }
            q(s, a) = reward[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)] +
                      gamma * exp_v;
        }
    }
    return q;
}

// Stationary distribution by direct linear solve: mu^T P = mu^T with the
// normalization sum(mu) = 1 replacing the last equation.
inline std::vector<double> stationary_oracle(const std::vector<std::vector<double>>& p) {
    const int S = static_cast<int>(p.size());
    std::vector<std::vector<double>> a(static_cast<std::size_t>(S),
                                       std::vector<double>(static_cast<std::size_t>(S)));
    std::vector<double> b(static_cast<std::size_t>(S), 0.0);
    for (int col = 0; col < S; ++col) {
        for (int row = 0; row < S; ++row) {
            // (P^T - I) mu = 0
            a[col][row] =
                p[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] -
                (row == col ? 1.0 : 0.0);
        }
    }
    for (int col = 0; col < S; ++col) a[static_cast<std::size_t>(S - 1)][col] = 1.0;
    b[static_cast<std::size_t>(S - 1)] = 1.0;
    return solve_linear(std::move(a), std::move(b));
}

} // namespace mfg::test

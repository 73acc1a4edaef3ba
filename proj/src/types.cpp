#include "mfg/types.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include "mfg/errors.hpp"
#include "mfg/kernels.hpp"

namespace mfg {

namespace {
std::atomic<std::uint64_t> g_renormalizations{0};
}

ActionSpace ActionSpace::full(int n_states, int n_actions) {
    ActionSpace as;
    as.n_states_ = n_states;
    as.n_actions_ = n_actions;
    as.full_ = true;
    as.offsets_.resize(static_cast<std::size_t>(n_states) + 1);
    as.actions_.resize(static_cast<std::size_t>(n_states) * static_cast<std::size_t>(n_actions));
    as.mask_.assign(static_cast<std::size_t>(n_states) * static_cast<std::size_t>(n_actions), 1);
    for (int s = 0; s < n_states; ++s) {
        as.offsets_[static_cast<std::size_t>(s)] = s * n_actions;
        for (int a = 0; a < n_actions; ++a)
            as.actions_[static_cast<std::size_t>(s * n_actions + a)] = a;
    }
    as.offsets_[static_cast<std::size_t>(n_states)] = n_states * n_actions;
    return as;
}

ActionSpace ActionSpace::from_lists(int n_states, int n_actions,
                                    const std::vector<std::vector<int>>& valid) {
    if (static_cast<int>(valid.size()) != n_states) {
        throw ConfigError("valid-action lists: expected " + std::to_string(n_states) +
                          " states, got " + std::to_string(valid.size()));
    }
    ActionSpace as;
    as.n_states_ = n_states;
    as.n_actions_ = n_actions;
    as.offsets_.resize(static_cast<std::size_t>(n_states) + 1, 0);
    as.mask_.assign(static_cast<std::size_t>(n_states) * static_cast<std::size_t>(n_actions), 0);
    bool all_full = true;
    for (int s = 0; s < n_states; ++s) {
        const auto& list = valid[static_cast<std::size_t>(s)];
        if (list.empty()) {
            throw ConfigError("state " + std::to_string(s) + " has an empty valid-action set");
        }
        std::vector<int> sorted = list;
        std::sort(sorted.begin(), sorted.end());
        as.offsets_[static_cast<std::size_t>(s)] = static_cast<int>(as.actions_.size());
        int prev = -1;
        for (int a : sorted) {
            if (a < 0 || a >= n_actions) {
                throw ConfigError("state " + std::to_string(s) + ": action index " +
                                  std::to_string(a) + " out of range");
            }
            if (a == prev) continue;
            prev = a;
            as.actions_.push_back(a);
            as.mask_[static_cast<std::size_t>(s) * static_cast<std::size_t>(n_actions) +
                     static_cast<std::size_t>(a)] = 1;
        }
        if (static_cast<int>(as.actions_.size()) - as.offsets_[static_cast<std::size_t>(s)] !=
            n_actions) {
            all_full = false;
        }
    }
    as.offsets_[static_cast<std::size_t>(n_states)] = static_cast<int>(as.actions_.size());
    as.full_ = all_full;
    return as;
}

Population Population::uniform(int n) {
    return Population(std::vector<double>(static_cast<std::size_t>(n), 1.0 / n));
}

Population Population::point(int n, int s) {
    std::vector<double> v(static_cast<std::size_t>(n), 0.0);
    v[static_cast<std::size_t>(s)] = 1.0;
    return Population(std::move(v));
}

bool Population::renormalize_if_drifted() {
    const double total = kernels::ops().sum(mass_.data(), mass_.size());
    if (std::fabs(total - 1.0) <= 1e-12) return false;
    kernels::ops().scale(mass_.data(), 1.0 / total, mass_.size());
    g_renormalizations.fetch_add(1, std::memory_order_relaxed);
    return true;
}

std::uint64_t Population::renormalization_count() {
    return g_renormalizations.load(std::memory_order_relaxed);
}

void Population::validate(const std::string& context) const {
    double total = 0.0;
    for (std::size_t i = 0; i < mass_.size(); ++i) {
        const double x = mass_[i];
        if (!std::isfinite(x) || x < 0.0) {
            throw ConfigError(context + ": population entry " + std::to_string(i) +
                              " is negative or non-finite");
        }
        total += x;
    }
    if (std::fabs(total - 1.0) > 1e-9) {
        throw ConfigError(context + ": population mass sums to " + std::to_string(total));
    }
}

void Policy::validate(const ActionSpace& actions, const std::string& context) const {
    for (int s = 0; s < probs.rows(); ++s) {
        double total = 0.0;
        for (int a = 0; a < probs.cols(); ++a) {
            const double p = probs(s, a);
            if (!std::isfinite(p) || p < 0.0) {
                throw ConfigError(context + ": policy(" + std::to_string(s) + "," +
                                  std::to_string(a) + ") is negative or non-finite");
            }
            if (p > 0.0 && !actions.is_valid(s, a)) {
                throw ConfigError(context + ": policy puts mass on invalid action " +
                                  std::to_string(a) + " in state " + std::to_string(s));
            }
            total += p;
        }
        if (std::fabs(total - 1.0) > 1e-9) {
            throw ConfigError(context + ": policy row " + std::to_string(s) + " sums to " +
                              std::to_string(total));
        }
    }
}

double l2_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw ConfigError("l2_distance: shape mismatch (" + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()) + ")");
    }
    return std::sqrt(kernels::ops().l2sq_diff(a.data(), b.data(), a.size()));
}

double l2_distance(const Matrix& a, const Matrix& b) {
    if (!a.same_shape(b)) throw ConfigError("l2_distance: matrix shape mismatch");
    return l2_distance(std::span<const double>{a.data(), a.size()},
                       std::span<const double>{b.data(), b.size()});
}

double l2_distance(const Population& a, const Population& b) {
    return l2_distance(a.span(), b.span());
}

} // namespace mfg

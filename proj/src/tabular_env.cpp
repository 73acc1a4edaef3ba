#include "mfg/tabular_env.hpp"

#include <cmath>

#include "mfg/errors.hpp"

namespace mfg {

TabularEnv::TabularEnv(std::string name, std::vector<std::vector<std::vector<double>>> kernel,
                       RewardFn reward, double discount, double reward_bound, ActionSpace actions)
    : Environment(std::move(name), static_cast<int>(kernel.size()),
                  static_cast<int>(kernel.empty() ? 0 : kernel[0].size()),
                  ActionSpace{}, discount, reward_bound),
      reward_(std::move(reward)) {
    const int S = n_states_;
    const int A = n_actions_;
    if (S == 0 || A == 0) throw ConfigError("tabular env: empty kernel");
    actions_ = actions.n_states() == S ? std::move(actions) : ActionSpace::full(S, A);
    support_.resize(static_cast<std::size_t>(S) * static_cast<std::size_t>(A));
    for (int s = 0; s < S; ++s) {
        if (static_cast<int>(kernel[static_cast<std::size_t>(s)].size()) != A) {
            throw ConfigError("tabular env: ragged kernel at state " + std::to_string(s));
        }
        for (int a = 0; a < A; ++a) {
            const auto& row = kernel[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)];
            if (static_cast<int>(row.size()) != S) {
                throw ConfigError("tabular env: kernel row (" + std::to_string(s) + "," +
                                  std::to_string(a) + ") has wrong length");
            }
            if (!actions_.is_valid(s, a)) continue;
            double total = 0.0;
            auto& sup = support_[static_cast<std::size_t>(s * A + a)];
            for (int s2 = 0; s2 < S; ++s2) {
                const double p = row[static_cast<std::size_t>(s2)];
                if (p < 0.0 || !std::isfinite(p)) {
                    throw ConfigError("tabular env: negative kernel entry at (" +
                                      std::to_string(s) + "," + std::to_string(a) + ")");
                }
                if (p > 0.0) {
                    sup.states.push_back(s2);
                    sup.probs.push_back(p);
                }
                total += p;
            }
            if (std::fabs(total - 1.0) > 1e-9) {
                throw ConfigError("tabular env: kernel row (" + std::to_string(s) + "," +
                                  std::to_string(a) + ") sums to " + std::to_string(total));
            }
        }
    }
}

double TabularEnv::reward(int s, int a, const Population& m) const { return reward_(s, a, m); }

int TabularEnv::kernel_support(int s, int a, const Population&, int* states,
                               double* probs) const {
    const auto& sup = support_[static_cast<std::size_t>(s * n_actions_ + a)];
    for (std::size_t i = 0; i < sup.states.size(); ++i) {
        states[i] = sup.states[i];
        probs[i] = sup.probs[i];
    }
    return static_cast<int>(sup.states.size());
}

std::unique_ptr<TabularEnv> make_tabular_env(std::string name,
                                             std::vector<std::vector<std::vector<double>>> kernel,
                                             std::vector<std::vector<double>> reward,
                                             double discount) {
    double bound = 0.0;
    for (const auto& row : reward)
        for (double r : row) bound = std::max(bound, std::fabs(r));
    auto fn = [table = std::move(reward)](int s, int a, const Population&) {
        return table[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)];
    };
    return std::make_unique<TabularEnv>(std::move(name), std::move(kernel), std::move(fn),
                                        discount, bound);
}

} // namespace mfg

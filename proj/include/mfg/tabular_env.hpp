#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "mfg/env.hpp"

namespace mfg {

// Explicit-table MDP for unit tests and small synthetic games: a dense
// kernel P(s' | s, a) plus a reward callback (so population coupling can be
// injected where a test needs it).
class TabularEnv final : public Environment {
public:
    using RewardFn = std::function<double(int s, int a, const Population& m)>;

    // kernel is indexed [s][a][s']; rows must be simplex vectors.
    TabularEnv(std::string name, std::vector<std::vector<std::vector<double>>> kernel,
               RewardFn reward, double discount, double reward_bound,
               ActionSpace actions = ActionSpace{});

    double reward(int s, int a, const Population& m) const override;
    int kernel_support(int s, int a, const Population& m_ref, int* states,
                       double* probs) const override;

private:
    struct Support {
        std::vector<int> states;
        std::vector<double> probs;
    };
    std::vector<Support> support_; // indexed s * A + a
    RewardFn reward_;
};

// Reward independent of the population: r[s][a].
std::unique_ptr<TabularEnv> make_tabular_env(std::string name,
                                             std::vector<std::vector<std::vector<double>>> kernel,
                                             std::vector<std::vector<double>> reward,
                                             double discount);

} // namespace mfg

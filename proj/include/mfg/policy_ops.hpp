#pragma once

#include "mfg/types.hpp"

namespace mfg {

// Inverse temperature as a function of the outer-iteration index. The linear
// schedule multiplies by the 1-based iteration number, so value=50 yields
// 50, 100, ..., 50K over a K-iteration run; terminal(K) is the value a
// fixed-operator reference solve should use.
struct TemperatureSchedule {
    enum class Kind { fixed, linear };
    Kind kind = Kind::fixed;
    double value = 1.0;

    double at(int outer_iter) const {
        if (kind == Kind::fixed) return value;
        const int k1 = outer_iter + 1; // 1-based
        return value * static_cast<double>(k1 < 1 ? 1 : k1);
    }
    double terminal(int outer_iters) const {
        return kind == Kind::fixed ? value : value * static_cast<double>(outer_iters);
    }
};

// Maps Q-tables to policies: greedy argmax or masked softmax.
struct PolicyOperator {
    enum class Kind { greedy, softmax };
    Kind kind = Kind::greedy;
    TemperatureSchedule temperature{};

    Policy apply(const QTable& q, const ActionSpace& actions, int outer_iter) const;

    // Same operator with the temperature frozen at its value for the last of
    // `outer_iters` iterations.
    PolicyOperator frozen_at_terminal(int outer_iters) const {
        PolicyOperator op = *this;
        op.temperature = {TemperatureSchedule::Kind::fixed, temperature.terminal(outer_iters)};
        return op;
    }
};

// One-hot on the valid action maximizing q(s, .); ties break toward the
// lowest action index.
Policy policy_greedy(const QTable& q, const ActionSpace& actions);

// probs(s,a) = exp(L q(s,a)) / sum over valid a', computed with
// max-subtraction. Invalid actions get exactly zero.
Policy policy_softmax(const QTable& q, double inverse_temperature, const ActionSpace& actions);

// Single rows of the above, written into out (length n_actions). These are
// the inner-loop forms; the table versions call them per state.
void policy_greedy_row(const QTable& q, const ActionSpace& actions, int s, double* out);
void policy_softmax_row(const QTable& q, double inverse_temperature, const ActionSpace& actions,
                        int s, double* out);

// Behavior-policy exploration floor: (1-eps) * pi + eps * uniform over the
// valid set. eps = 0 returns pi unchanged.
Policy mix_exploration_floor(Policy pi, const ActionSpace& actions, double eps);

} // namespace mfg

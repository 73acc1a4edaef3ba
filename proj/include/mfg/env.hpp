#pragma once

#include <span>
#include <string>

#include "mfg/types.hpp"

namespace mfg {

// Finite MDP with a population-dependent reward. The kernel signature also
// receives a reference population so population-coupled dynamics fit the
// interface; the environments shipped here ignore it.
class Environment {
public:
    Environment(std::string name, int n_states, int n_actions, ActionSpace actions,
                double discount, double reward_bound)
        : name_(std::move(name)), n_states_(n_states), n_actions_(n_actions),
          actions_(std::move(actions)), discount_(discount), reward_bound_(reward_bound) {}
    virtual ~Environment() = default;

    const std::string& name() const { return name_; }
    int n_states() const { return n_states_; }
    int n_actions() const { return n_actions_; }
    const ActionSpace& actions() const { return actions_; }
    double discount() const { return discount_; }
    // sup |r| over valid (s,a) and all simplex populations
    double reward_bound() const { return reward_bound_; }

    virtual double reward(int s, int a, const Population& m) const = 0;

    // Writes the nonzero transition probabilities for (s, a) as parallel
    // (state, prob) arrays in increasing state order and returns the count.
    // Buffers must hold n_states entries. Probabilities sum to 1.
    virtual int kernel_support(int s, int a, const Population& m_ref, int* states,
                               double* probs) const = 0;

    // Dense row of the kernel; zero-filled outside the support.
    void kernel(int s, int a, const Population& m_ref, std::span<double> out) const;

protected:
    std::string name_;
    int n_states_;
    int n_actions_;
    ActionSpace actions_;
    double discount_;
    double reward_bound_;
};

} // namespace mfg

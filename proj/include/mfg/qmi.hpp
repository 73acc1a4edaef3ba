#pragma once

#include <cstdint>

#include "mfg/env.hpp"
#include "mfg/policy_ops.hpp"
#include "mfg/trace.hpp"

namespace mfg {

// Online single-agent learner: one continuing trajectory drives simultaneous
// stochastic updates of the Q-table (TD control) and of the population
// estimate (running average of observed next states). The off-policy variant
// keeps the behavior policy fixed within an outer iteration and takes its TD
// target from the policy operator applied to the current table (Q-learning);
// the on-policy variant refreshes the behavior policy from a weighted mix of
// the iteration's tables and uses the action actually taken (SARSA).

enum class QmiVariant { off_policy, on_policy };

struct AlphaSchedule {
    enum class Kind { harmonic, constant };
    Kind kind = Kind::harmonic;
    double h = 1.0;   // harmonic: alpha_t = h / (t + t0)
    double t0 = 10.0;
    double c = 0.001; // constant

    double at(std::int64_t t) const {
        return kind == Kind::harmonic ? h / (static_cast<double>(t) + t0) : c;
    }
    // Throws ConfigError when parameters are non-positive or alpha_0 > 1.
    void validate() const;
};

// beta_t = 1/(t+1); with this schedule the population estimate telescopes to
// the empirical next-state histogram.
inline double beta_at(std::int64_t t) { return 1.0 / static_cast<double>(t + 1); }

struct QmiConfig {
    QmiVariant variant = QmiVariant::off_policy;
    int outer_iters = 1; // K
    int inner_iters = 1; // T
    AlphaSchedule alpha{};
    double mixing_offset = 1.0; // a in the mixing weights w_l = l + a
    PolicyOperator policy_op{};
    // Uniform-over-valid-actions mass blended into every behavior policy.
    // Keeps greedy behavior exploring; softmax already has full support.
    double exploration_floor = 0.05;
    std::uint64_t seed = 0;
    // false: schedule index t resets each outer iteration (the per-k loop);
    // true: t keeps counting across the whole run.
    bool global_clock = false;
    // On-policy behavior refresh cadence in steps; 1 recomputes every step.
    int refresh_every = 1;
    // Test hooks: perform every draw and computation but skip the table
    // write, so the untouched sequence can be compared bitwise.
    bool skip_q_write = false;
    bool skip_m_write = false;

    void validate(const Environment& env) const;
};

// TD update at the observed transition; only entry (s, a) changes:
//   q(s,a) <- q(s,a) - alpha * (q(s,a) - r - gamma * q(s2, a2))
void qmi_q_update(QTable& q, int s, int a, double r, int s2, int a2, double alpha, double gamma);

// m <- (1 - beta) m + beta * indicator(s_next); convexity keeps the simplex.
void qmi_m_update(Population& m, int s_next, double beta);

// Incremental convex combination with running weight mass:
//   mixed <- (weight_sum * mixed + new_weight * new_q) / (weight_sum + new_weight)
// weight_sum is updated in place. A zero weight_sum makes mixed a copy of new_q.
void mix_q(QTable& mixed, double& weight_sum, const QTable& new_q, double new_weight);

struct QmiResult {
    QTable q;
    Population m;
    LearningTrace trace;
};

QmiResult run_qmi(const Environment& env, const QTable& q0, const Population& m0,
                  const QmiConfig& cfg, const MetricsFn& metrics = nullptr);

} // namespace mfg

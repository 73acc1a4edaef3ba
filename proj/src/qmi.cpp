#include "mfg/qmi.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "mfg/errors.hpp"
#include "mfg/kernels.hpp"
#include "mfg/rng.hpp"
#include "mfg/sampling.hpp"

namespace mfg {

void AlphaSchedule::validate() const {
    if (kind == Kind::harmonic) {
        if (!(h > 0.0) || !(t0 > 0.0)) {
            throw ConfigError("alpha schedule: harmonic constants must be positive");
        }
        if (h / t0 > 1.0) throw ConfigError("alpha schedule: alpha_0 = h/t0 exceeds 1");
    } else {
        if (!(c > 0.0) || c > 1.0) {
            throw ConfigError("alpha schedule: constant step must lie in (0, 1]");
        }
    }
}

void QmiConfig::validate(const Environment& env) const {
    if (outer_iters < 1 || inner_iters < 1) {
        throw ConfigError("qmi: outer_iters and inner_iters must be >= 1");
    }
    alpha.validate();
    if (exploration_floor < 0.0 || exploration_floor >= 1.0) {
        throw ConfigError("qmi: exploration_floor must lie in [0, 1)");
    }
    if (mixing_offset < 0.0) throw ConfigError("qmi: mixing_offset must be >= 0");
    if (refresh_every < 1) throw ConfigError("qmi: refresh_every must be >= 1");
    if (policy_op.kind == PolicyOperator::Kind::softmax) {
        for (int k = 0; k < outer_iters; ++k) {
            if (!(policy_op.temperature.at(k) > 0.0)) {
                throw ConfigError("qmi: inverse temperature must stay positive");
            }
        }
    }
    (void)env;
}

void qmi_q_update(QTable& q, int s, int a, double r, int s2, int a2, double alpha, double gamma) {
    const double td_error = q(s, a) - r - gamma * q(s2, a2);
    q(s, a) -= alpha * td_error;
}

void qmi_m_update(Population& m, int s_next, double beta) {
    kernels::ops().scale(m.data(), 1.0 - beta, static_cast<std::size_t>(m.size()));
    m[s_next] += beta;
    m.renormalize_if_drifted();
}

void mix_q(QTable& mixed, double& weight_sum, const QTable& new_q, double new_weight) {
    if (!(new_weight > 0.0)) throw ConfigError("mix_q: new weight must be positive");
    if (weight_sum < 0.0) throw ConfigError("mix_q: weight sum must be >= 0");
    if (weight_sum == 0.0) {
        mixed = new_q;
        weight_sum = new_weight;
        return;
    }
    const double total = weight_sum + new_weight;
    kernels::ops().axpby(new_weight / total, new_q.data(), weight_sum / total, mixed.data(),
                         mixed.size());
    weight_sum = total;
}

namespace {

// Greedy TD target: argmax over valid actions, lowest index on ties.
int greedy_target(const QTable& q, const ActionSpace& actions, int s) {
    const auto valid = actions.valid(s);
    int best = valid[0];
    double best_q = q(s, best);
    for (int a : valid) {
        if (q(s, a) > best_q) {
            best_q = q(s, a);
            best = a;
        }
    }
    return best;
}

// Softmax TD target is sampled, consuming one variate.
int softmax_target(const QTable& q, const ActionSpace& actions, int s, double inv_temp,
                   Rng& rng) {
    double row[4096];
    policy_softmax_row(q, inv_temp, actions, s, row);
    return inverse_cdf_index({row, static_cast<std::size_t>(q.cols())}, rng.uniform());
}

double now_ms(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

} // namespace

QmiResult run_qmi(const Environment& env, const QTable& q0, const Population& m0,
                  const QmiConfig& cfg, const MetricsFn& metrics) {
    cfg.validate(env);
    m0.validate("qmi initial population");
    if (q0.rows() != env.n_states() || q0.cols() != env.n_actions()) {
        throw ConfigError("qmi: initial Q-table shape mismatch");
    }
    if (m0.size() != env.n_states()) throw ConfigError("qmi: initial population size mismatch");

    const auto wall0 = std::chrono::steady_clock::now();
    const ActionSpace& actions = env.actions();
    const double gamma = env.discount();
    const bool on_policy = cfg.variant == QmiVariant::on_policy;
    const bool greedy_op = cfg.policy_op.kind == PolicyOperator::Kind::greedy;

    QmiResult res{q0, m0, {}};
    res.trace.env = env.name();
    res.trace.algorithm = on_policy ? "qmi_on" : "qmi_off";
    res.trace.seed = cfg.seed;

    Rng rng(cfg.seed);
    int state = rng.uniform_index(env.n_states());

    QTable mixed;
    double weight_sum = 0.0;
    std::int64_t global_t = 0;

    for (int k = 0; k < cfg.outer_iters; ++k) {
        // Rewards and the kernel reference stay frozen at this iteration's
        // starting population.
        const Population m_frozen = res.m;
        const double inv_temp =
            greedy_op ? 0.0 : cfg.policy_op.temperature.at(k);

        Policy behavior = mix_exploration_floor(cfg.policy_op.apply(res.q, actions, k), actions,
                                                cfg.exploration_floor);
        if (on_policy) {
            mixed = res.q; // mix restarts from Q_{k,0} with weight w_0 = offset
            weight_sum = cfg.mixing_offset;
        }
        int action = sample_action(behavior, state, rng);

        for (int t = 0; t < cfg.inner_iters; ++t) {
            const std::int64_t clock = cfg.global_clock ? global_t : t;
            const int next_state = sample_transition(env, state, action, m_frozen, rng);
            const double r = env.reward(state, action, m_frozen);

            const double beta = beta_at(clock);
            if (!cfg.skip_m_write) qmi_m_update(res.m, next_state, beta);

            const double alpha = cfg.alpha.at(clock);
            int next_action;
            if (!on_policy) {
                const int target = greedy_op
                                       ? greedy_target(res.q, actions, next_state)
                                       : softmax_target(res.q, actions, next_state, inv_temp, rng);
                if (!cfg.skip_q_write) {
                    qmi_q_update(res.q, state, action, r, next_state, target, alpha, gamma);
                }
                next_action = sample_action(behavior, next_state, rng);
            } else {
                // SARSA: refresh the behavior policy from the mixed table,
                // draw the next action from it, and use that action as the
                // TD target.
                if (t % cfg.refresh_every == 0) {
                    behavior = mix_exploration_floor(cfg.policy_op.apply(mixed, actions, k),
                                                     actions, cfg.exploration_floor);
                }
                next_action = sample_action(behavior, next_state, rng);
                if (!cfg.skip_q_write) {
                    qmi_q_update(res.q, state, action, r, next_state, next_action, alpha, gamma);
                }
                mix_q(mixed, weight_sum, res.q,
                      static_cast<double>(t + 1) + cfg.mixing_offset);
            }

            state = next_state;
            action = next_action;
            ++global_t;
        }

        TraceRow row;
        row.k = k;
        row.samples = static_cast<std::int64_t>(k + 1) * cfg.inner_iters;
        if (metrics) {
            const auto [mse_v, expl_v] = metrics(k, res.q, res.m);
            row.mse = mse_v;
            row.exploitability = expl_v;
        } else {
            row.mse = std::numeric_limits<double>::quiet_NaN();
            row.exploitability = std::numeric_limits<double>::quiet_NaN();
        }
        row.wall_ms = now_ms(wall0);
        res.trace.rows.push_back(row);
    }
    return res;
}

} // namespace mfg

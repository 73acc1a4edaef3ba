#include "mfg/operators.hpp"

#include <vector>

#include "mfg/kernels.hpp"

namespace mfg {

void Environment::kernel(int s, int a, const Population& m_ref, std::span<double> out) const {
    for (auto& x : out) x = 0.0;
    std::vector<int> states(static_cast<std::size_t>(n_states_));
    std::vector<double> probs(static_cast<std::size_t>(n_states_));
    const int count = kernel_support(s, a, m_ref, states.data(), probs.data());
    for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(states[i])] = probs[i];
}

void policy_state_values(const Policy& pi, const QTable& q, std::span<double> out) {
    const auto& k = kernels::ops();
    const std::size_t A = static_cast<std::size_t>(q.cols());
    for (int s = 0; s < q.rows(); ++s) {
        out[static_cast<std::size_t>(s)] = k.dot(pi.probs.row(s), q.row(s), A);
    }
}

QTable bellman_apply(const QTable& q, const Population& m, const PolicyOperator& op,
                     int outer_iter, const Environment& env) {
    const int S = env.n_states();
    const Policy pi = op.apply(q, env.actions(), outer_iter);

    std::vector<double> v(static_cast<std::size_t>(S));
    policy_state_values(pi, q, v);

    QTable out(S, env.n_actions());
    std::vector<int> sup_states(static_cast<std::size_t>(S));
    std::vector<double> sup_probs(static_cast<std::size_t>(S));
    const double gamma = env.discount();
    for (int s = 0; s < S; ++s) {
        for (int a : env.actions().valid(s)) {
            const int count = env.kernel_support(s, a, m, sup_states.data(), sup_probs.data());
            double expected = 0.0;
            for (int i = 0; i < count; ++i) {
                expected += sup_probs[i] * v[static_cast<std::size_t>(sup_states[i])];
            }
            out(s, a) = env.reward(s, a, m) + gamma * expected;
        }
    }
    return out;
}

Population transition_apply(const Policy& pi, const Population& m_state, const Environment& env,
                            const Population& m_ref) {
    const int S = env.n_states();
    std::vector<double> out(static_cast<std::size_t>(S), 0.0);
    std::vector<int> sup_states(static_cast<std::size_t>(S));
    std::vector<double> sup_probs(static_cast<std::size_t>(S));
    for (int s = 0; s < S; ++s) {
        const double mass = m_state[s];
        if (mass == 0.0) continue;
        for (int a : env.actions().valid(s)) {
            const double w = mass * pi.probs(s, a);
            if (w == 0.0) continue;
            const int count = env.kernel_support(s, a, m_ref, sup_states.data(), sup_probs.data());
            for (int i = 0; i < count; ++i) {
                out[static_cast<std::size_t>(sup_states[i])] += w * sup_probs[i];
            }
        }
    }
    Population result(std::move(out));
    result.renormalize_if_drifted();
    return result;
}

Matrix induced_kernel_transposed(const Policy& pi, const Environment& env,
                                 const Population& m_ref) {
    const int S = env.n_states();
    Matrix pt(S, S);
    std::vector<int> sup_states(static_cast<std::size_t>(S));
    std::vector<double> sup_probs(static_cast<std::size_t>(S));
    for (int s = 0; s < S; ++s) {
        for (int a : env.actions().valid(s)) {
            const double w = pi.probs(s, a);
            if (w == 0.0) continue;
            const int count = env.kernel_support(s, a, m_ref, sup_states.data(), sup_probs.data());
            for (int i = 0; i < count; ++i) pt(sup_states[i], s) += w * sup_probs[i];
        }
    }
    return pt;
}

std::pair<double, double> mfne_residual(const QTable& q, const Population& m,
                                        const PolicyOperator& op, int outer_iter,
                                        const Environment& env) {
    const QTable tq = bellman_apply(q, m, op, outer_iter, env);
    const double q_res = l2_distance(tq, q);
    const Policy pi = op.apply(q, env.actions(), outer_iter);
    const Population pm = transition_apply(pi, m, env, m);
    const double m_res = l2_distance(pm, m);
    return {q_res, m_res};
}

} // namespace mfg

#include "mfg/policy_ops.hpp"

#include <cmath>

#include "mfg/errors.hpp"
#include "mfg/kernels.hpp"

namespace mfg {

namespace {

constexpr int kMaxActions = 4096;

void check_row_finite(const QTable& q, int s) {
    for (int a = 0; a < q.cols(); ++a) {
        if (!std::isfinite(q(s, a))) {
            throw ConfigError("policy operator: non-finite Q entry at state " + std::to_string(s) +
                              ", action " + std::to_string(a));
        }
    }
}

} // namespace

void policy_greedy_row(const QTable& q, const ActionSpace& actions, int s, double* out) {
    const auto valid = actions.valid(s);
    if (valid.empty()) {
        throw ConfigError("policy_greedy: state " + std::to_string(s) +
                          " has no valid actions");
    }
    check_row_finite(q, s);
    int best = valid[0];
    double best_q = q(s, best);
    for (int a : valid) {
        if (q(s, a) > best_q) { // strict: ties keep the lowest index
            best_q = q(s, a);
            best = a;
        }
    }
    for (int a = 0; a < q.cols(); ++a) out[a] = 0.0;
    out[best] = 1.0;
}

void policy_softmax_row(const QTable& q, double inverse_temperature, const ActionSpace& actions,
                        int s, double* out) {
    if (!(inverse_temperature > 0.0)) {
        throw ConfigError("policy_softmax: inverse temperature must be positive");
    }
    check_row_finite(q, s);
    const auto& k = kernels::ops();
    const int A = q.cols();
    const double* row = q.row(s);

    if (actions.is_full()) {
        const double m = k.max(row, static_cast<std::size_t>(A));
        double shifted[kMaxActions];
        for (int a = 0; a < A; ++a) shifted[a] = inverse_temperature * (row[a] - m);
        k.vexp(shifted, out, static_cast<std::size_t>(A));
        const double total = k.sum(out, static_cast<std::size_t>(A));
        k.scale(out, 1.0 / total, static_cast<std::size_t>(A));
        return;
    }

    const auto valid = actions.valid(s);
    if (valid.empty()) {
        throw ConfigError("policy_softmax: state " + std::to_string(s) +
                          " has no valid actions");
    }
    double m = q(s, valid[0]);
    for (int a : valid) m = std::max(m, q(s, a));
    double packed[kMaxActions];
    const std::size_t nv = valid.size();
    for (std::size_t i = 0; i < nv; ++i) {
        packed[i] = inverse_temperature * (q(s, valid[i]) - m);
    }
    double weights[kMaxActions];
    k.vexp(packed, weights, nv);
    const double total = k.sum(weights, nv);
    for (int a = 0; a < A; ++a) out[a] = 0.0;
    for (std::size_t i = 0; i < nv; ++i) out[valid[i]] = weights[i] / total;
}

Policy policy_greedy(const QTable& q, const ActionSpace& actions) {
    Policy pi{Matrix(q.rows(), q.cols())};
    for (int s = 0; s < q.rows(); ++s) policy_greedy_row(q, actions, s, pi.probs.row(s));
    return pi;
}

Policy policy_softmax(const QTable& q, double inverse_temperature, const ActionSpace& actions) {
    Policy pi{Matrix(q.rows(), q.cols())};
    for (int s = 0; s < q.rows(); ++s) {
        policy_softmax_row(q, inverse_temperature, actions, s, pi.probs.row(s));
    }
    return pi;
}

Policy PolicyOperator::apply(const QTable& q, const ActionSpace& actions, int outer_iter) const {
    if (kind == Kind::greedy) return policy_greedy(q, actions);
    return policy_softmax(q, temperature.at(outer_iter), actions);
}

Policy mix_exploration_floor(Policy pi, const ActionSpace& actions, double eps) {
    if (eps == 0.0) return pi;
    if (eps < 0.0 || eps >= 1.0) {
        throw ConfigError("exploration floor must lie in [0, 1)");
    }
    for (int s = 0; s < pi.probs.rows(); ++s) {
        const auto valid = actions.valid(s);
        const double u = eps / static_cast<double>(valid.size());
        double* row = pi.probs.row(s);
        for (int a = 0; a < pi.probs.cols(); ++a) row[a] *= 1.0 - eps;
        for (int a : valid) row[a] += u;
    }
    return pi;
}

} // namespace mfg

#include "mfg/metrics.hpp"

#include "mfg/errors.hpp"
#include "mfg/kernels.hpp"
#include "mfg/operators.hpp"

namespace mfg {

double mse(const Population& m, const Population& mu_star) {
    if (m.size() != mu_star.size()) {
        throw ConfigError("mse: population length mismatch (" + std::to_string(m.size()) +
                          " vs " + std::to_string(mu_star.size()) + ")");
    }
    return kernels::ops().l2sq_diff(m.data(), mu_star.data(),
                                    static_cast<std::size_t>(m.size()));
}

double exploitability(const QTable& q, const Environment& env, const PolicyOperator& op,
                      int outer_iter, double br_tol, double ip_tol, int br_max_sweeps,
                      int ip_max_iters) {
    const Policy pi = op.apply(q, env.actions(), outer_iter);
    const Population mu_q =
        induced_population(pi, env, Population::uniform(env.n_states()), ip_tol, ip_max_iters);
    const QTable q_br = best_response(mu_q, env, op, outer_iter, br_max_sweeps, br_tol);
    return l2_distance(q_br, q);
}

void record(LearningTrace& trace, int k, std::int64_t samples, const QTable& q,
            const Population& m, const Environment& env, const Population& mu_star,
            const PolicyOperator& op, double br_tol, double ip_tol, double wall_ms) {
    TraceRow row;
    row.k = k;
    row.samples = samples;
    row.mse = mse(m, mu_star);
    row.exploitability = exploitability(q, env, op, k, br_tol, ip_tol);
    row.wall_ms = wall_ms;
    trace.rows.push_back(row);
}

} // namespace mfg

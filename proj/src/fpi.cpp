#include "mfg/fpi.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <vector>

#include "mfg/errors.hpp"
#include "mfg/kernels.hpp"
#include "mfg/operators.hpp"

namespace mfg {

namespace {

double l1_diff(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += std::fabs(a[i] - b[i]);
    return acc;
}

double now_ms(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

} // namespace

QTable best_response(const Population& m, const Environment& env, const PolicyOperator& op,
                     int outer_iter, int max_sweeps, double tol, const QTable* q0) {
    QTable q = q0 != nullptr ? *q0 : QTable(env.n_states(), env.n_actions());
    double resid = std::numeric_limits<double>::infinity();
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        QTable next = bellman_apply(q, m, op, outer_iter, env);
        resid = kernels::ops().linf_diff(next.data(), q.data(), q.size());
        q = std::move(next);
        if (tol > 0.0 && resid <= tol) return q;
    }
    if (tol > 0.0) {
        throw SolverError("best_response: no convergence to " + std::to_string(tol) + " within " +
                              std::to_string(max_sweeps) + " sweeps (last step " +
                              std::to_string(resid) + ")",
                          resid);
    }
    return q;
}

Population induced_population(const Policy& pi, const Environment& env, const Population& m_ref,
                              double tol, int max_iters, const std::optional<Population>& start) {
    const int S = env.n_states();
    const Matrix pt = induced_kernel_transposed(pi, env, m_ref);
    Population mu = start.has_value() ? *start : Population::uniform(S);
    Population prev = mu;
    Population prev2 = mu;
    const auto& k = kernels::ops();
    double step = std::numeric_limits<double>::infinity();
    for (int it = 0; it < max_iters; ++it) {
        prev2 = std::move(prev);
        prev = mu;
        Population next = Population(std::vector<double>(static_cast<std::size_t>(S)));
        for (int s2 = 0; s2 < S; ++s2) {
            next[s2] = k.dot(pt.row(s2), prev.data(), static_cast<std::size_t>(S));
        }
        next.renormalize_if_drifted();
        mu = std::move(next);
        step = l1_diff(mu.data(), prev.data(), static_cast<std::size_t>(S));
        if (step <= tol) return mu;
    }
    std::string msg = "induced_population: no convergence to " + std::to_string(tol) +
                      " within " + std::to_string(max_iters) + " iterations (last step " +
                      std::to_string(step) + ")";
    const double period2 = l1_diff(mu.data(), prev2.data(), static_cast<std::size_t>(S));
    if (period2 <= 1e-6 && step > 1e-3) {
        msg += "; iterates oscillate with period 2 (chain looks periodic)";
    }
    throw SolverError(msg, step);
}

FpiResult fpi_solve(const Environment& env, const Population& m0, const FpiConfig& cfg,
                    const MetricsFn& metrics) {
    if (cfg.outer_iters < 1 || cfg.sweeps_per_iter < 1) {
        throw ConfigError("fpi: outer_iters and sweeps_per_iter must be >= 1");
    }
    if (cfg.ip_tolerance <= 0.0) throw ConfigError("fpi: ip_tolerance must be positive");
    m0.validate("fpi initial population");

    const auto t0 = std::chrono::steady_clock::now();
    const int S = env.n_states();
    FpiResult res{QTable(S, env.n_actions()), m0, {}};
    res.trace.env = env.name();
    res.trace.algorithm = "fpi";

    for (int k = 0; k < cfg.outer_iters; ++k) {
        const QTable* warm = cfg.br_start == FpiConfig::BrStart::warm ? &res.q : nullptr;
        res.q = best_response(res.m, env, cfg.policy_op, k, cfg.sweeps_per_iter,
                              cfg.br_tolerance, warm);
        const Policy pi = cfg.policy_op.apply(res.q, env.actions(), k);
        if (cfg.ip_update == FpiConfig::IpUpdate::sweeps) {
            // Population reference frozen at this iteration's starting value,
            // mirroring how the online algorithm freezes rewards.
            const Population m_ref = res.m;
            const Matrix pt = induced_kernel_transposed(pi, env, m_ref);
            const auto& kn = kernels::ops();
            for (int sweep = 0; sweep < cfg.sweeps_per_iter; ++sweep) {
                Population next(std::vector<double>(static_cast<std::size_t>(S)));
                for (int s2 = 0; s2 < S; ++s2) {
                    next[s2] = kn.dot(pt.row(s2), res.m.data(), static_cast<std::size_t>(S));
                }
                next.renormalize_if_drifted();
                res.m = std::move(next);
            }
        } else {
            res.m = induced_population(pi, env, res.m, cfg.ip_tolerance, cfg.ip_max_iters);
        }

        TraceRow row;
        row.k = k;
        row.samples = static_cast<std::int64_t>(k + 1) * cfg.sweeps_per_iter * S;
        if (metrics) {
            const auto [mse_v, expl_v] = metrics(k, res.q, res.m);
            row.mse = mse_v;
            row.exploitability = expl_v;
        } else {
            row.mse = std::numeric_limits<double>::quiet_NaN();
            row.exploitability = std::numeric_limits<double>::quiet_NaN();
        }
        row.wall_ms = now_ms(t0);
        res.trace.rows.push_back(row);
    }
    return res;
}

std::pair<QTable, Population> ground_truth_mfne(const Environment& env, const PolicyOperator& op,
                                                double tol, int max_outer, double damping,
                                                const Population* warm_start_m,
                                                const QTable* warm_start_q) {
    if (tol <= 0.0) throw ConfigError("ground_truth_mfne: tolerance must be positive");
    if (!(damping > 0.0) || damping > 1.0) {
        throw ConfigError("ground_truth_mfne: damping must lie in (0, 1]");
    }
    const double br_tol = std::max(tol * 1e-2, 1e-13);
    const double ip_tol = std::max(tol * 1e-2, 1e-13);
    constexpr int kMaxSweeps = 500000;
    const int S = env.n_states();

    Population m = warm_start_m != nullptr ? *warm_start_m : Population::uniform(S);
    QTable q = warm_start_q != nullptr ? *warm_start_q : QTable(S, env.n_actions());
    std::vector<double> history;
    history.reserve(static_cast<std::size_t>(max_outer));
    for (int k = 0; k < max_outer; ++k) {
        q = best_response(m, env, op, 0, kMaxSweeps, br_tol, &q);
        const Policy pi = op.apply(q, env.actions(), 0);
        const Population target = induced_population(pi, env, m, ip_tol, 20'000'000, m);
        const double d = l2_distance(target, m); // fixed-point residual at m
        history.push_back(d);
        if (d <= tol) return {q, m};
        if (damping == 1.0) {
            m = target;
            if (history.size() >= 51 && d > history[history.size() - 51]) {
                throw SolverError(
                    "ground_truth_mfne: successive-iterate distance increased over a "
                    "50-iteration window; the game does not look contractive and stabilization "
                    "is out of scope",
                    d);
            }
        } else {
            Population next = m;
            kernels::ops().axpby(damping, target.data(), 1.0 - damping, next.data(),
                                 static_cast<std::size_t>(S));
            next.renormalize_if_drifted();
            m = std::move(next);
        }
    }
    throw SolverError("ground_truth_mfne: no convergence to " + std::to_string(tol) +
                          " within " + std::to_string(max_outer) + " outer iterations",
                      history.empty() ? 0.0 : history.back());
}

} // namespace mfg

#pragma once

#include <optional>
#include <utility>

#include "mfg/env.hpp"
#include "mfg/policy_ops.hpp"
#include "mfg/trace.hpp"

namespace mfg {

// Model-based fixed-point iteration over (best response, induced population).
//
// Per outer iteration: a best-response table from sweeps_per_iter Bellman
// sweeps, then the population update. br_start picks whether the value
// sweeps restart from zero (default) or continue from the carried table.
// ip_update picks between running the stationary solve to ip_tolerance from
// uniform (default) and applying sweeps_per_iter synchronous transition
// steps to the carried population; the benchmark configs use the latter so
// both halves are truncated at the same sweep budget.
struct FpiConfig {
    int outer_iters = 50;    // K
    int sweeps_per_iter = 20; // T_FPI
    // 0 means "exactly sweeps_per_iter sweeps"; positive stops early at the
    // sup-norm tolerance and throws SolverError if it is never reached.
    double br_tolerance = 0.0;
    double ip_tolerance = 1e-10; // only used by IpUpdate::fixed_point
    int ip_max_iters = 2'000'000;
    PolicyOperator policy_op{};

    enum class BrStart { zero, warm };
    enum class IpUpdate { fixed_point, sweeps };
    BrStart br_start = BrStart::zero;
    IpUpdate ip_update = IpUpdate::fixed_point;
};

// Bellman sweeps from q0 (zero when absent) until the sup-norm change is at
// most tol, capped at max_sweeps. tol = 0 runs exactly max_sweeps sweeps.
// With tol > 0, failing to converge throws SolverError carrying the last
// residual. Under the greedy operator this is value iteration on Q-tables.
QTable best_response(const Population& m, const Environment& env, const PolicyOperator& op,
                     int outer_iter, int max_sweeps, double tol,
                     const QTable* q0 = nullptr);

// Power iteration m <- transition_apply(pi, m, env, m_ref) from uniform (or
// `start`) until the L1 step falls to tol. Throws SolverError on
// non-convergence, with a period-2 oscillation diagnostic when the iterates
// flip-flop (periodic chains).
Population induced_population(const Policy& pi, const Environment& env, const Population& m_ref,
                              double tol, int max_iters,
                              const std::optional<Population>& start = std::nullopt);

struct FpiResult {
    QTable q;
    Population m;
    LearningTrace trace;
};

// K outer iterations from m0. The metrics hook (when set) fills the trace's
// mse/exploitability columns.
FpiResult fpi_solve(const Environment& env, const Population& m0, const FpiConfig& cfg,
                    const MetricsFn& metrics = nullptr);

// High-precision MFNE reference: fixed-point iteration with converged
// sub-solvers until the fixed-point residual ||Gamma(m) - m||_2 falls to tol
// (for damping = 1 that equals the successive-iterate distance). Pass a
// fixed-temperature operator (frozen_at_terminal for annealed runs).
//
// damping relaxes the update to m <- (1-theta) m + theta Gamma(m). The
// plain iteration (theta = 1) detects non-contraction -- the L2 step not
// shrinking over a 50-iteration window -- and throws SolverError advising
// that stabilization is out of scope. Games whose fixed point is repelling
// for the plain iteration (the ring road beyond inverse temperature ~1.7e3)
// need theta < 1 plus a warm start near the equilibrium; the output is
// certified by its residual either way.
std::pair<QTable, Population> ground_truth_mfne(const Environment& env, const PolicyOperator& op,
                                                double tol = 1e-10, int max_outer = 5000,
                                                double damping = 1.0,
                                                const Population* warm_start_m = nullptr,
                                                const QTable* warm_start_q = nullptr);

} // namespace mfg

#pragma once

#include "mfg/fpi.hpp"
#include "mfg/trace.hpp"

namespace mfg {

// Squared Euclidean distance to the reference population.
double mse(const Population& m, const Population& mu_star);

// Gap between q and the best response to the population q itself induces:
// solve mu_q = induced_population(policy(q)), then q_br = best_response(mu_q)
// to br_tol, and return the L2 norm of q_br - q over the flattened tables.
// Zero (up to solver tolerance) exactly at equilibrium. Deterministic: both
// sub-solves are cold-started.
double exploitability(const QTable& q, const Environment& env, const PolicyOperator& op,
                      int outer_iter, double br_tol, double ip_tol,
                      int br_max_sweeps = 500000, int ip_max_iters = 2'000'000);

// Appends one row with both metrics computed against mu_star.
void record(LearningTrace& trace, int k, std::int64_t samples, const QTable& q,
            const Population& m, const Environment& env, const Population& mu_star,
            const PolicyOperator& op, double br_tol = 1e-8, double ip_tol = 1e-10,
            double wall_ms = 0.0);

} // namespace mfg

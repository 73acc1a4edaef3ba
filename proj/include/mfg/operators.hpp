#pragma once

#include <utility>

#include "mfg/env.hpp"
#include "mfg/policy_ops.hpp"
#include "mfg/types.hpp"

namespace mfg {

// One exact application of the Bellman operator under the policy the
// operator induces from q:
//   (T q)(s,a) = r(s,a,m) + gamma * sum_s' P(s'|s,a) * sum_a' pi(a'|s') q(s',a')
// Entries at invalid (s,a) are set to zero; solver tables keep that
// convention throughout.
QTable bellman_apply(const QTable& q, const Population& m, const PolicyOperator& op,
                     int outer_iter, const Environment& env);

// One step of the population under a fixed policy:
//   out(s') = sum_s m(s) * sum_a pi(a|s) P(s'|s,a,m_ref)
Population transition_apply(const Policy& pi, const Population& m_state, const Environment& env,
                            const Population& m_ref);

// (||T q - q||_2, ||P(q) m - m||_2): both vanish exactly at a mean field
// Nash equilibrium under the given policy operator.
std::pair<double, double> mfne_residual(const QTable& q, const Population& m,
                                        const PolicyOperator& op, int outer_iter,
                                        const Environment& env);

// Expected next-state value per state under pi: v(s) = sum_a pi(a|s) q(s,a).
void policy_state_values(const Policy& pi, const QTable& q, std::span<double> out);

// Dense induced chain, transposed for fast left-multiplication:
// out(s2, s1) = P_pi(s1 -> s2). Power iteration reuses this across steps.
Matrix induced_kernel_transposed(const Policy& pi, const Environment& env,
                                 const Population& m_ref);

} // namespace mfg

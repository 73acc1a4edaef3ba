#pragma once

#include "mfg/env.hpp"
#include "mfg/rng.hpp"
#include "mfg/types.hpp"

namespace mfg {

// Draws the next state from kernel(s, a, m_ref) by inverse CDF over state
// indices, consuming exactly one uniform variate. Invalid actions throw.
int sample_transition(const Environment& env, int s, int a, const Population& m_ref, Rng& rng);

// Draws an action from the policy's row for s, inverse CDF over action
// indices, one uniform variate.
int sample_action(const Policy& pi, int s, Rng& rng);

} // namespace mfg

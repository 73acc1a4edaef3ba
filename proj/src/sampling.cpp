#include "mfg/sampling.hpp"

#include <vector>

#include "mfg/errors.hpp"

namespace mfg {

int sample_transition(const Environment& env, int s, int a, const Population& m_ref, Rng& rng) {
    if (!env.actions().is_valid(s, a)) {
        throw ConfigError("sample_transition: action " + std::to_string(a) +
                          " invalid in state " + std::to_string(s));
    }
    const int S = env.n_states();
    std::vector<int> states(static_cast<std::size_t>(S));
    std::vector<double> probs(static_cast<std::size_t>(S));
    const int count = env.kernel_support(s, a, m_ref, states.data(), probs.data());
    const double u = rng.uniform();
    // Support is ordered by state index, so scanning it is the same inverse
    // CDF as scanning the dense kernel row.
    double cum = 0.0;
    for (int i = 0; i < count; ++i) {
        cum += probs[i];
        if (u < cum) return states[i];
    }
    return states[count - 1];
}

int sample_action(const Policy& pi, int s, Rng& rng) {
    return inverse_cdf_index(pi.probs.row_span(s), rng.uniform());
}

} // namespace mfg

#include "mfg/sioux_falls.hpp"

#include <algorithm>

#include "mfg/errors.hpp"

namespace mfg {

namespace {

ActionSpace build_actions(const NetworkTopology& topo) {
    return ActionSpace::from_lists(topo.n_edges(), topo.n_edges(), topo.outgoing);
}

} // namespace

SiouxFallsEnv::SiouxFallsEnv(NetworkTopology topology, const SiouxFallsParams& params)
    : Environment("sioux_falls", topology.n_edges(), topology.n_edges(), build_actions(topology),
                  params.gamma, std::max(params.c1, params.c2)),
      topology_(std::move(topology)), params_(params) {
    if (!(params.gamma > 0.0 && params.gamma < 1.0)) {
        throw ConfigError("sioux falls: discount must lie in (0, 1)");
    }
    if (params.c1 < 0.0 || params.c2 < 0.0) {
        throw ConfigError("sioux falls: cost constants must be nonnegative");
    }
}

double SiouxFallsEnv::reward(int s, int, const Population& m) const {
    if (s == restart_state()) return params_.c2;
    return -params_.c1 * m[s] * m[s];
}

int SiouxFallsEnv::kernel_support(int s, int a, const Population&, int* states,
                                  double* probs) const {
    if (!actions_.is_valid(s, a)) {
        throw ConfigError("sioux falls: action " + std::to_string(a) +
                          " is not an outgoing edge of state " + std::to_string(s));
    }
    states[0] = a;
    probs[0] = 1.0;
    return 1;
}

std::unique_ptr<SiouxFallsEnv> make_sioux_falls(NetworkTopology topology,
                                                const SiouxFallsParams& params) {
    return std::make_unique<SiouxFallsEnv>(std::move(topology), params);
}

} // namespace mfg

#pragma once

#include <memory>

#include "mfg/env.hpp"
#include "mfg/topology.hpp"

namespace mfg {

// Network routing game. Each state is a directed edge; choosing a valid
// action (an outgoing edge of the current head node) moves there
// deterministically. Congestion on an ordinary edge costs c1 * mu(s)^2; the
// restart edge pays the terminal reward c2 instead.
struct SiouxFallsParams {
    double c1 = 1e5;
    double c2 = 10.0;
    double gamma = 0.8;
};

class SiouxFallsEnv final : public Environment {
public:
    SiouxFallsEnv(NetworkTopology topology, const SiouxFallsParams& params);

    double reward(int s, int a, const Population& m) const override;
    int kernel_support(int s, int a, const Population& m_ref, int* states,
                       double* probs) const override;

    const NetworkTopology& topology() const { return topology_; }
    int restart_state() const { return topology_.restart_edge - 1; }
    const SiouxFallsParams& params() const { return params_; }

private:
    NetworkTopology topology_;
    SiouxFallsParams params_;
};

std::unique_ptr<SiouxFallsEnv> make_sioux_falls(NetworkTopology topology,
                                                const SiouxFallsParams& params = {});

} // namespace mfg

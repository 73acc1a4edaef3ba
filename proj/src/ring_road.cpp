#include "mfg/ring_road.hpp"

#include <cmath>
#include <numbers>

#include "mfg/errors.hpp"

namespace mfg {

namespace {

// sup |r| over valid (s,a) and arbitrary simplex populations. The congestion
// term 0.5*(1 - mu(s)/mu_jam) reaches 0.5*(1 - 1/mu_jam) when all mass sits
// in one cell, which dominates the bound for mu_jam < 1.
double ring_reward_bound(const RingRoadParams& p) {
    const double b_max = 2.0 * p.stimulus_scale;
    const double congestion_lo = 0.5 * (1.0 - 1.0 / p.mu_jam());
    const double congestion_hi = 0.5;
    const double speed_max = 1.0; // a/a_max
    double worst = 0.0;
    for (double b : {0.0, b_max}) {
        for (double c : {congestion_lo, congestion_hi}) {
            for (double v : {0.0, speed_max}) {
                worst = std::max(worst, std::fabs(b + c - v));
            }
        }
    }
    return 0.5 * worst * worst * p.delta_s();
}

} // namespace

RingRoadEnv::RingRoadEnv(const RingRoadParams& params)
    : Environment("ring_road", params.n_cells, params.n_cells,
                  ActionSpace::full(params.n_cells, params.n_cells), params.gamma,
                  ring_reward_bound(params)),
      params_(params) {
    if (params.n_cells < 2) throw ConfigError("ring road: need at least 2 cells");
    if (!(params.gamma > 0.0 && params.gamma < 1.0)) {
        throw ConfigError("ring road: discount must lie in (0, 1)");
    }
    if (params.delta_t > params.delta_s() / params.a_max + 1e-15) {
        throw ConfigError("ring road: CFL violation, delta_t > delta_s / a_max");
    }
    if (!(params.mu_jam() > 0.0)) throw ConfigError("ring road: jam density must be positive");

    stimulus_.resize(static_cast<std::size_t>(params.n_cells));
    for (int s = 0; s < params.n_cells; ++s) {
        const double pos = s * params.delta_s();
        stimulus_[static_cast<std::size_t>(s)] =
            params.stimulus_scale * (std::sin(4.0 * std::numbers::pi * pos) + 1.0);
    }
    advance_prob_.resize(static_cast<std::size_t>(params.n_cells));
    for (int a = 0; a < params.n_cells; ++a) {
        advance_prob_[static_cast<std::size_t>(a)] = speed_of_action(a) / params.a_max;
    }
}

double RingRoadEnv::reward(int s, int a, const Population& m) const {
    const double inner = stimulus_[static_cast<std::size_t>(s)] +
                         0.5 * (1.0 - m[s] / params_.mu_jam()) -
                         speed_of_action(a) / params_.a_max;
    return -0.5 * inner * inner * params_.delta_s();
}

int RingRoadEnv::kernel_support(int s, int a, const Population&, int* states,
                                double* probs) const {
    const double p = advance_prob_[static_cast<std::size_t>(a)];
    if (p == 0.0) {
        states[0] = s;
        probs[0] = 1.0;
        return 1;
    }
    const int next = (s + 1) % n_states_;
    if (next < s) { // wrap: keep increasing state order
        states[0] = next;
        probs[0] = p;
        states[1] = s;
        probs[1] = 1.0 - p;
    } else {
        states[0] = s;
        probs[0] = 1.0 - p;
        states[1] = next;
        probs[1] = p;
    }
    return 2;
}

std::unique_ptr<RingRoadEnv> make_ring_road(const RingRoadParams& params) {
    return std::make_unique<RingRoadEnv>(params);
}

} // namespace mfg

#pragma once

#include <memory>

#include "mfg/env.hpp"

namespace mfg {

// Speed control on a discretized unit circle. Cells and speeds share one
// grid: action index i means speed i * delta_a, and one decision interval
// moves the vehicle a fraction a/a_max of a cell. The kernel rounds that
// displacement stochastically: advance one cell with probability a/a_max,
// stay put otherwise, which preserves the expected displacement.
struct RingRoadParams {
    int n_cells = 50;         // S = A
    double delta_t = 0.02;    // decision interval; must satisfy delta_t <= delta_s / a_max
    double a_max = 1.0;
    double gamma = 0.98;
    double stimulus_scale = 0.2; // b(s) = scale * (sin(4 pi s) + 1)
    double mu_jam_cells = 3.0;   // mu_jam = this / n_cells

    double delta_s() const { return 1.0 / n_cells; }
    double delta_a() const { return 1.0 / n_cells; }
    double mu_jam() const { return mu_jam_cells / n_cells; }
};

class RingRoadEnv final : public Environment {
public:
    // Throws ConfigError when the CFL condition delta_t <= delta_s / a_max
    // fails or parameters are degenerate.
    explicit RingRoadEnv(const RingRoadParams& params);

    double reward(int s, int a, const Population& m) const override;
    int kernel_support(int s, int a, const Population& m_ref, int* states,
                       double* probs) const override;

    const RingRoadParams& params() const { return params_; }
    double stimulus(int s) const { return stimulus_[static_cast<std::size_t>(s)]; }
    double speed_of_action(int a) const { return a * params_.delta_a(); }

private:
    RingRoadParams params_;
    std::vector<double> stimulus_;     // b at each cell
    std::vector<double> advance_prob_; // per action: a / a_max
};

std::unique_ptr<RingRoadEnv> make_ring_road(const RingRoadParams& params = {});

} // namespace mfg

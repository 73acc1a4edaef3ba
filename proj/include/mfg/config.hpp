#pragma once

#include <memory>
#include <optional>
#include <string>

#include "mfg/env.hpp"
#include "mfg/fpi.hpp"
#include "mfg/qmi.hpp"
#include "mfg/ring_road.hpp"
#include "mfg/sioux_falls.hpp"
#include "mfg/toml.hpp"

namespace mfg {

enum class Algorithm { fpi, qmi_off, qmi_on };

struct EnvSpec {
    enum class Kind { ring_road, sioux_falls };
    Kind kind = Kind::ring_road;
    RingRoadParams ring{};
    SiouxFallsParams sioux{};
    std::string topology_path; // resolved against the config file's directory
    int origin = 1;
    int destination = 20;
};

struct GroundTruthSpec {
    enum class Mode { compute, load };
    Mode mode = Mode::compute;
    double tol = 1e-10;
    int max_outer = 5000;
    // Relaxation factor for the reference solve; 1 is the plain iteration.
    // Games whose equilibrium repels the plain iteration (ring road at the
    // terminal temperature) need a value below the instability threshold.
    double damping = 1.0;
    std::string path; // required for load; optional cache location for compute
};

// Everything one experiment needs: environment, algorithm, schedules, seed
// fan-out, ground truth, and metric tolerances.
struct ExperimentConfig {
    std::string name = "experiment";
    Algorithm algorithm = Algorithm::fpi;
    EnvSpec env{};
    PolicyOperator policy_op{};
    int n_seeds = 1;
    std::uint64_t base_seed = 1;
    std::string output_dir = "out";

    // fpi (also the sweep reference for the qmi sample compensation factor)
    FpiConfig fpi{};

    // qmi
    int qmi_outer_iters = 50;
    std::optional<int> inner_iters;
    std::optional<double> eta; // exactly one of inner_iters/eta
    AlphaSchedule alpha{};
    double mixing_offset = 1.0;
    double exploration_floor = 0.0;
    bool global_clock = false;
    int refresh_every = 1;

    GroundTruthSpec ground_truth{};

    double metrics_br_tol = 1e-8;
    double metrics_ip_tol = 1e-10;

    // FNV-1a over the canonical serialization; wall-clock-free, so equal
    // configs hash equal.
    std::uint64_t hash() const;
    std::string canonical_string() const;
};

// Parse + validate. Relative paths inside resolve against base_dir.
ExperimentConfig parse_config(const toml::Table& table, const std::string& base_dir);
ExperimentConfig load_config(const std::string& path);

// Sample compensation: T = eta * S * T_FPI when eta is set, else the
// explicit inner_iters.
int resolve_inner_iters(const ExperimentConfig& cfg);

std::unique_ptr<Environment> build_environment(const EnvSpec& spec);

// The effective number of outer iterations for the configured algorithm.
int effective_outer_iters(const ExperimentConfig& cfg);

QmiConfig make_qmi_config(const ExperimentConfig& cfg, std::uint64_t seed);

std::uint64_t fnv1a(const std::string& s);

} // namespace mfg

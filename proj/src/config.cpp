#include "mfg/config.hpp"

#include <cmath>
#include <filesystem>
#include <sstream>

#include "mfg/csv.hpp"
#include "mfg/errors.hpp"

namespace mfg {

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

namespace {

Algorithm parse_algorithm(const std::string& s) {
    if (s == "fpi") return Algorithm::fpi;
    if (s == "qmi_off") return Algorithm::qmi_off;
    if (s == "qmi_on") return Algorithm::qmi_on;
    throw ConfigError("config: unknown algorithm '" + s + "' (fpi | qmi_off | qmi_on)");
}

PolicyOperator parse_policy(const toml::Table& t) {
    PolicyOperator op;
    const std::string kind = toml::get_string(t, "policy.kind", "greedy");
    if (kind == "greedy") {
        op.kind = PolicyOperator::Kind::greedy;
        return op;
    }
    if (kind != "softmax") {
        throw ConfigError("config: policy.kind must be greedy or softmax, got '" + kind + "'");
    }
    op.kind = PolicyOperator::Kind::softmax;
    op.temperature.value = toml::require_double(t, "policy.temperature");
    const std::string sched = toml::get_string(t, "policy.temperature_schedule", "fixed");
    if (sched == "fixed") {
        op.temperature.kind = TemperatureSchedule::Kind::fixed;
    } else if (sched == "linear_k") {
        // inverse temperature = value * (1-based outer iteration)
        op.temperature.kind = TemperatureSchedule::Kind::linear;
    } else {
        throw ConfigError("config: policy.temperature_schedule must be fixed or linear_k");
    }
    if (!(op.temperature.value > 0.0)) {
        throw ConfigError("config: policy.temperature must be positive");
    }
    return op;
}

std::string resolve_path(const std::string& path, const std::string& base_dir) {
    namespace fs = std::filesystem;
    if (path.empty()) return path;
    fs::path p(path);
    if (p.is_absolute() || base_dir.empty()) return path;
    return (fs::path(base_dir) / p).string();
}

} // namespace

ExperimentConfig parse_config(const toml::Table& t, const std::string& base_dir) {
    ExperimentConfig cfg;
    cfg.name = toml::get_string(t, "experiment.name", "experiment");
    cfg.algorithm = parse_algorithm(toml::require_string(t, "experiment.algorithm"));
    cfg.n_seeds = static_cast<int>(toml::get_int(t, "experiment.n_seeds", 1));
    if (cfg.n_seeds < 1) throw ConfigError("config: experiment.n_seeds must be >= 1");
    cfg.base_seed = static_cast<std::uint64_t>(toml::get_int(t, "experiment.base_seed", 1));
    cfg.output_dir =
        resolve_path(toml::get_string(t, "experiment.output", "out/" + cfg.name), base_dir);

    const std::string env_kind = toml::require_string(t, "env.kind");
    if (env_kind == "ring_road") {
        cfg.env.kind = EnvSpec::Kind::ring_road;
        auto& p = cfg.env.ring;
        p.n_cells = static_cast<int>(toml::get_int(t, "env.n_cells", 50));
        p.gamma = toml::get_double(t, "env.gamma", 0.98);
        p.delta_t = toml::get_double(t, "env.delta_t", 1.0 / p.n_cells);
        p.a_max = toml::get_double(t, "env.a_max", 1.0);
        p.stimulus_scale = toml::get_double(t, "env.stimulus_scale", 0.2);
        p.mu_jam_cells = toml::get_double(t, "env.mu_jam_cells", 3.0);
    } else if (env_kind == "sioux_falls") {
        cfg.env.kind = EnvSpec::Kind::sioux_falls;
        cfg.env.topology_path = resolve_path(toml::require_string(t, "env.topology"), base_dir);
        cfg.env.sioux.c1 = toml::get_double(t, "env.c1", 1e5);
        cfg.env.sioux.c2 = toml::get_double(t, "env.c2", 10.0);
        cfg.env.sioux.gamma = toml::get_double(t, "env.gamma", 0.8);
        cfg.env.origin = static_cast<int>(toml::get_int(t, "env.origin", 1));
        cfg.env.destination = static_cast<int>(toml::get_int(t, "env.destination", 20));
    } else {
        throw ConfigError("config: env.kind must be ring_road or sioux_falls");
    }

    cfg.policy_op = parse_policy(t);

    cfg.fpi.outer_iters = static_cast<int>(toml::get_int(t, "fpi.outer_iters", 50));
    cfg.fpi.sweeps_per_iter = static_cast<int>(toml::get_int(t, "fpi.sweeps_per_iter", 20));
    cfg.fpi.br_tolerance = toml::get_double(t, "fpi.br_tolerance", 0.0);
    cfg.fpi.ip_tolerance = toml::get_double(t, "fpi.ip_tolerance", 1e-10);
    cfg.fpi.ip_max_iters = static_cast<int>(toml::get_int(t, "fpi.ip_max_iters", 2'000'000));
    cfg.fpi.policy_op = cfg.policy_op;
    const std::string br_start = toml::get_string(t, "fpi.br_start", "zero");
    if (br_start == "warm") {
        cfg.fpi.br_start = FpiConfig::BrStart::warm;
    } else if (br_start == "zero") {
        cfg.fpi.br_start = FpiConfig::BrStart::zero;
    } else {
        throw ConfigError("config: fpi.br_start must be warm or zero");
    }
    const std::string ip_update = toml::get_string(t, "fpi.ip_update", "fixed_point");
    if (ip_update == "sweeps") {
        cfg.fpi.ip_update = FpiConfig::IpUpdate::sweeps;
    } else if (ip_update == "fixed_point") {
        cfg.fpi.ip_update = FpiConfig::IpUpdate::fixed_point;
    } else {
        throw ConfigError("config: fpi.ip_update must be sweeps or fixed_point");
    }

    cfg.qmi_outer_iters =
        static_cast<int>(toml::get_int(t, "qmi.outer_iters", cfg.fpi.outer_iters));
    if (toml::has_key(t, "qmi.inner_iters")) {
        cfg.inner_iters = static_cast<int>(toml::require_int(t, "qmi.inner_iters"));
    }
    if (toml::has_key(t, "qmi.eta")) cfg.eta = toml::require_double(t, "qmi.eta");
    if (cfg.algorithm != Algorithm::fpi) {
        if (cfg.inner_iters.has_value() == cfg.eta.has_value()) {
            throw ConfigError(
                "config: set exactly one of qmi.inner_iters and qmi.eta for qmi runs");
        }
    }
    const std::string alpha_kind = toml::get_string(t, "qmi.alpha", "harmonic");
    if (alpha_kind == "harmonic") {
        cfg.alpha.kind = AlphaSchedule::Kind::harmonic;
        cfg.alpha.h = toml::get_double(t, "qmi.alpha_h", 1.0);
        cfg.alpha.t0 = toml::get_double(t, "qmi.alpha_t0", 10.0);
    } else if (alpha_kind == "constant") {
        cfg.alpha.kind = AlphaSchedule::Kind::constant;
        cfg.alpha.c = toml::get_double(t, "qmi.alpha_c", 0.001);
    } else {
        throw ConfigError("config: qmi.alpha must be harmonic or constant");
    }
    cfg.mixing_offset = toml::get_double(t, "qmi.mixing_offset", 1.0);
    cfg.exploration_floor = toml::get_double(t, "qmi.exploration_floor", 0.0);
    cfg.global_clock = toml::get_bool(t, "qmi.global_clock", false);
    cfg.refresh_every = static_cast<int>(toml::get_int(t, "qmi.refresh_every", 1));

    const std::string gt_mode = toml::get_string(t, "ground_truth.mode", "compute");
    if (gt_mode == "compute") {
        cfg.ground_truth.mode = GroundTruthSpec::Mode::compute;
    } else if (gt_mode == "load") {
        cfg.ground_truth.mode = GroundTruthSpec::Mode::load;
    } else {
        throw ConfigError("config: ground_truth.mode must be compute or load");
    }
    cfg.ground_truth.tol = toml::get_double(t, "ground_truth.tol", 1e-10);
    cfg.ground_truth.max_outer =
        static_cast<int>(toml::get_int(t, "ground_truth.max_outer", 5000));
    cfg.ground_truth.damping = toml::get_double(t, "ground_truth.damping", 1.0);
    if (!(cfg.ground_truth.damping > 0.0) || cfg.ground_truth.damping > 1.0) {
        throw ConfigError("config: ground_truth.damping must lie in (0, 1]");
    }
    cfg.ground_truth.path = resolve_path(toml::get_string(t, "ground_truth.path", ""), base_dir);
    if (cfg.ground_truth.mode == GroundTruthSpec::Mode::load && cfg.ground_truth.path.empty()) {
        throw ConfigError("config: ground_truth.mode = load requires ground_truth.path");
    }

    cfg.metrics_br_tol = toml::get_double(t, "metrics.br_tol", 1e-8);
    cfg.metrics_ip_tol = toml::get_double(t, "metrics.ip_tol", 1e-10);
    if (!(cfg.metrics_br_tol > 0.0) || !(cfg.metrics_ip_tol > 0.0)) {
        throw ConfigError("config: metric tolerances must be positive");
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    const std::string text = read_text_file(path);
    const std::string base = std::filesystem::path(path).parent_path().string();
    return parse_config(toml::parse(text), base);
}

int resolve_inner_iters(const ExperimentConfig& cfg) {
    if (cfg.eta.has_value()) {
        std::unique_ptr<Environment> env = build_environment(cfg.env);
        const double t = *cfg.eta * env->n_states() * cfg.fpi.sweeps_per_iter;
        const int ti = static_cast<int>(std::llround(t));
        if (ti < 1) throw ConfigError("config: eta * S * T_FPI resolves below one inner step");
        return ti;
    }
    if (cfg.inner_iters.has_value()) return *cfg.inner_iters;
    throw ConfigError("config: neither qmi.eta nor qmi.inner_iters is set");
}

std::unique_ptr<Environment> build_environment(const EnvSpec& spec) {
    if (spec.kind == EnvSpec::Kind::ring_road) return make_ring_road(spec.ring);
    NetworkTopology topo = load_topology(spec.topology_path, spec.origin, spec.destination);
    return make_sioux_falls(std::move(topo), spec.sioux);
}

int effective_outer_iters(const ExperimentConfig& cfg) {
    return cfg.algorithm == Algorithm::fpi ? cfg.fpi.outer_iters : cfg.qmi_outer_iters;
}

QmiConfig make_qmi_config(const ExperimentConfig& cfg, std::uint64_t seed) {
    QmiConfig q;
    q.variant =
        cfg.algorithm == Algorithm::qmi_on ? QmiVariant::on_policy : QmiVariant::off_policy;
    q.outer_iters = cfg.qmi_outer_iters;
    q.inner_iters = resolve_inner_iters(cfg);
    q.alpha = cfg.alpha;
    q.mixing_offset = cfg.mixing_offset;
    q.policy_op = cfg.policy_op;
    q.exploration_floor = cfg.exploration_floor;
    q.seed = seed;
    q.global_clock = cfg.global_clock;
    q.refresh_every = cfg.refresh_every;
    return q;
}

std::string ExperimentConfig::canonical_string() const {
    std::ostringstream s;
    s << "name=" << name << ";alg=" << static_cast<int>(algorithm)
      << ";env=" << static_cast<int>(env.kind);
    if (env.kind == EnvSpec::Kind::ring_road) {
        s << ";n_cells=" << env.ring.n_cells << ";gamma=" << format_double(env.ring.gamma)
          << ";dt=" << format_double(env.ring.delta_t)
          << ";amax=" << format_double(env.ring.a_max)
          << ";stim=" << format_double(env.ring.stimulus_scale)
          << ";jam=" << format_double(env.ring.mu_jam_cells);
    } else {
        s << ";topology=" << env.topology_path << ";c1=" << format_double(env.sioux.c1)
          << ";c2=" << format_double(env.sioux.c2) << ";gamma=" << format_double(env.sioux.gamma)
          << ";origin=" << env.origin << ";dest=" << env.destination;
    }
    s << ";op=" << static_cast<int>(policy_op.kind)
      << ";tk=" << static_cast<int>(policy_op.temperature.kind)
      << ";tv=" << format_double(policy_op.temperature.value);
    s << ";seeds=" << n_seeds << ";base=" << base_seed;
    s << ";K_fpi=" << fpi.outer_iters << ";T_fpi=" << fpi.sweeps_per_iter
      << ";brtol=" << format_double(fpi.br_tolerance)
      << ";iptol=" << format_double(fpi.ip_tolerance)
      << ";brstart=" << static_cast<int>(fpi.br_start)
      << ";ipmode=" << static_cast<int>(fpi.ip_update);
    s << ";K_qmi=" << qmi_outer_iters;
    s << ";T=" << (inner_iters ? std::to_string(*inner_iters) : std::string("-"));
    s << ";eta=" << (eta ? format_double(*eta) : std::string("-"));
    s << ";alpha=" << static_cast<int>(alpha.kind) << ";h=" << format_double(alpha.h)
      << ";t0=" << format_double(alpha.t0) << ";c=" << format_double(alpha.c);
    s << ";mix_a=" << format_double(mixing_offset)
      << ";eps=" << format_double(exploration_floor) << ";gclock=" << (global_clock ? 1 : 0)
      << ";refresh=" << refresh_every;
    s << ";gt=" << static_cast<int>(ground_truth.mode)
      << ";gttol=" << format_double(ground_truth.tol) << ";gtmax=" << ground_truth.max_outer
      << ";gtdamp=" << format_double(ground_truth.damping);
    s << ";mbr=" << format_double(metrics_br_tol) << ";mip=" << format_double(metrics_ip_tol);
    return s.str();
}

std::uint64_t ExperimentConfig::hash() const { return fnv1a(canonical_string()); }

} // namespace mfg

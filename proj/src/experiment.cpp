#include "mfg/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <mutex>
#include <sstream>
#include <thread>

#include "mfg/csv.hpp"
#include "mfg/errors.hpp"
#include "mfg/metrics.hpp"
#include "mfg/operators.hpp"
#include "mfg/rng.hpp"
#include "mfg/svg_chart.hpp"

namespace mfg {

namespace {

// Salt so the initial-population draw does not share a stream with the
// trajectory rng of the same seed.
constexpr std::uint64_t kM0Salt = 0x9e3779b97f4a7c15ull;

std::uint64_t gt_key(const ExperimentConfig& cfg) {
    std::ostringstream s;
    s << "env=" << static_cast<int>(cfg.env.kind);
    if (cfg.env.kind == EnvSpec::Kind::ring_road) {
        s << ";n=" << cfg.env.ring.n_cells << ";g=" << format_double(cfg.env.ring.gamma)
          << ";dt=" << format_double(cfg.env.ring.delta_t)
          << ";st=" << format_double(cfg.env.ring.stimulus_scale)
          << ";jam=" << format_double(cfg.env.ring.mu_jam_cells);
    } else {
        s << ";c1=" << format_double(cfg.env.sioux.c1)
          << ";c2=" << format_double(cfg.env.sioux.c2)
          << ";g=" << format_double(cfg.env.sioux.gamma) << ";o=" << cfg.env.origin << ";d="
          << cfg.env.destination;
    }
    const PolicyOperator op = cfg.policy_op.frozen_at_terminal(effective_outer_iters(cfg));
    s << ";op=" << static_cast<int>(op.kind) << ";L=" << format_double(op.temperature.value);
    s << ";tol=" << format_double(cfg.ground_truth.tol);
    return fnv1a(s.str());
}

std::string default_gt_path(const ExperimentConfig& cfg, std::uint64_t key) {
    std::ostringstream s;
    s << cfg.output_dir << "/ground_truth_" << std::hex << key << ".csv";
    return s.str();
}

std::string serialize_ground_truth(std::uint64_t key, const QTable& q, const Population& mu) {
    std::ostringstream out;
    out << "# mfg ground truth cache\n";
    out << "key," << key << "\n";
    out << "states," << mu.size() << "\n";
    out << "actions," << q.cols() << "\n";
    for (int s = 0; s < mu.size(); ++s) out << "mu," << s << "," << format_double(mu[s]) << "\n";
    for (int s = 0; s < q.rows(); ++s) {
        for (int a = 0; a < q.cols(); ++a) {
            out << "q," << s << "," << a << "," << format_double(q(s, a)) << "\n";
        }
    }
    return out.str();
}

bool deserialize_ground_truth(const std::string& text, std::uint64_t expect_key, QTable& q,
                              Population& mu) {
    std::istringstream in(text);
    std::string line;
    int S = -1;
    int A = -1;
    std::vector<double> mass;
    QTable table;
    bool key_ok = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto f = split_csv_line(line);
        if (f[0] == "key" && f.size() == 2) {
            key_ok = std::stoull(f[1]) == expect_key;
        } else if (f[0] == "states" && f.size() == 2) {
            S = std::stoi(f[1]);
            mass.assign(static_cast<std::size_t>(S), 0.0);
        } else if (f[0] == "actions" && f.size() == 2) {
            A = std::stoi(f[1]);
            if (S > 0) table = QTable(S, A);
        } else if (f[0] == "mu" && f.size() == 3) {
            mass[static_cast<std::size_t>(std::stoi(f[1]))] = parse_double(f[2]);
        } else if (f[0] == "q" && f.size() == 4) {
            table(std::stoi(f[1]), std::stoi(f[2])) = parse_double(f[3]);
        }
    }
    if (!key_ok || S <= 0 || A <= 0) return false;
    q = std::move(table);
    mu = Population(std::move(mass));
    return true;
}

double sample_std(const std::vector<double>& xs, double mean) {
    if (xs.size() < 2) return 0.0;
    double acc = 0.0;
    for (double x : xs) acc += (x - mean) * (x - mean);
    return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

} // namespace

Population initial_population(int n_states, std::uint64_t seed) {
    Rng rng(seed ^ kM0Salt);
    return Population(rng.simplex(n_states));
}

std::pair<QTable, Population> resolve_ground_truth(const ExperimentConfig& cfg,
                                                   const Environment& env, std::ostream* log) {
    const std::uint64_t key = gt_key(cfg);
    const std::string path = cfg.ground_truth.path.empty() ? default_gt_path(cfg, key)
                                                           : cfg.ground_truth.path;
    if (std::filesystem::exists(path)) {
        QTable q;
        Population mu;
        if (deserialize_ground_truth(read_text_file(path), key, q, mu)) {
            if (log) *log << "ground truth: loaded " << path << "\n";
            return {std::move(q), std::move(mu)};
        }
        if (cfg.ground_truth.mode == GroundTruthSpec::Mode::load) {
            throw ConfigError("ground truth at " + path +
                              " does not match this configuration (stale cache?)");
        }
    } else if (cfg.ground_truth.mode == GroundTruthSpec::Mode::load) {
        throw ConfigError("ground truth file not found: " + path);
    }

    const PolicyOperator op = cfg.policy_op.frozen_at_terminal(effective_outer_iters(cfg));
    if (log) {
        *log << "ground truth: computing (tol " << cfg.ground_truth.tol << ", damping "
             << cfg.ground_truth.damping << ")\n";
    }
    // Warm start from the annealed benchmark path so the polish starts near
    // the terminal-temperature equilibrium; the certified result does not
    // depend on this stage.
    FpiConfig warm_cfg = cfg.fpi;
    warm_cfg.policy_op = cfg.policy_op;
    warm_cfg.br_start = FpiConfig::BrStart::warm;
    warm_cfg.ip_update = FpiConfig::IpUpdate::sweeps;
    const FpiResult warm = fpi_solve(env, Population::uniform(env.n_states()), warm_cfg);
    auto [q, mu] = ground_truth_mfne(env, op, cfg.ground_truth.tol, cfg.ground_truth.max_outer,
                                     cfg.ground_truth.damping, &warm.m, &warm.q);
    if (log) {
        const auto [rq, rm] = mfne_residual(q, mu, op, 0, env);
        *log << "ground truth: residual certificate q=" << format_double(rq)
             << " m=" << format_double(rm) << "\n";
    }
    write_text_file(path, serialize_ground_truth(key, q, mu));
    if (log) *log << "ground truth: cached to " << path << "\n";
    return {std::move(q), std::move(mu)};
}

AggregateResult run_experiment(const ExperimentConfig& cfg, int jobs, std::ostream* log,
                               const std::pair<QTable, Population>* fixed_ground_truth) {
    std::unique_ptr<Environment> env = build_environment(cfg.env);
    AggregateResult result;
    result.config = cfg;
    if (fixed_ground_truth != nullptr) {
        result.q_star = fixed_ground_truth->first;
        result.mu_star = fixed_ground_truth->second;
    } else {
        std::tie(result.q_star, result.mu_star) = resolve_ground_truth(cfg, *env, log);
    }

    const int n = cfg.n_seeds;
    result.traces.resize(static_cast<std::size_t>(n));
    const std::uint64_t cfg_hash = cfg.hash();

    std::mutex log_mutex;
    auto run_one = [&](int i) {
        const std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(i);
        const Population m0 = initial_population(env->n_states(), seed);
        MetricsFn hook = [&](int k, const QTable& q, const Population& m) {
            const double e = mse(m, result.mu_star);
            const double x = exploitability(q, *env, cfg.policy_op, k, cfg.metrics_br_tol,
                                            cfg.metrics_ip_tol);
            return std::make_pair(e, x);
        };
        LearningTrace trace;
        if (cfg.algorithm == Algorithm::fpi) {
            FpiResult r = fpi_solve(*env, m0, cfg.fpi, hook);
            trace = std::move(r.trace);
        } else {
            const QmiConfig qcfg = make_qmi_config(cfg, seed);
            QmiResult r = run_qmi(*env, QTable(env->n_states(), env->n_actions()), m0, qcfg, hook);
            trace = std::move(r.trace);
        }
        trace.seed = seed;
        trace.config_hash = cfg_hash;
        result.traces[static_cast<std::size_t>(i)] = std::move(trace);
        if (log) {
            const std::scoped_lock lk(log_mutex);
            *log << cfg.name << ": seed " << seed << " done\n";
        }
    };

    jobs = std::max(1, jobs);
    if (jobs == 1 || n == 1) {
        for (int i = 0; i < n; ++i) run_one(i);
    } else {
        std::vector<std::thread> pool;
        std::mutex queue_mutex;
        int next = 0;
        for (int w = 0; w < std::min(jobs, n); ++w) {
            pool.emplace_back([&] {
                while (true) {
                    int i;
                    {
                        const std::scoped_lock lk(queue_mutex);
                        if (next >= n) return;
                        i = next++;
                    }
                    run_one(i);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    // Ordered reduction over seeds.
    const std::size_t n_rows = result.traces.front().rows.size();
    for (std::size_t r = 0; r < n_rows; ++r) {
        AggregateRow row;
        row.k = result.traces.front().rows[r].k;
        row.samples = result.traces.front().rows[r].samples;
        std::vector<double> mses, expls;
        mses.reserve(static_cast<std::size_t>(n));
        expls.reserve(static_cast<std::size_t>(n));
        for (const auto& tr : result.traces) {
            mses.push_back(tr.rows[r].mse);
            expls.push_back(tr.rows[r].exploitability);
        }
        for (double v : mses) row.mse_mean += v;
        row.mse_mean /= n;
        for (double v : expls) row.expl_mean += v;
        row.expl_mean /= n;
        row.mse_std = sample_std(mses, row.mse_mean);
        row.expl_std = sample_std(expls, row.expl_mean);
        result.rows.push_back(row);
    }
    return result;
}

void emit_csv(const AggregateResult& result, const std::string& out_dir) {
    std::ostringstream trace_csv;
    trace_csv << "k,samples,seed,mse,exploitability,wall_ms\n";
    for (const auto& tr : result.traces) {
        for (const auto& row : tr.rows) {
            trace_csv << row.k << "," << row.samples << "," << tr.seed << ","
                      << format_double(row.mse) << "," << format_double(row.exploitability) << ","
                      << format_double(row.wall_ms) << "\n";
        }
    }
    write_text_file(out_dir + "/trace.csv", trace_csv.str());

    std::ostringstream agg;
    agg << "k,samples,mse_mean,mse_std,expl_mean,expl_std\n";
    for (const auto& row : result.rows) {
        agg << row.k << "," << row.samples << "," << format_double(row.mse_mean) << ","
            << format_double(row.mse_std) << "," << format_double(row.expl_mean) << ","
            << format_double(row.expl_std) << "\n";
    }
    write_text_file(out_dir + "/aggregate.csv", agg.str());

    const char* alg = result.config.algorithm == Algorithm::fpi
                          ? "fpi"
                          : (result.config.algorithm == Algorithm::qmi_off ? "qmi_off" : "qmi_on");
    std::ostringstream meta;
    meta << "key,value\n";
    meta << "name," << result.config.name << "\n";
    meta << "algorithm," << alg << "\n";
    meta << "env," << (result.config.env.kind == EnvSpec::Kind::ring_road ? "ring_road"
                                                                          : "sioux_falls")
         << "\n";
    meta << "n_seeds," << result.config.n_seeds << "\n";
    meta << "base_seed," << result.config.base_seed << "\n";
    meta << "config_hash," << result.config.hash() << "\n";
    meta << "mse_metric,squared L2 distance to the reference population\n";
    meta << "exploitability_metric,L2 norm over flattened Q-tables\n";
    write_text_file(out_dir + "/run_meta.csv", meta.str());
}

namespace {

void emit_one_plotdata(const AggregateResult& result, const std::string& out_dir,
                       bool use_mse, bool svg, bool log_y) {
    const std::string metric = use_mse ? "mse" : "exploitability";
    std::ostringstream csv;
    csv << "k,samples,series,value\n";
    for (const auto& tr : result.traces) {
        for (const auto& row : tr.rows) {
            csv << row.k << "," << row.samples << ",seed_" << tr.seed << ","
                << format_double(use_mse ? row.mse : row.exploitability) << "\n";
        }
    }
    for (const auto& row : result.rows) {
        csv << row.k << "," << row.samples << ",mean,"
            << format_double(use_mse ? row.mse_mean : row.expl_mean) << "\n";
    }
    for (const auto& row : result.rows) {
        csv << row.k << "," << row.samples << ",std,"
            << format_double(use_mse ? row.mse_std : row.expl_std) << "\n";
    }
    write_text_file(out_dir + "/plot_" + metric + ".csv", csv.str());

    if (svg) {
        SvgSeries series;
        for (const auto& row : result.rows) {
            series.x.push_back(static_cast<double>(row.k));
            series.mean.push_back(use_mse ? row.mse_mean : row.expl_mean);
            series.std_dev.push_back(use_mse ? row.mse_std : row.expl_std);
        }
        const std::string title = result.config.name + ": " + metric;
        write_text_file(out_dir + "/plot_" + metric + ".svg",
                        render_line_chart(title, "outer iteration", metric, series, log_y));
    }
}

} // namespace

void emit_plotdata(const AggregateResult& result, const std::string& out_dir, bool svg,
                   bool log_y) {
    emit_one_plotdata(result, out_dir, true, svg, log_y);
    emit_one_plotdata(result, out_dir, false, svg, log_y);
}

void emit_plotdata_from_dir(const std::string& in_dir, bool svg, bool log_y) {
    const std::string text = read_text_file(in_dir + "/aggregate.csv");
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty aggregate.csv in " + in_dir);
    SvgSeries mse_series, expl_series;
    std::ostringstream mse_csv, expl_csv;
    mse_csv << "k,samples,series,value\n";
    expl_csv << "k,samples,series,value\n";
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 6) throw IoError("bad aggregate row: " + line);
        const double k = parse_double(f[0]);
        mse_series.x.push_back(k);
        mse_series.mean.push_back(parse_double(f[2]));
        mse_series.std_dev.push_back(parse_double(f[3]));
        expl_series.x.push_back(k);
        expl_series.mean.push_back(parse_double(f[4]));
        expl_series.std_dev.push_back(parse_double(f[5]));
        mse_csv << f[0] << "," << f[1] << ",mean," << f[2] << "\n";
        mse_csv << f[0] << "," << f[1] << ",std," << f[3] << "\n";
        expl_csv << f[0] << "," << f[1] << ",mean," << f[4] << "\n";
        expl_csv << f[0] << "," << f[1] << ",std," << f[5] << "\n";
    }
    write_text_file(in_dir + "/plot_mse.csv", mse_csv.str());
    write_text_file(in_dir + "/plot_exploitability.csv", expl_csv.str());
    if (svg) {
        write_text_file(in_dir + "/plot_mse.svg",
                        render_line_chart("mse", "outer iteration", "mse", mse_series, log_y));
        write_text_file(in_dir + "/plot_exploitability.svg",
                        render_line_chart("exploitability", "outer iteration", "exploitability",
                                          expl_series, log_y));
    }
}

std::vector<BudgetSweepEntry> fixed_budget_sweep(const ExperimentConfig& cfg, std::int64_t total,
                                                 const std::vector<int>& t_list, int jobs,
                                                 std::ostream* log) {
    if (cfg.algorithm == Algorithm::fpi) {
        throw ConfigError("budget sweep: config must select a qmi algorithm");
    }
    if (total < 1) throw ConfigError("budget sweep: total sample count must be positive");
    // One reference equilibrium for every split, taken from the base config.
    const std::pair<QTable, Population> gt = [&] {
        std::unique_ptr<Environment> env = build_environment(cfg.env);
        return resolve_ground_truth(cfg, *env, log);
    }();
    std::vector<BudgetSweepEntry> entries;
    for (int t : t_list) {
        if (t < 1 || total % t != 0) {
            throw ConfigError("budget sweep: inner iteration count " + std::to_string(t) +
                              " does not divide the total " + std::to_string(total));
        }
        ExperimentConfig sub = cfg;
        sub.name = cfg.name + "_T" + std::to_string(t);
        sub.inner_iters = t;
        sub.eta.reset();
        sub.qmi_outer_iters = static_cast<int>(total / t);
        sub.alpha.kind = AlphaSchedule::Kind::constant;
        sub.alpha.c = 0.001;
        sub.output_dir = cfg.output_dir + "/T" + std::to_string(t);
        if (log) *log << "budget sweep: T=" << t << " K=" << sub.qmi_outer_iters << "\n";
        BudgetSweepEntry entry;
        entry.inner_iters = t;
        entry.outer_iters = sub.qmi_outer_iters;
        entry.result = run_experiment(sub, jobs, log, &gt);
        entries.push_back(std::move(entry));
    }
    return entries;
}

void emit_budget_csv(const std::vector<BudgetSweepEntry>& entries, const std::string& out_dir) {
    std::ostringstream csv;
    csv << "inner_iters,outer_iters,final_mse_mean,final_mse_std,final_expl_mean,final_expl_std\n";
    for (const auto& e : entries) {
        const AggregateRow& last = e.result.rows.back();
        csv << e.inner_iters << "," << e.outer_iters << "," << format_double(last.mse_mean) << ","
            << format_double(last.mse_std) << "," << format_double(last.expl_mean) << ","
            << format_double(last.expl_std) << "\n";
    }
    write_text_file(out_dir + "/budget_comparison.csv", csv.str());
}

} // namespace mfg

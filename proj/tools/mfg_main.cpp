// Command-line driver for the mean-field-game solver toolkit.
//
//   mfg solve-fpi    --config <path> [--out <dir>] [--jobs N]
//   mfg run-qmi      --config <path> [--out <dir>] [--jobs N]
//   mfg ground-truth --config <path> [--tol 1e-10] [--out <path>]
//   mfg budget-sweep --config <path> --total N --inner a,b,c [--out <dir>] [--jobs N]
//   mfg plot         --in <dir> [--svg] [--log-y]
//
// Exit codes: 0 success, 2 config error, 3 solver non-convergence, 4 I/O.

#include <CLI11.hpp>

#include <iostream>

#include "mfg/csv.hpp"
#include "mfg/errors.hpp"
#include "mfg/experiment.hpp"
#include "mfg/metrics.hpp"
#include "mfg/operators.hpp"

namespace {

int run_solver(const std::string& config_path, const std::string& out_override, int jobs,
               bool svg, bool log_y, bool expect_fpi) {
    mfg::ExperimentConfig cfg = mfg::load_config(config_path);
    if (expect_fpi != (cfg.algorithm == mfg::Algorithm::fpi)) {
        throw mfg::ConfigError(expect_fpi
                                   ? "solve-fpi needs a config with experiment.algorithm = fpi"
                                   : "run-qmi needs a qmi_off or qmi_on config");
    }
    if (!out_override.empty()) cfg.output_dir = out_override;
    const mfg::AggregateResult result = mfg::run_experiment(cfg, jobs, &std::cerr);
    mfg::emit_csv(result, cfg.output_dir);
    mfg::emit_plotdata(result, cfg.output_dir, svg, log_y);
    const auto& last = result.rows.back();
    std::cout << cfg.name << ": final mse_mean " << mfg::format_double(last.mse_mean)
              << ", expl_mean " << mfg::format_double(last.expl_mean) << "\n";
    std::cout << "wrote " << cfg.output_dir << "/trace.csv and aggregate.csv\n";
    return 0;
}

int run_ground_truth(const std::string& config_path, double tol, const std::string& out_path) {
    mfg::ExperimentConfig cfg = mfg::load_config(config_path);
    if (tol > 0.0) cfg.ground_truth.tol = tol;
    if (!out_path.empty()) cfg.ground_truth.path = out_path;
    cfg.ground_truth.mode = mfg::GroundTruthSpec::Mode::compute;
    const auto env = mfg::build_environment(cfg.env);
    const auto [q, mu] = mfg::resolve_ground_truth(cfg, *env, &std::cerr);
    const mfg::PolicyOperator op =
        cfg.policy_op.frozen_at_terminal(mfg::effective_outer_iters(cfg));
    const auto [rq, rm] = mfg::mfne_residual(q, mu, op, 0, *env);
    std::cout << "ground truth ready: residuals q=" << mfg::format_double(rq)
              << " m=" << mfg::format_double(rm) << "\n";
    return 0;
}

int run_budget_sweep(const std::string& config_path, std::int64_t total,
                     const std::string& inner_list, const std::string& out_override, int jobs) {
    mfg::ExperimentConfig cfg = mfg::load_config(config_path);
    if (!out_override.empty()) cfg.output_dir = out_override;
    std::vector<int> t_list;
    std::size_t pos = 0;
    while (pos < inner_list.size()) {
        const std::size_t comma = inner_list.find(',', pos);
        const std::string tok = inner_list.substr(pos, comma - pos);
        try {
            t_list.push_back(std::stoi(tok));
        } catch (const std::exception&) {
            throw mfg::ConfigError("budget sweep: bad inner-iteration token '" + tok + "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (t_list.empty()) throw mfg::ConfigError("budget sweep: --inner list is empty");
    const auto entries = mfg::fixed_budget_sweep(cfg, total, t_list, jobs, &std::cerr);
    for (const auto& e : entries) {
        mfg::emit_csv(e.result, e.result.config.output_dir);
    }
    mfg::emit_budget_csv(entries, cfg.output_dir);
    std::cout << "wrote " << cfg.output_dir << "/budget_comparison.csv\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"tabular mean-field-game solvers: model-based fixed-point iteration and "
                 "online single-agent QM iteration"};
    app.require_subcommand(1);

    std::string config_path, out_dir, inner_list, in_dir;
    int jobs = 1;
    bool svg = false, log_y = false;
    double tol = 0.0;
    std::int64_t total = 0;

    auto* fpi_cmd = app.add_subcommand("solve-fpi", "run the model-based baseline");
    fpi_cmd->add_option("--config", config_path, "experiment config (TOML)")->required();
    fpi_cmd->add_option("--out", out_dir, "output directory override");
    fpi_cmd->add_option("--jobs", jobs, "max concurrent seeds");
    fpi_cmd->add_flag("--svg", svg, "also render SVG charts");
    fpi_cmd->add_flag("--log-y", log_y, "log-scale y axis in charts");

    auto* qmi_cmd = app.add_subcommand("run-qmi", "run the online learner");
    qmi_cmd->add_option("--config", config_path, "experiment config (TOML)")->required();
    qmi_cmd->add_option("--out", out_dir, "output directory override");
    qmi_cmd->add_option("--jobs", jobs, "max concurrent seeds");
    qmi_cmd->add_flag("--svg", svg, "also render SVG charts");
    qmi_cmd->add_flag("--log-y", log_y, "log-scale y axis in charts");

    auto* gt_cmd = app.add_subcommand("ground-truth", "compute and cache the reference MFNE");
    gt_cmd->add_option("--config", config_path, "experiment config (TOML)")->required();
    gt_cmd->add_option("--tol", tol, "successive-iterate tolerance");
    gt_cmd->add_option("--out", out_dir, "cache file path override");

    auto* sweep_cmd = app.add_subcommand("budget-sweep",
                                         "fixed total sample size across inner-iteration splits");
    sweep_cmd->add_option("--config", config_path, "experiment config (TOML)")->required();
    sweep_cmd->add_option("--total", total, "total samples K*T")->required();
    sweep_cmd->add_option("--inner", inner_list, "comma-separated inner iteration counts")
        ->required();
    sweep_cmd->add_option("--out", out_dir, "output directory override");
    sweep_cmd->add_option("--jobs", jobs, "max concurrent seeds");

    auto* plot_cmd = app.add_subcommand("plot", "emit plot data from an existing run directory");
    plot_cmd->add_option("--in", in_dir, "run directory with aggregate.csv")->required();
    plot_cmd->add_flag("--svg", svg, "also render SVG charts");
    plot_cmd->add_flag("--log-y", log_y, "log-scale y axis in charts");

    CLI11_PARSE(app, argc, argv);

    try {
        if (fpi_cmd->parsed()) return run_solver(config_path, out_dir, jobs, svg, log_y, true);
        if (qmi_cmd->parsed()) return run_solver(config_path, out_dir, jobs, svg, log_y, false);
        if (gt_cmd->parsed()) return run_ground_truth(config_path, tol, out_dir);
        if (sweep_cmd->parsed()) {
            return run_budget_sweep(config_path, total, inner_list, out_dir, jobs);
        }
        if (plot_cmd->parsed()) {
            mfg::emit_plotdata_from_dir(in_dir, svg, log_y);
            std::cout << "wrote plot data under " << in_dir << "\n";
            return 0;
        }
    } catch (const mfg::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const mfg::SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 3;
    } catch (const mfg::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "mfg/config.hpp"
#include "mfg/trace.hpp"

namespace mfg {

struct AggregateRow {
    int k = 0;
    std::int64_t samples = 0;
    double mse_mean = 0.0;
    double mse_std = 0.0;
    double expl_mean = 0.0;
    double expl_std = 0.0;
};

struct AggregateResult {
    ExperimentConfig config;
    std::vector<LearningTrace> traces; // ordered by seed index
    std::vector<AggregateRow> rows;    // per outer iteration, mean/std over seeds
    Population mu_star;
    QTable q_star;
};

// Ground truth for the configured environment/operator: loads the cache when
// the hash matches, computes and writes it otherwise. The operator the
// reference uses is the configured one frozen at its terminal temperature.
std::pair<QTable, Population> resolve_ground_truth(const ExperimentConfig& cfg,
                                                   const Environment& env, std::ostream* log);

// Fans the configured run out over n_seeds (seed = base_seed + i), at most
// `jobs` worker threads, then aggregates. Output is fully determined by the
// config and base seed; thread scheduling only changes wall_ms columns.
// fixed_ground_truth overrides the reference pair (used by the budget sweep
// so every split is measured against the same equilibrium).
AggregateResult run_experiment(const ExperimentConfig& cfg, int jobs = 1,
                               std::ostream* log = nullptr,
                               const std::pair<QTable, Population>* fixed_ground_truth = nullptr);

// trace.csv (k,samples,seed,mse,exploitability,wall_ms), aggregate.csv
// (k,samples,mse_mean,mse_std,expl_mean,expl_std), run_meta.csv. UTF-8, LF,
// shortest round-trip decimals.
void emit_csv(const AggregateResult& result, const std::string& out_dir);

// Long-form per-metric CSVs (k,samples,series,value with per-seed series
// plus mean/std), and optionally an SVG chart of mean +/- std per metric.
void emit_plotdata(const AggregateResult& result, const std::string& out_dir, bool svg = false,
                   bool log_y = false);

// Rebuild plot data (and optional SVG) from a directory that already holds
// trace.csv / aggregate.csv.
void emit_plotdata_from_dir(const std::string& in_dir, bool svg, bool log_y);

struct BudgetSweepEntry {
    int inner_iters = 0;
    int outer_iters = 0;
    AggregateResult result;
};

// Fixed total sample budget: for each T in t_list runs the config with
// K = total/T inner/outer split and a constant alpha of 0.001, then emits a
// comparison CSV. Every T must divide total.
std::vector<BudgetSweepEntry> fixed_budget_sweep(const ExperimentConfig& cfg, std::int64_t total,
                                                 const std::vector<int>& t_list, int jobs = 1,
                                                 std::ostream* log = nullptr);

void emit_budget_csv(const std::vector<BudgetSweepEntry>& entries, const std::string& out_dir);

// Initial population for a seeded run (shared by FPI and QMI so paired runs
// start identically).
Population initial_population(int n_states, std::uint64_t seed);

} // namespace mfg

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "mfg/types.hpp"

namespace mfg {

// Per-outer-iteration record of one seeded run.
struct TraceRow {
    int k = 0;
    std::int64_t samples = 0; // cumulative; model-based sweeps count as S samples each
    double mse = 0.0;
    double exploitability = 0.0;
    double wall_ms = 0.0; // elapsed since run start; excluded from determinism
};

struct LearningTrace {
    std::string env;
    std::string algorithm;
    std::uint64_t seed = 0;
    std::uint64_t config_hash = 0;
    std::vector<TraceRow> rows;
};

// Called once per outer iteration with the end-of-iteration tables; returns
// (mse, exploitability) for the trace. Solvers never feed the result back
// into the iteration, so the online learners stay model-free.
using MetricsFn = std::function<std::pair<double, double>(int k, const QTable& q,
                                                          const Population& m)>;

} // namespace mfg

#pragma once

#include <stdexcept>
#include <string>

namespace mfg {

// Bad user input: malformed config, invalid schedule constants, broken
// topology files. CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// An iterative solver failed to reach its tolerance. Exit code 3.
struct SolverError : std::runtime_error {
    SolverError(const std::string& what, double residual)
        : std::runtime_error(what), last_residual(residual) {}
    double last_residual;
};

// Filesystem trouble. Exit code 4.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace mfg

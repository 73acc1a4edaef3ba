#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mfg {

// Row-major dense matrix of doubles. Thin by design: the solver hands rows
// to the kernel layer as raw spans.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols),
          data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    double& operator()(int r, int c) { return data_[idx(r, c)]; }
    double operator()(int r, int c) const { return data_[idx(r, c)]; }

    double* row(int r) { return data_.data() + idx(r, 0); }
    const double* row(int r) const { return data_.data() + idx(r, 0); }
    std::span<double> row_span(int r) { return {row(r), static_cast<std::size_t>(cols_)}; }
    std::span<const double> row_span(int r) const {
        return {row(r), static_cast<std::size_t>(cols_)};
    }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    bool same_shape(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }
    bool operator==(const Matrix& o) const = default;

private:
    std::size_t idx(int r, int c) const {
        return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) +
               static_cast<std::size_t>(c);
    }

    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

// State-action value table, S x A.
using QTable = Matrix;

// Per-state valid-action sets. Stored both as sorted index lists (for
// iteration and sampling) and as a dense 0/1 mask (for branch-free checks).
class ActionSpace {
public:
    ActionSpace() = default;

    static ActionSpace full(int n_states, int n_actions);
    // Throws ConfigError if any state has an empty set or an index is out of
    // range; the offending state is named.
    static ActionSpace from_lists(int n_states, int n_actions,
                                  const std::vector<std::vector<int>>& valid);

    int n_states() const { return n_states_; }
    int n_actions() const { return n_actions_; }
    bool is_full() const { return full_; }

    std::span<const int> valid(int s) const {
        return {actions_.data() + offsets_[static_cast<std::size_t>(s)],
                static_cast<std::size_t>(offsets_[static_cast<std::size_t>(s) + 1] -
                                         offsets_[static_cast<std::size_t>(s)])};
    }
    bool is_valid(int s, int a) const {
        return mask_[static_cast<std::size_t>(s) * static_cast<std::size_t>(n_actions_) +
                     static_cast<std::size_t>(a)] != 0;
    }

private:
    int n_states_ = 0;
    int n_actions_ = 0;
    bool full_ = false;
    std::vector<int> offsets_; // n_states + 1 entries into actions_
    std::vector<int> actions_;
    std::vector<std::uint8_t> mask_;
};

// Probability vector over states (the M-value function). Simplex drift from
// long stochastic runs gets renormalized past a 1e-12 threshold; a process
// counter tracks how often that fired.
class Population {
public:
    Population() = default;
    explicit Population(std::vector<double> mass) : mass_(std::move(mass)) {}
    static Population uniform(int n);
    static Population point(int n, int s);

    int size() const { return static_cast<int>(mass_.size()); }
    double operator[](int s) const { return mass_[static_cast<std::size_t>(s)]; }
    double& operator[](int s) { return mass_[static_cast<std::size_t>(s)]; }

    std::span<const double> span() const { return mass_; }
    std::span<double> span() { return mass_; }
    double* data() { return mass_.data(); }
    const double* data() const { return mass_.data(); }

    // Divides by the sum when |sum - 1| exceeds 1e-12. Returns true if it did.
    bool renormalize_if_drifted();

    // Throws ConfigError when entries are negative/non-finite or the sum is
    // off by more than 1e-9.
    void validate(const std::string& context) const;

    bool operator==(const Population& o) const = default;

    static std::uint64_t renormalization_count();

private:
    std::vector<double> mass_;
};

// Row-stochastic S x A matrix restricted to valid actions.
struct Policy {
    Matrix probs;

    // Throws ConfigError on mask violations, negative entries, or rows off
    // the simplex by more than 1e-9.
    void validate(const ActionSpace& actions, const std::string& context) const;
};

// Euclidean distance between equally-shaped tables or vectors. Shape
// mismatch throws ConfigError.
double l2_distance(std::span<const double> a, std::span<const double> b);
double l2_distance(const Matrix& a, const Matrix& b);
double l2_distance(const Population& a, const Population& b);

} // namespace mfg

#pragma once
// Gap sequences: the empirical improvement an ERM candidate must show before
// it replaces the incumbent.

#include "germ/rademacher.hpp"

#include <span>
#include <string>
#include <variant>
#include <vector>

namespace germ {

struct UniformConvergence {
    RademacherBoundMode mode;
};

struct EmpiricalBernstein {};

// Caller-fixed gaps, deltas[k-1] at step k with the last entry repeating.
// Diagnostic use only: carries no monotonicity guarantee.
struct FixedGap {
    std::vector<double> deltas;
};

struct GapSpec {
    std::variant<UniformConvergence, EmpiricalBernstein, FixedGap> variant;
    std::size_t class_size = 1;

    static GapSpec uniform(RademacherBoundMode mode, std::size_t class_size);
    static GapSpec bernstein(std::size_t class_size);
    static GapSpec fixed(std::vector<double> deltas, std::size_t class_size);

    // False only for UniformConvergence with EmpiricalMcDiarmid.
    bool deterministic() const;
    void validate() const;
};

// 4 rbar + sqrt(2 ln(2k)/k) + 2/k.
double delta_uniform(std::size_t k, double rbar);

// Empirical-Bernstein gap from the loss sequences of the ERM candidate and
// the incumbent over the first k points. +infinity at k = 1.
double delta_bernstein(std::size_t k, std::span<const double> tilde_losses, std::span<const double> hat_losses,
                       std::size_t class_size);

// Same gap from the precomputed sum of squared loss differences.
double delta_bernstein_from_squares(std::size_t k, double squared_sum, std::size_t class_size);

} // namespace germ

#pragma once
// Rademacher complexity of the loss class: empirical estimates, the Massart
// finite-class bound, exact values for small discrete problems, and the
// McDiarmid deviation radius of the single-draw estimator.

#include "germ/problem.hpp"
#include "germ/rng.hpp"

#include <span>
#include <variant>
#include <vector>

namespace germ {

// Fresh Rademacher signs per step, sup term plus sqrt(2 ln(2k)/k), clamped at 0.
struct EmpiricalMcDiarmid {};
// sqrt(2 ln|H| / k), valid with probability one.
struct MassartDeterministic {};
// Caller-supplied bounds; values[k-1] is used at step k and the last entry
// repeats past the end.
struct UserConstant {
    std::vector<double> values;
};

using RademacherBoundMode = std::variant<EmpiricalMcDiarmid, MassartDeterministic, UserConstant>;

void validate_mode(const RademacherBoundMode& mode);

inline constexpr double kEnumerationBudget = 1e7;

// sup_h (1/k) sum_i sigma_i loss(h, z_i), exact over the finite class.
double rademacher_sup(const LossTable& loss, std::span<const Outcome> sample, std::span<const int> signs);

// Draws k signs from rng and returns max(0, sup + sqrt(2 ln(2k)/k)).
double rbar_empirical(const LossTable& loss, std::span<const Outcome> sample, Rng& rng);
// Same estimator with the signs supplied by the caller.
double rbar_from_signs(const LossTable& loss, std::span<const Outcome> sample, std::span<const int> signs);

double rbar_massart(std::size_t class_size, std::size_t k);

// R_k of the loss class by brute force over all (2m)^k sign/sample pairs.
// Throws ResourceError beyond kEnumerationBudget.
double exact_rademacher(const LearningProblem& problem, std::size_t k);

// Same quantity through multinomial counts of (outcome, sign) cells; scales
// to larger k when m is small. Throws ResourceError beyond kEnumerationBudget
// compositions.
double exact_rademacher_by_counts(const LearningProblem& problem, std::size_t k);

// sqrt(2 ln(2/delta) / n); delta must lie in (0,1).
double prop1_radius(std::size_t n, double delta);

// Exact probability over signs and samples that
// |R_k - rademacher_sup| > prop1_radius(k, delta).
double prop1_exceedance(const LearningProblem& problem, std::size_t k, double delta);

// Exact probability over signs and samples that rbar_from_signs >= R_k.
double rbar_coverage(const LearningProblem& problem, std::size_t k);

} // namespace germ

#pragma once
// Closed-form bounds and certificates used to check GERM's guarantees.

#include "germ/problem.hpp"

#include <span>

namespace germ {

// Additive slack over the best-in-class risk that the uniform-convergence
// variant's output respects with probability at least 1 - 2/n:
// 12 rbar + 3 sqrt(2 ln(2n)/n) + 2/n.
double thm2_excess_bound(std::size_t n, double rbar);

// Smallest B with E[X_h^2] <= B E[X_h]^beta for every h, where
// X_h = loss(h,Z) - loss(h*,Z) and h* is the lowest-index risk minimizer.
// minimal_B is +infinity when some X_h has zero mean but positive second
// moment and beta > 0.
struct BernsteinCertificate {
    double beta = 0.0;
    double minimal_B = 0.0;
    HypothesisIndex hstar_index = 0;
};

BernsteinCertificate bernstein_min_B(const LearningProblem& problem, double beta);

// Slack of the pairwise empirical Bernstein inequality for losses of two
// hypotheses over the same n >= 2 points, with |H|^2 union bound:
// sqrt(2 sum_i (a_i - b_i)^2 ln(2|H|^2/delta) / (n-1)^2) + 5 ln(2|H|^2/delta)/(n-1).
double empirical_bernstein_rhs(std::span<const double> h_losses, std::span<const double> hprime_losses,
                               std::size_t class_size, double delta);
double empirical_bernstein_rhs_from_squares(std::size_t n, double squared_sum, std::size_t class_size, double delta);

// Upper bound on inf over eta in (0, 1/2] of A eta^{1/(1-beta)} + B/eta:
// A(3-2beta)/(1-beta) ((1-beta)B/A)^{1/(2-beta)} + 2B. Requires A, B > 0 and
// beta in [0,1).
double minimizer_bound(double A, double B, double beta);

} // namespace germ

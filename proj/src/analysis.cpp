#include "germ/analysis.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace germ {

double thm2_excess_bound(std::size_t n, double rbar) {
    if (n == 0)
        throw std::invalid_argument("bound needs n >= 1");
    const double nd = static_cast<double>(n);
    return 12.0 * rbar + 3.0 * std::sqrt(2.0 * std::log(2.0 * nd) / nd) + 2.0 / nd;
}

BernsteinCertificate bernstein_min_B(const LearningProblem& problem, double beta) {
    if (!(beta >= 0.0 && beta <= 1.0))
        throw std::invalid_argument("beta must lie in [0,1]");
    const auto star = optimal_risk(problem);
    const auto& loss = problem.loss();
    const auto& dist = problem.distribution();

    BernsteinCertificate cert{beta, 0.0, star.index};
    for (HypothesisIndex h = 0; h < problem.class_size(); ++h) {
        if (h == star.index) continue;
        double mean = 0.0, second = 0.0;
        for (Outcome z = 0; z < problem.outcomes(); ++z) {
            const double x = loss(h, z) - loss(star.index, z);
            mean += dist[z] * x;
            second += dist[z] * x * x;
        }
        if (second == 0.0) continue;
        // h* minimizes risk, so mean >= 0 up to rounding.
        mean = std::max(mean, 0.0);
        double required;
        if (beta == 0.0)
            required = second;
        else if (mean == 0.0)
            required = std::numeric_limits<double>::infinity();
        else
            required = second / std::pow(mean, beta);
        cert.minimal_B = std::max(cert.minimal_B, required);
    }
    return cert;
}

double empirical_bernstein_rhs_from_squares(std::size_t n, double squared_sum, std::size_t class_size,
                                            double delta) {
    if (n < 2)
        throw std::invalid_argument("empirical Bernstein slack needs n >= 2");
    if (!(delta > 0.0))
        throw std::invalid_argument("delta must be positive");
    const double h = static_cast<double>(class_size);
    const double log_term = std::log(2.0 * h * h / delta);
    const double nm1 = static_cast<double>(n) - 1.0;
    return std::sqrt(2.0 * squared_sum * log_term / (nm1 * nm1)) + 5.0 * log_term / nm1;
}

double empirical_bernstein_rhs(std::span<const double> h_losses, std::span<const double> hprime_losses,
                               std::size_t class_size, double delta) {
    if (h_losses.size() != hprime_losses.size())
        throw std::invalid_argument("loss sequences differ in length");
    double sq = 0.0;
    for (std::size_t i = 0; i < h_losses.size(); ++i) {
        const double d = h_losses[i] - hprime_losses[i];
        sq += d * d;
    }
    return empirical_bernstein_rhs_from_squares(h_losses.size(), sq, class_size, delta);
}

double minimizer_bound(double A, double B, double beta) {
    if (!(A > 0.0) || !(B > 0.0))
        throw std::invalid_argument("A and B must be positive");
    if (!(beta >= 0.0 && beta < 1.0))
        throw std::invalid_argument("beta must lie in [0,1)");
    const double ratio = (1.0 - beta) * B / A;
    return A * (3.0 - 2.0 * beta) / (1.0 - beta) * std::pow(ratio, 1.0 / (2.0 - beta)) + 2.0 * B;
}

} // namespace germ

#include "germ/rademacher.hpp"

#include "germ/detail/enumerate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace germ {

void validate_mode(const RademacherBoundMode& mode) {
    if (const auto* user = std::get_if<UserConstant>(&mode)) {
        if (user->values.empty())
            throw std::invalid_argument("user Rademacher bounds are empty");
        for (double v : user->values)
            if (!(v >= 0.0))
                throw std::invalid_argument("user Rademacher bounds must be nonnegative");
    }
}

double detail::sup_from_sign_sums(const LossTable& loss, std::span<const long long> sign_sums, std::size_t k) {
    double best = -std::numeric_limits<double>::infinity();
    for (HypothesisIndex h = 0; h < loss.class_size(); ++h) {
        double acc = 0.0;
        for (Outcome z = 0; z < loss.outcomes(); ++z)
            acc += static_cast<double>(sign_sums[z]) * loss(h, z);
        best = std::max(best, acc);
    }
    return best / static_cast<double>(k);
}

double rademacher_sup(const LossTable& loss, std::span<const Outcome> sample, std::span<const int> signs) {
    if (signs.size() != sample.size())
        throw std::invalid_argument("sign vector length differs from sample length");
    if (sample.empty())
        throw std::invalid_argument("Rademacher sup of an empty sample");
    validate_sample(loss, sample);
    std::vector<long long> sums(loss.outcomes(), 0);
    for (std::size_t i = 0; i < sample.size(); ++i) {
        if (signs[i] != 1 && signs[i] != -1)
            throw std::invalid_argument("signs must be +1 or -1");
        sums[sample[i]] += signs[i];
    }
    return detail::sup_from_sign_sums(loss, sums, sample.size());
}

double detail::rbar_slack(std::size_t k) {
    const double kd = static_cast<double>(k);
    return std::sqrt(2.0 * std::log(2.0 * kd) / kd);
}

double rbar_from_signs(const LossTable& loss, std::span<const Outcome> sample, std::span<const int> signs) {
    return std::max(0.0, rademacher_sup(loss, sample, signs) + detail::rbar_slack(sample.size()));
}

double rbar_empirical(const LossTable& loss, std::span<const Outcome> sample, Rng& rng) {
    std::vector<int> signs(sample.size());
    for (int& s : signs) s = rng.sign();
    return rbar_from_signs(loss, sample, signs);
}

double rbar_massart(std::size_t class_size, std::size_t k) {
    if (class_size == 0 || k == 0)
        throw std::invalid_argument("Massart bound needs |H| >= 1 and k >= 1");
    return std::sqrt(2.0 * std::log(static_cast<double>(class_size)) / static_cast<double>(k));
}

double prop1_radius(std::size_t n, double delta) {
    if (n == 0)
        throw std::invalid_argument("radius needs n >= 1");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("delta must lie in (0,1)");
    return std::sqrt(2.0 * std::log(2.0 / delta) / static_cast<double>(n));
}

namespace {

// Visits every (sample, sign vector) pair with its probability.
template <class Visit>
void for_each_sign_sample(const LearningProblem& problem, std::size_t k, Visit&& visit) {
    if (k == 0)
        throw std::invalid_argument("Rademacher complexity needs k >= 1");
    const double pairs = std::pow(2.0 * static_cast<double>(problem.outcomes()), static_cast<double>(k));
    if (pairs > kEnumerationBudget)
        throw ResourceError("sign/sample enumeration exceeds budget");
    const double sign_weight = std::ldexp(1.0, -static_cast<int>(k));
    const auto& loss = problem.loss();
    std::vector<long long> sums(problem.outcomes());
    detail::for_each_sequence(problem.distribution(), k, [&](std::span<const Outcome> seq, double w) {
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
            std::fill(sums.begin(), sums.end(), 0);
            for (std::size_t i = 0; i < k; ++i)
                sums[seq[i]] += ((mask >> i) & 1u) ? 1 : -1;
            visit(detail::sup_from_sign_sums(loss, sums, k), w * sign_weight);
        }
    });
}

} // namespace

double exact_rademacher(const LearningProblem& problem, std::size_t k) {
    double total = 0.0;
    for_each_sign_sample(problem, k, [&](double sup, double w) { total += w * sup; });
    return total;
}

double prop1_exceedance(const LearningProblem& problem, std::size_t k, double delta) {
    const double truth = exact_rademacher(problem, k);
    const double radius = prop1_radius(k, delta);
    double mass = 0.0;
    for_each_sign_sample(problem, k, [&](double sup, double w) {
        if (std::abs(truth - sup) > radius) mass += w;
    });
    return mass;
}

double rbar_coverage(const LearningProblem& problem, std::size_t k) {
    const double truth = exact_rademacher(problem, k);
    const double slack = detail::rbar_slack(k);
    double mass = 0.0;
    for_each_sign_sample(problem, k, [&](double sup, double w) {
        if (std::max(0.0, sup + slack) >= truth) mass += w;
    });
    return mass;
}

double exact_rademacher_by_counts(const LearningProblem& problem, std::size_t k) {
    if (k == 0)
        throw std::invalid_argument("Rademacher complexity needs k >= 1");
    const auto probs = problem.distribution().probs();
    std::vector<Outcome> support;
    for (Outcome z = 0; z < probs.size(); ++z)
        if (probs[z] > 0.0) support.push_back(z);

    // Cells are (support outcome, sign) pairs, each with probability p_z / 2.
    const std::size_t cells = 2 * support.size();
    const double compositions = std::exp(std::lgamma(static_cast<double>(k + cells)) -
                                         std::lgamma(static_cast<double>(k + 1)) -
                                         std::lgamma(static_cast<double>(cells)));
    if (compositions > kEnumerationBudget)
        throw ResourceError("count enumeration exceeds budget");

    std::vector<double> log_cell(cells);
    for (std::size_t c = 0; c < cells; ++c) log_cell[c] = std::log(probs[support[c / 2]] / 2.0);

    const double log_kfact = std::lgamma(static_cast<double>(k) + 1.0);
    std::vector<std::size_t> counts(cells, 0);
    std::vector<long long> sums(problem.outcomes(), 0);
    double total = 0.0;

    auto recurse = [&](auto&& self, std::size_t cell, std::size_t remaining, double log_w) -> void {
        if (cell + 1 == cells) {
            counts[cell] = remaining;
            const double lw = log_w + static_cast<double>(remaining) * log_cell[cell] -
                              std::lgamma(static_cast<double>(remaining) + 1.0);
            std::fill(sums.begin(), sums.end(), 0);
            for (std::size_t c = 0; c < cells; ++c) {
                const auto n = static_cast<long long>(counts[c]);
                sums[support[c / 2]] += (c % 2 == 0) ? n : -n;
            }
            total += std::exp(lw) * detail::sup_from_sign_sums(problem.loss(), sums, k);
            return;
        }
        for (std::size_t n = 0; n <= remaining; ++n) {
            counts[cell] = n;
            self(self, cell + 1, remaining - n,
                 log_w + static_cast<double>(n) * log_cell[cell] - std::lgamma(static_cast<double>(n) + 1.0));
        }
    };
    recurse(recurse, 0, k, log_kfact);
    return total;
}

} // namespace germ

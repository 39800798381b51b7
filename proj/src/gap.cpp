#include "germ/gap.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace germ {

GapSpec GapSpec::uniform(RademacherBoundMode mode, std::size_t class_size) {
    GapSpec spec{UniformConvergence{std::move(mode)}, class_size};
    spec.validate();
    return spec;
}

GapSpec GapSpec::bernstein(std::size_t class_size) {
    GapSpec spec{EmpiricalBernstein{}, class_size};
    spec.validate();
    return spec;
}

GapSpec GapSpec::fixed(std::vector<double> deltas, std::size_t class_size) {
    GapSpec spec{FixedGap{std::move(deltas)}, class_size};
    spec.validate();
    return spec;
}

bool GapSpec::deterministic() const {
    if (const auto* uc = std::get_if<UniformConvergence>(&variant))
        return !std::holds_alternative<EmpiricalMcDiarmid>(uc->mode);
    return true;
}

void GapSpec::validate() const {
    if (class_size == 0)
        throw std::invalid_argument("gap spec needs class_size >= 1");
    if (const auto* uc = std::get_if<UniformConvergence>(&variant))
        validate_mode(uc->mode);
    if (const auto* fixed = std::get_if<FixedGap>(&variant); fixed && fixed->deltas.empty())
        throw std::invalid_argument("fixed gap sequence is empty");
}

double delta_uniform(std::size_t k, double rbar) {
    if (k == 0)
        throw std::invalid_argument("gap index starts at k = 1");
    const double kd = static_cast<double>(k);
    return 4.0 * rbar + std::sqrt(2.0 * std::log(2.0 * kd) / kd) + 2.0 / kd;
}

double delta_bernstein_from_squares(std::size_t k, double squared_sum, std::size_t class_size) {
    if (k == 0)
        throw std::invalid_argument("gap index starts at k = 1");
    if (k == 1)
        return std::numeric_limits<double>::infinity();
    const double kd = static_cast<double>(k);
    const double h = static_cast<double>(class_size);
    const double log_term = std::log(2.0 * kd * h * h);
    const double km1 = kd - 1.0;
    return std::sqrt(2.0 * squared_sum * log_term / (km1 * km1)) + 5.0 * log_term / km1 + 2.0 / kd;
}

double delta_bernstein(std::size_t k, std::span<const double> tilde_losses, std::span<const double> hat_losses,
                       std::size_t class_size) {
    if (tilde_losses.size() != k || hat_losses.size() != k)
        throw std::invalid_argument("loss sequences must have length k");
    double sq = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double d = tilde_losses[i] - hat_losses[i];
        sq += d * d;
    }
    return delta_bernstein_from_squares(k, sq, class_size);
}

} // namespace germ

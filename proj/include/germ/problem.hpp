#pragma once
// Discrete learning problems: a distribution over m indexed outcomes and a
// bounded loss table over a finite hypothesis class.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace germ {

class Philox4x32;

using HypothesisIndex = std::size_t;
using Outcome = std::size_t;
using Sample = std::vector<Outcome>;

inline constexpr double kProbabilitySumTolerance = 1e-12;

// Raised when an enumeration or search would exceed its evaluation budget.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DiscreteDistribution {
public:
    // Entries must lie in [0,1] and sum to 1 within kProbabilitySumTolerance;
    // accepted inputs are divided by their sum.
    explicit DiscreteDistribution(std::vector<double> probs);

    std::size_t size() const { return probs_.size(); }
    double operator[](Outcome z) const { return probs_[z]; }
    std::span<const double> probs() const { return probs_; }
    std::span<const double> cdf() const { return cdf_; }

private:
    std::vector<double> probs_;
    std::vector<double> cdf_;
};

// |H| x m matrix of losses in [0,1], row-major.
class LossTable {
public:
    LossTable(std::size_t class_size, std::size_t outcomes, std::vector<double> losses);
    explicit LossTable(const std::vector<std::vector<double>>& rows);

    std::size_t class_size() const { return class_size_; }
    std::size_t outcomes() const { return outcomes_; }
    double operator()(HypothesisIndex h, Outcome z) const { return losses_[h * outcomes_ + z]; }
    std::span<const double> row(HypothesisIndex h) const {
        return std::span<const double>(losses_).subspan(h * outcomes_, outcomes_);
    }

private:
    std::size_t class_size_;
    std::size_t outcomes_;
    std::vector<double> losses_;
};

class LearningProblem {
public:
    LearningProblem(DiscreteDistribution distribution, LossTable loss, std::string name = {});

    const DiscreteDistribution& distribution() const { return distribution_; }
    const LossTable& loss() const { return loss_; }
    const std::string& name() const { return name_; }
    std::size_t outcomes() const { return loss_.outcomes(); }
    std::size_t class_size() const { return loss_.class_size(); }

private:
    DiscreteDistribution distribution_;
    LossTable loss_;
    std::string name_;
};

struct OptimalRisk {
    double risk;
    HypothesisIndex index;
};

// (1/n) sum_i loss(h, z_i). Throws std::invalid_argument on an empty sample.
double empirical_risk(const LossTable& loss, HypothesisIndex h, std::span<const Outcome> sample);

double population_risk(const LearningProblem& problem, HypothesisIndex h);

// Lowest population risk over the class; ties go to the lowest index.
OptimalRisk optimal_risk(const LearningProblem& problem);

// n i.i.d. draws by inverse CDF; consumes exactly n generator outputs.
Sample draw_sample(const DiscreteDistribution& distribution, std::size_t n, Philox4x32& rng);

void validate_hypothesis(const LossTable& loss, HypothesisIndex h);
void validate_sample(const LossTable& loss, std::span<const Outcome> sample);

// JSON document {"name": str, "probs": [...], "losses": [[...], ...]}.
LearningProblem parse_problem_json(std::string_view text);
std::string problem_to_json(const LearningProblem& problem);
LearningProblem load_problem(const std::filesystem::path& path);

} // namespace germ

#pragma once
// Greedy gated ERM. At each step k the ERM over the prefix z_{1:k} replaces
// the incumbent only when its empirical risk is lower by at least delta_k.

#include "germ/gap.hpp"
#include "germ/problem.hpp"
#include "germ/rng.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace germ {

struct StepRecord {
    std::size_t k = 0;
    HypothesisIndex erm_index = 0;
    HypothesisIndex chosen_index = 0;
    double delta = 0.0;
    // Rademacher bound used in delta (uniform-convergence gaps only, else NaN).
    double rbar = 0.0;
    double erm_empirical_loss = 0.0;
    double incumbent_empirical_loss = 0.0;
    bool updated = false;
};

struct Trajectory {
    HypothesisIndex initial_index = 0;
    std::vector<StepRecord> steps;

    // Output after n steps; n = 0 gives the initial hypothesis.
    HypothesisIndex chosen_at(std::size_t n) const { return n == 0 ? initial_index : steps.at(n - 1).chosen_index; }
    HypothesisIndex final_index() const { return chosen_at(steps.size()); }
};

// Deterministic map from (loss table, sample prefix) to a hypothesis.
using CustomRule = std::function<HypothesisIndex(const LossTable&, std::span<const Outcome>)>;

class LearnerRule {
public:
    // Argmin of cumulative loss, ties to the lowest index.
    static LearnerRule erm_lowest_index() { return LearnerRule("erm", {}); }
    static LearnerRule custom(std::string name, CustomRule rule) { return LearnerRule(std::move(name), std::move(rule)); }

    bool is_erm() const { return !rule_; }
    const std::string& name() const { return name_; }
    HypothesisIndex operator()(const LossTable& loss, std::span<const Outcome> prefix) const;

private:
    LearnerRule(std::string name, CustomRule rule) : name_(std::move(name)), rule_(std::move(rule)) {}
    std::string name_;
    CustomRule rule_;
};

HypothesisIndex erm(const LossTable& loss, std::span<const Outcome> sample_prefix);

// One GERM run advanced an outcome at a time. Copyable, so enumeration can
// branch from any prefix state. Holds references to the problem, gap, and
// learner, which must outlive it.
class GermStepper {
public:
    GermStepper(const LearningProblem& problem, const GapSpec& gap, const LearnerRule& learner,
                HypothesisIndex initial, std::size_t start_step = 1);

    // Consumes z_k. rng is required only for the empirical McDiarmid bound,
    // which draws exactly k signs at step k.
    const StepRecord& step(Outcome z, Rng* rng = nullptr);

    std::size_t k() const { return k_; }
    HypothesisIndex incumbent() const { return incumbent_; }
    HypothesisIndex erm_index() const { return erm_; }
    const StepRecord& last() const { return last_; }
    std::span<const std::size_t> counts() const { return counts_; }

private:
    double current_rbar(Rng* rng);

    const LearningProblem* problem_;
    const GapSpec* gap_;
    const LearnerRule* learner_;
    std::size_t start_;
    std::size_t k_ = 0;
    HypothesisIndex incumbent_;
    HypothesisIndex erm_;
    std::vector<double> cumulative_;
    std::vector<std::size_t> counts_;
    std::vector<Outcome> prefix_;
    std::vector<long long> sign_sums_;
    StepRecord last_;
};

Trajectory run_germ(const LearningProblem& problem, std::span<const Outcome> sample, const GapSpec& gap,
                    const LearnerRule& learner, HypothesisIndex initial, Rng& rng);

// Gating starts at step start_step; earlier steps keep the initial hypothesis.
Trajectory run_germ_from_step(const LearningProblem& problem, std::span<const Outcome> sample, const GapSpec& gap,
                              const LearnerRule& learner, HypothesisIndex initial, std::size_t start_step, Rng& rng);

// JSON array of step records; non-finite numbers become null.
std::string trajectory_to_json(const Trajectory& trajectory);

} // namespace germ

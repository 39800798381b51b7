#include "germ/germ.hpp"

#include "germ/detail/enumerate.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace germ {

HypothesisIndex LearnerRule::operator()(const LossTable& loss, std::span<const Outcome> prefix) const {
    if (!rule_) return erm(loss, prefix);
    const HypothesisIndex h = rule_(loss, prefix);
    validate_hypothesis(loss, h);
    return h;
}

HypothesisIndex erm(const LossTable& loss, std::span<const Outcome> sample_prefix) {
    if (sample_prefix.empty())
        throw std::invalid_argument("ERM over an empty prefix");
    validate_sample(loss, sample_prefix);
    HypothesisIndex best = 0;
    double best_sum = std::numeric_limits<double>::infinity();
    for (HypothesisIndex h = 0; h < loss.class_size(); ++h) {
        double sum = 0.0;
        for (Outcome z : sample_prefix) sum += loss(h, z);
        if (sum < best_sum) {
            best_sum = sum;
            best = h;
        }
    }
    return best;
}

GermStepper::GermStepper(const LearningProblem& problem, const GapSpec& gap, const LearnerRule& learner,
                         HypothesisIndex initial, std::size_t start_step)
    : problem_(&problem), gap_(&gap), learner_(&learner), start_(start_step), incumbent_(initial), erm_(initial),
      cumulative_(problem.class_size(), 0.0), counts_(problem.outcomes(), 0), sign_sums_(problem.outcomes(), 0) {
    validate_hypothesis(problem.loss(), initial);
    gap.validate();
    if (gap.class_size != problem.class_size())
        throw std::invalid_argument("gap class size differs from the problem's class size");
    if (start_step == 0)
        throw std::invalid_argument("gating starts at step 1 or later");
}

double GermStepper::current_rbar(Rng* rng) {
    const auto& mode = std::get<UniformConvergence>(gap_->variant).mode;
    if (std::holds_alternative<MassartDeterministic>(mode))
        return rbar_massart(gap_->class_size, k_);
    if (const auto* user = std::get_if<UserConstant>(&mode)) {
        if (user->values.empty())
            throw std::invalid_argument("user Rademacher bounds are empty");
        return user->values[std::min(k_, user->values.size()) - 1];
    }
    if (rng == nullptr)
        throw std::invalid_argument("empirical Rademacher bound needs a generator");
    std::fill(sign_sums_.begin(), sign_sums_.end(), 0);
    for (Outcome z : prefix_) sign_sums_[z] += rng->sign();
    return std::max(0.0, detail::sup_from_sign_sums(problem_->loss(), sign_sums_, k_) + detail::rbar_slack(k_));
}

const StepRecord& GermStepper::step(Outcome z, Rng* rng) {
    const auto& loss = problem_->loss();
    if (z >= loss.outcomes())
        throw std::invalid_argument("outcome index out of range");
    ++k_;
    ++counts_[z];
    prefix_.push_back(z);
    for (HypothesisIndex h = 0; h < cumulative_.size(); ++h) cumulative_[h] += loss(h, z);

    if (learner_->is_erm()) {
        HypothesisIndex best = 0;
        for (HypothesisIndex h = 1; h < cumulative_.size(); ++h)
            if (cumulative_[h] < cumulative_[best]) best = h;
        erm_ = best;
    } else {
        erm_ = (*learner_)(loss, prefix_);
    }

    const double kd = static_cast<double>(k_);
    StepRecord rec;
    rec.k = k_;
    rec.erm_index = erm_;
    rec.erm_empirical_loss = cumulative_[erm_] / kd;
    rec.incumbent_empirical_loss = cumulative_[incumbent_] / kd;
    rec.rbar = std::numeric_limits<double>::quiet_NaN();

    if (k_ < start_) {
        rec.delta = std::numeric_limits<double>::infinity();
    } else if (std::holds_alternative<UniformConvergence>(gap_->variant)) {
        rec.rbar = current_rbar(rng);
        rec.delta = delta_uniform(k_, rec.rbar);
    } else if (std::holds_alternative<EmpiricalBernstein>(gap_->variant)) {
        double sq = 0.0;
        for (Outcome o = 0; o < counts_.size(); ++o) {
            const double d = loss(erm_, o) - loss(incumbent_, o);
            sq += static_cast<double>(counts_[o]) * d * d;
        }
        rec.delta = delta_bernstein_from_squares(k_, sq, gap_->class_size);
    } else {
        const auto& deltas = std::get<FixedGap>(gap_->variant).deltas;
        if (deltas.empty())
            throw std::invalid_argument("fixed gap sequence is empty");
        rec.delta = deltas[std::min(k_, deltas.size()) - 1];
    }

    rec.updated = rec.erm_empirical_loss - rec.incumbent_empirical_loss <= -rec.delta;
    if (rec.updated) incumbent_ = erm_;
    rec.chosen_index = incumbent_;
    last_ = rec;
    return last_;
}

Trajectory run_germ_from_step(const LearningProblem& problem, std::span<const Outcome> sample, const GapSpec& gap,
                              const LearnerRule& learner, HypothesisIndex initial, std::size_t start_step, Rng& rng) {
    if (sample.empty())
        throw std::invalid_argument("GERM needs a nonempty sample");
    if (start_step < 1 || start_step > sample.size())
        throw std::invalid_argument("start step outside [1, n]");
    validate_sample(problem.loss(), sample);
    GermStepper stepper(problem, gap, learner, initial, start_step);
    Trajectory traj;
    traj.initial_index = initial;
    traj.steps.reserve(sample.size());
    for (Outcome z : sample) traj.steps.push_back(stepper.step(z, &rng));
    return traj;
}

Trajectory run_germ(const LearningProblem& problem, std::span<const Outcome> sample, const GapSpec& gap,
                    const LearnerRule& learner, HypothesisIndex initial, Rng& rng) {
    return run_germ_from_step(problem, sample, gap, learner, initial, 1, rng);
}

namespace {

nlohmann::json finite_or_null(double v) {
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

} // namespace

std::string trajectory_to_json(const Trajectory& trajectory) {
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& s : trajectory.steps) {
        steps.push_back({{"k", s.k},
                         {"erm_index", s.erm_index},
                         {"chosen_index", s.chosen_index},
                         {"delta", finite_or_null(s.delta)},
                         {"rbar", finite_or_null(s.rbar)},
                         {"erm_empirical_loss", s.erm_empirical_loss},
                         {"incumbent_empirical_loss", s.incumbent_empirical_loss},
                         {"updated", s.updated}});
    }
    return steps.dump(2);
}

} // namespace germ

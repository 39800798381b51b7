#include "germ/problem.hpp"

#include "germ/rng.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace germ {

using nlohmann::json;

DiscreteDistribution::DiscreteDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty())
        throw std::invalid_argument("distribution needs at least one outcome");
    double sum = 0.0;
    for (double p : probs_) {
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument("probability outside [0,1]");
        sum += p;
    }
    if (std::abs(sum - 1.0) > kProbabilitySumTolerance)
        throw std::invalid_argument("probabilities do not sum to 1");
    if (sum != 1.0)
        for (double& p : probs_) p /= sum;

    cdf_.resize(probs_.size());
    double acc = 0.0;
    for (std::size_t z = 0; z < probs_.size(); ++z) {
        acc += probs_[z];
        cdf_[z] = acc;
    }
    // The last outcome with positive mass closes the CDF at exactly 1.
    for (std::size_t z = probs_.size(); z-- > 0;) {
        if (probs_[z] > 0.0) {
            for (std::size_t j = z; j < cdf_.size(); ++j) cdf_[j] = 1.0;
            break;
        }
    }
}

LossTable::LossTable(std::size_t class_size, std::size_t outcomes, std::vector<double> losses)
    : class_size_(class_size), outcomes_(outcomes), losses_(std::move(losses)) {
    if (class_size_ == 0 || outcomes_ == 0)
        throw std::invalid_argument("loss table needs at least one hypothesis and one outcome");
    if (losses_.size() != class_size_ * outcomes_)
        throw std::invalid_argument("loss table size mismatch");
    for (double v : losses_)
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument("loss outside [0,1]");
}

namespace {

std::vector<double> flatten(const std::vector<std::vector<double>>& rows) {
    if (rows.empty() || rows.front().empty())
        throw std::invalid_argument("loss table needs at least one hypothesis and one outcome");
    std::vector<double> flat;
    flat.reserve(rows.size() * rows.front().size());
    for (const auto& r : rows) {
        if (r.size() != rows.front().size())
            throw std::invalid_argument("ragged loss table");
        flat.insert(flat.end(), r.begin(), r.end());
    }
    return flat;
}

} // namespace

LossTable::LossTable(const std::vector<std::vector<double>>& rows)
    : LossTable(rows.size(), rows.empty() ? 0 : rows.front().size(), flatten(rows)) {}

LearningProblem::LearningProblem(DiscreteDistribution distribution, LossTable loss, std::string name)
    : distribution_(std::move(distribution)), loss_(std::move(loss)), name_(std::move(name)) {
    if (distribution_.size() != loss_.outcomes())
        throw std::invalid_argument("distribution size does not match loss table columns");
}

void validate_hypothesis(const LossTable& loss, HypothesisIndex h) {
    if (h >= loss.class_size())
        throw std::invalid_argument("hypothesis index out of range");
}

void validate_sample(const LossTable& loss, std::span<const Outcome> sample) {
    for (Outcome z : sample)
        if (z >= loss.outcomes())
            throw std::invalid_argument("outcome index out of range");
}

double empirical_risk(const LossTable& loss, HypothesisIndex h, std::span<const Outcome> sample) {
    if (sample.empty())
        throw std::invalid_argument("empirical risk of an empty sample");
    validate_hypothesis(loss, h);
    validate_sample(loss, sample);
    double sum = 0.0;
    for (Outcome z : sample) sum += loss(h, z);
    return sum / static_cast<double>(sample.size());
}

double population_risk(const LearningProblem& problem, HypothesisIndex h) {
    validate_hypothesis(problem.loss(), h);
    double risk = 0.0;
    for (Outcome z = 0; z < problem.outcomes(); ++z)
        risk += problem.distribution()[z] * problem.loss()(h, z);
    return risk;
}

OptimalRisk optimal_risk(const LearningProblem& problem) {
    OptimalRisk best{population_risk(problem, 0), 0};
    for (HypothesisIndex h = 1; h < problem.class_size(); ++h) {
        const double r = population_risk(problem, h);
        if (r < best.risk) best = {r, h};
    }
    return best;
}

Sample draw_sample(const DiscreteDistribution& distribution, std::size_t n, Philox4x32& rng) {
    const auto cdf = distribution.cdf();
    Sample sample(n);
    for (auto& z : sample) {
        const double u = rng.uniform();
        z = static_cast<Outcome>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    }
    return sample;
}

LearningProblem parse_problem_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("malformed problem JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("probs") || !doc.contains("losses"))
        throw std::invalid_argument("problem JSON needs \"probs\" and \"losses\"");
    try {
        auto probs = doc.at("probs").get<std::vector<double>>();
        auto rows = doc.at("losses").get<std::vector<std::vector<double>>>();
        std::string name = doc.value("name", std::string{});
        return LearningProblem(DiscreteDistribution(std::move(probs)), LossTable(rows), std::move(name));
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("problem JSON has wrong field types: ") + e.what());
    }
}

std::string problem_to_json(const LearningProblem& problem) {
    json doc;
    doc["name"] = problem.name();
    doc["probs"] = std::vector<double>(problem.distribution().probs().begin(),
                                       problem.distribution().probs().end());
    json rows = json::array();
    for (HypothesisIndex h = 0; h < problem.class_size(); ++h) {
        const auto r = problem.loss().row(h);
        rows.push_back(std::vector<double>(r.begin(), r.end()));
    }
    doc["losses"] = std::move(rows);
    return doc.dump(2);
}

LearningProblem load_problem(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open problem file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_problem_json(buf.str());
}

} // namespace germ

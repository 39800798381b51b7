#pragma once
// Exact expected-risk curves by enumeration of Z^n, monotonicity checks, and
// a search for problems where plain ERM has a non-monotone risk curve.

#include "germ/germ.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace germ {

struct GermAlgorithm {
    GapSpec gap;
    LearnerRule learner = LearnerRule::erm_lowest_index();
    HypothesisIndex initial = 0;
    std::size_t start_step = 1;
};

// The lowest-index ERM at every n, with no gating.
struct PlainErm {};

using Algorithm = std::variant<GermAlgorithm, PlainErm>;

// Canonical text form, e.g. "erm", "germ:massart", "germ:bernstein:init=1".
std::string describe(const Algorithm& algo);
// Inverse of describe() for the built-in gap modes; class_size fills GapSpec.
Algorithm parse_algorithm(const std::string& text, std::size_t class_size);

bool is_deterministic(const Algorithm& algo);

enum class CurveKind { Exact, MonteCarlo };

// values[i] is the expected risk at sample size ns[i]. Exact GERM curves
// start at n = 0 (the initial hypothesis); exact ERM curves start at n = 1.
struct RiskCurve {
    std::vector<std::size_t> ns;
    std::vector<double> values;
    std::vector<double> std_errors; // empty for exact curves
    CurveKind kind = CurveKind::Exact;
    std::string problem;
    std::string algo;
    std::optional<std::uint64_t> seed;
    std::size_t replications = 0;

    // Monte Carlo curve whose standard errors are reported as 0 because
    // fewer than two replications were run.
    bool degenerate_stderr() const { return kind == CurveKind::MonteCarlo && replications < 2; }
};

struct Violation {
    std::size_t n;
    double increase;
};

enum class Verdict { Monotone, Violated };

struct MonotonicityReport {
    std::vector<Violation> violations;
    double max_increase = 0.0;
    Verdict verdict = Verdict::Monotone;
    double tolerance = 0.0;
    // True when tolerance is a multiple of the pooled standard error of the
    // two adjacent points rather than an absolute value.
    bool pooled_stderr = false;
};

inline constexpr double kExactMonotoneTolerance = 1e-12;

// Sequences enumerated is m^{n_max}; throws ResourceError beyond kEnumerationBudget
// and std::invalid_argument for randomized algorithms. Leading outcomes are
// split across workers; the reduction order is fixed, so the result does not
// depend on the worker count.
RiskCurve exact_risk_curve(const LearningProblem& problem, const Algorithm& algo, std::size_t n_max,
                           std::size_t workers = 1);

// Flags every adjacent increase values[i] - values[i-1] > tolerance.
MonotonicityReport check_monotone(const RiskCurve& curve, double tolerance);
// Same, with tolerance z * sqrt(se[i]^2 + se[i-1]^2) at each step.
MonotonicityReport check_monotone_pooled(const RiskCurve& curve, double z);

struct WitnessSearchResult {
    std::optional<LearningProblem> problem;
    std::size_t attempts = 0;
};

// Draws random problems with losses and probabilities on a 0.05 grid and
// returns the first whose exact ERM curve up to n_probe rises by more than 1e-9.
WitnessSearchResult find_erm_nonmonotone(std::size_t outcomes, std::size_t class_size, std::size_t n_probe,
                                         std::size_t search_budget, Rng& rng);

// Exact probability over Z^n that the pairwise empirical Bernstein inequality
// holds for every ordered pair of hypotheses simultaneously.
double exact_bernstein_pairwise_coverage(const LearningProblem& problem, std::size_t n, double delta);

// CSV with header n,value,stderr,kind,problem,algo,seed.
void write_curve_csv(const RiskCurve& curve, std::ostream& out);
RiskCurve read_curve_csv(std::istream& in);

std::string format_double(double v);

} // namespace germ

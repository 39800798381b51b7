#pragma once
// Seeded Monte Carlo estimates of risk curves, bound coverage, and excess-risk
// decay. Replication r draws everything from Philox stream (base_seed, r) and
// results are reduced in replication order, so outputs do not depend on the
// number of workers.

#include "germ/oracle.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace germ {

struct McConfig {
    std::size_t replications = 1;
    std::size_t n_max = 1;
    std::uint64_t base_seed = 0;
    std::vector<std::size_t> grid; // sorted, within [1, n_max]
    std::size_t workers = 1;

    void validate() const;
};

Rng replication_rng(std::uint64_t base_seed, std::size_t replication);

// Per-grid-n mean and standard error of L(h_n) over replications. Each
// replication draws one sample of length n_max and reads every grid point
// off the same trajectory.
RiskCurve mc_risk_curve(const LearningProblem& problem, const Algorithm& algo, const McConfig& cfg);

struct Thm2ExcessBound {};
struct Prop1Deviation {
    double delta;
};
struct EmpBernsteinPairwise {
    double delta;
};

using BoundEvent = std::variant<Thm2ExcessBound, Prop1Deviation, EmpBernsteinPairwise>;

// Registered names: "thm2", "prop1", "ebern". Throws std::invalid_argument otherwise.
BoundEvent make_event(const std::string& name, double delta);
std::string event_name(const BoundEvent& event);
// Theoretical probability floor of the event at sample size n.
double event_level(const BoundEvent& event, std::size_t n);

// level - z * sqrt(level (1 - level) / replications).
double coverage_floor(double level, std::size_t replications, double z = 3.0);

struct CoveragePoint {
    std::size_t n = 0;
    double coverage = 0.0;
    double level = 0.0;
    double floor = 0.0;
};

struct CoverageReport {
    std::string event;
    double delta = 0.0;
    std::size_t replications = 0;
    std::vector<CoveragePoint> points;

    bool passed() const;
};

// Fraction of replications in which the event holds at each grid n.
// Thm2ExcessBound needs a uniform-convergence GERM algorithm. Prop1Deviation
// compares against the exact R_n from exact_rademacher_by_counts and is
// vacuous (always holds) for delta >= 1.
CoverageReport mc_bound_coverage(const LearningProblem& problem, const Algorithm& algo, const BoundEvent& event,
                                 const McConfig& cfg);

struct DecayFit {
    std::vector<std::size_t> ns;
    std::vector<double> mean_excess;
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0; // RMS residual of the log-log fit
    std::size_t points = 0;
    bool degenerate = false; // fewer than two grid points with positive excess
};

// Least-squares slope of log(mean excess risk) against log(n) over grid points
// with positive mean excess. The grid must span at least a decade.
DecayFit excess_risk_decay(const LearningProblem& problem, const Algorithm& algo, const McConfig& cfg);

// Default slope ceiling for a (beta, B)-Bernstein problem: -1/(2-beta) + 0.15.
double decay_slope_threshold(double beta);

// CSV with header n,event,level,coverage,replications.
void write_coverage_csv(const std::vector<CoverageReport>& reports, std::ostream& out);

} // namespace germ

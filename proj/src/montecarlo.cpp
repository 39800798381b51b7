#include "germ/montecarlo.hpp"

#include "germ/analysis.hpp"
#include "germ/detail/enumerate.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace germ {

void McConfig::validate() const {
    if (replications == 0)
        throw std::invalid_argument("need at least one replication");
    if (n_max == 0)
        throw std::invalid_argument("n_max must be >= 1");
    if (grid.empty())
        throw std::invalid_argument("checkpoint grid is empty");
    if (!std::is_sorted(grid.begin(), grid.end()) || std::adjacent_find(grid.begin(), grid.end()) != grid.end())
        throw std::invalid_argument("checkpoint grid must be strictly increasing");
    if (grid.front() < 1 || grid.back() > n_max)
        throw std::invalid_argument("checkpoint grid outside [1, n_max]");
    if (workers == 0)
        throw std::invalid_argument("need at least one worker");
}

Rng replication_rng(std::uint64_t base_seed, std::size_t replication) {
    return Rng(base_seed, static_cast<std::uint64_t>(replication));
}

namespace {

// Runs fn(r, row) for every replication, each row of the given width, split
// into contiguous blocks across workers. Rows come back in replication order.
template <class Fn>
std::vector<double> run_replications(const McConfig& cfg, std::size_t width, Fn&& fn) {
    std::vector<double> table(cfg.replications * width);
    auto block = [&](std::size_t begin, std::size_t end) {
        for (std::size_t r = begin; r < end; ++r)
            fn(r, std::span<double>(table).subspan(r * width, width));
    };
    const std::size_t workers = std::max<std::size_t>(1, std::min(cfg.workers, cfg.replications));
    if (workers == 1) {
        block(0, cfg.replications);
        return table;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    const std::size_t chunk = (cfg.replications + workers - 1) / workers;
    for (std::size_t t = 0; t < workers; ++t) {
        const std::size_t begin = std::min(cfg.replications, t * chunk);
        const std::size_t end = std::min(cfg.replications, begin + chunk);
        pool.emplace_back([&, t, begin, end] {
            try {
                block(begin, end);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return table;
}

struct ColumnStats {
    std::vector<double> mean;
    std::vector<double> std_error;
};

ColumnStats column_stats(const std::vector<double>& table, std::size_t replications, std::size_t width) {
    ColumnStats s{std::vector<double>(width, 0.0), std::vector<double>(width, 0.0)};
    const double R = static_cast<double>(replications);
    for (std::size_t c = 0; c < width; ++c) {
        // Accumulate deviations from the first replication.
        const double shift = table[c];
        double sum = 0.0;
        for (std::size_t r = 0; r < replications; ++r) sum += table[r * width + c] - shift;
        const double mean = shift + sum / R;
        double ss = 0.0;
        for (std::size_t r = 0; r < replications; ++r) {
            const double d = table[r * width + c] - mean;
            ss += d * d;
        }
        s.mean[c] = mean;
        s.std_error[c] = replications > 1 ? std::sqrt(ss / (R - 1.0) / R) : 0.0;
    }
    return s;
}

// Hypothesis output at every grid point, one row per replication.
template <class Record>
void trace_algorithm(const LearningProblem& problem, const Algorithm& algo, const McConfig& cfg, std::size_t r,
                     Record&& record) {
    Rng rng = replication_rng(cfg.base_seed, r);
    const Sample sample = draw_sample(problem.distribution(), cfg.n_max, rng);
    const bool plain = std::holds_alternative<PlainErm>(algo);
    static const GermAlgorithm erm_only{GapSpec{FixedGap{{std::numeric_limits<double>::infinity()}}, 1}};
    GermAlgorithm g = plain ? erm_only : std::get<GermAlgorithm>(algo);
    if (plain) g.gap.class_size = problem.class_size();
    GermStepper stepper(problem, g.gap, g.learner, g.initial, g.start_step);
    std::size_t next = 0;
    for (std::size_t k = 1; k <= cfg.n_max && next < cfg.grid.size(); ++k) {
        const auto& rec = stepper.step(sample[k - 1], &rng);
        if (k == cfg.grid[next]) {
            record(next, rec, plain ? rec.erm_index : rec.chosen_index);
            ++next;
        }
    }
}

std::vector<double> population_risks(const LearningProblem& problem) {
    std::vector<double> risk(problem.class_size());
    for (HypothesisIndex h = 0; h < risk.size(); ++h) risk[h] = population_risk(problem, h);
    return risk;
}

} // namespace

RiskCurve mc_risk_curve(const LearningProblem& problem, const Algorithm& algo, const McConfig& cfg) {
    cfg.validate();
    const auto risk = population_risks(problem);
    const std::size_t width = cfg.grid.size();
    const auto table = run_replications(cfg, width, [&](std::size_t r, std::span<double> row) {
        trace_algorithm(problem, algo, cfg, r,
                        [&](std::size_t col, const StepRecord&, HypothesisIndex h) { row[col] = risk[h]; });
    });
    const auto stats = column_stats(table, cfg.replications, width);

    RiskCurve curve;
    curve.kind = CurveKind::MonteCarlo;
    curve.ns = cfg.grid;
    curve.values = stats.mean;
    curve.std_errors = stats.std_error;
    curve.problem = problem.name();
    curve.algo = describe(algo);
    curve.seed = cfg.base_seed;
    curve.replications = cfg.replications;
    return curve;
}

BoundEvent make_event(const std::string& name, double delta) {
    if (name == "thm2") return Thm2ExcessBound{};
    if (!(delta > 0.0))
        throw std::invalid_argument("event level delta must be positive");
    if (name == "prop1") return Prop1Deviation{delta};
    if (name == "ebern") {
        if (!(delta < 1.0))
            throw std::invalid_argument("empirical Bernstein delta must lie in (0,1)");
        return EmpBernsteinPairwise{delta};
    }
    throw std::invalid_argument("unknown bound event: " + name);
}

std::string event_name(const BoundEvent& event) {
    if (std::holds_alternative<Thm2ExcessBound>(event)) return "thm2";
    if (std::holds_alternative<Prop1Deviation>(event)) return "prop1";
    return "ebern";
}

double event_level(const BoundEvent& event, std::size_t n) {
    if (std::holds_alternative<Thm2ExcessBound>(event))
        return std::max(0.0, 1.0 - 2.0 / static_cast<double>(n));
    const double delta = std::visit(
        [](const auto& e) -> double {
            if constexpr (requires { e.delta; })
                return e.delta;
            else
                return 0.0;
        },
        event);
    return std::max(0.0, 1.0 - delta);
}

double coverage_floor(double level, std::size_t replications, double z) {
    return level - z * std::sqrt(level * (1.0 - level) / static_cast<double>(replications));
}

bool CoverageReport::passed() const {
    return std::all_of(points.begin(), points.end(), [](const CoveragePoint& p) { return p.coverage >= p.floor; });
}

CoverageReport mc_bound_coverage(const LearningProblem& problem, const Algorithm& algo, const BoundEvent& event,
                                 const McConfig& cfg) {
    cfg.validate();
    const std::size_t width = cfg.grid.size();
    const auto risk = population_risks(problem);
    const double best = optimal_risk(problem).risk;
    const auto& loss = problem.loss();
    const std::size_t H = problem.class_size();
    const std::size_t m = problem.outcomes();

    std::vector<double> table;
    if (std::holds_alternative<Thm2ExcessBound>(event)) {
        const auto* g = std::get_if<GermAlgorithm>(&algo);
        if (g == nullptr || !std::holds_alternative<UniformConvergence>(g->gap.variant))
            throw std::invalid_argument("the excess-risk bound event needs a uniform-convergence GERM algorithm");
        table = run_replications(cfg, width, [&](std::size_t r, std::span<double> row) {
            trace_algorithm(problem, algo, cfg, r, [&](std::size_t col, const StepRecord& rec, HypothesisIndex h) {
                const double excess = risk[h] - best;
                row[col] = excess <= thm2_excess_bound(rec.k, rec.rbar) ? 1.0 : 0.0;
            });
        });
    } else if (const auto* prop = std::get_if<Prop1Deviation>(&event)) {
        const bool vacuous = prop->delta >= 1.0;
        std::vector<double> truth(width, 0.0), radius(width, 0.0);
        if (!vacuous)
            for (std::size_t c = 0; c < width; ++c) {
                truth[c] = exact_rademacher_by_counts(problem, cfg.grid[c]);
                radius[c] = prop1_radius(cfg.grid[c], prop->delta);
            }
        table = run_replications(cfg, width, [&](std::size_t r, std::span<double> row) {
            if (vacuous) {
                std::fill(row.begin(), row.end(), 1.0);
                return;
            }
            Rng rng = replication_rng(cfg.base_seed, r);
            const Sample sample = draw_sample(problem.distribution(), cfg.n_max, rng);
            std::vector<long long> sums(m);
            for (std::size_t c = 0; c < width; ++c) {
                const std::size_t n = cfg.grid[c];
                std::fill(sums.begin(), sums.end(), 0);
                for (std::size_t i = 0; i < n; ++i) sums[sample[i]] += rng.sign();
                const double sup = detail::sup_from_sign_sums(loss, sums, n);
                row[c] = std::abs(truth[c] - sup) <= radius[c] ? 1.0 : 0.0;
            }
        });
    } else {
        const double delta = std::get<EmpBernsteinPairwise>(event).delta;
        if (cfg.grid.front() < 2)
            throw std::invalid_argument("pairwise empirical Bernstein needs n >= 2");
        table = run_replications(cfg, width, [&](std::size_t r, std::span<double> row) {
            Rng rng = replication_rng(cfg.base_seed, r);
            const Sample sample = draw_sample(problem.distribution(), cfg.n_max, rng);
            std::vector<std::size_t> counts(m, 0);
            std::size_t filled = 0;
            for (std::size_t c = 0; c < width; ++c) {
                const std::size_t n = cfg.grid[c];
                for (; filled < n; ++filled) ++counts[sample[filled]];
                bool holds = true;
                for (HypothesisIndex h = 0; h < H && holds; ++h)
                    for (HypothesisIndex g = 0; g < H && holds; ++g) {
                        if (g == h) continue;
                        double diff = 0.0, sq = 0.0;
                        for (Outcome z = 0; z < m; ++z) {
                            const double d = loss(h, z) - loss(g, z);
                            const double cz = static_cast<double>(counts[z]);
                            diff += cz * d;
                            sq += cz * d * d;
                        }
                        const double empirical_gap = diff / static_cast<double>(n);
                        holds = risk[h] - risk[g] <=
                                empirical_gap + empirical_bernstein_rhs_from_squares(n, sq, H, delta);
                    }
                row[c] = holds ? 1.0 : 0.0;
            }
        });
    }

    const auto stats = column_stats(table, cfg.replications, width);
    CoverageReport report;
    report.event = event_name(event);
    report.delta = std::visit(
        [](const auto& e) -> double {
            if constexpr (requires { e.delta; })
                return e.delta;
            else
                return 0.0;
        },
        event);
    report.replications = cfg.replications;
    for (std::size_t c = 0; c < width; ++c) {
        const double level = event_level(event, cfg.grid[c]);
        report.points.push_back({cfg.grid[c], stats.mean[c], level, coverage_floor(level, cfg.replications)});
    }
    return report;
}

DecayFit excess_risk_decay(const LearningProblem& problem, const Algorithm& algo, const McConfig& cfg) {
    cfg.validate();
    if (static_cast<double>(cfg.grid.back()) < 10.0 * static_cast<double>(cfg.grid.front()))
        throw std::invalid_argument("decay fit needs a grid spanning at least one decade");
    const auto risk = population_risks(problem);
    const double best = optimal_risk(problem).risk;
    const std::size_t width = cfg.grid.size();
    const auto table = run_replications(cfg, width, [&](std::size_t r, std::span<double> row) {
        trace_algorithm(problem, algo, cfg, r,
                        [&](std::size_t col, const StepRecord&, HypothesisIndex h) { row[col] = risk[h] - best; });
    });
    const auto stats = column_stats(table, cfg.replications, width);

    DecayFit fit;
    fit.ns = cfg.grid;
    fit.mean_excess = stats.mean;
    std::vector<double> xs, ys;
    for (std::size_t c = 0; c < width; ++c) {
        if (stats.mean[c] > 0.0) {
            xs.push_back(std::log(static_cast<double>(cfg.grid[c])));
            ys.push_back(std::log(stats.mean[c]));
        }
    }
    fit.points = xs.size();
    if (xs.size() < 2) {
        fit.degenerate = true;
        return fit;
    }
    const double N = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= N;
    my /= N;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double rss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double e = ys[i] - (fit.intercept + fit.slope * xs[i]);
        rss += e * e;
    }
    fit.residual = std::sqrt(rss / N);
    return fit;
}

double decay_slope_threshold(double beta) {
    if (!(beta >= 0.0 && beta <= 1.0))
        throw std::invalid_argument("beta must lie in [0,1]");
    return -1.0 / (2.0 - beta) + 0.15;
}

void write_coverage_csv(const std::vector<CoverageReport>& reports, std::ostream& out) {
    out << "n,event,level,coverage,replications\n";
    for (const auto& rep : reports)
        for (const auto& p : rep.points)
            out << p.n << ',' << rep.event << ',' << format_double(p.level) << ',' << format_double(p.coverage) << ','
                << rep.replications << '\n';
}

} // namespace germ

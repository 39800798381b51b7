#include "germ/oracle.hpp"

#include "germ/analysis.hpp"
#include "germ/detail/enumerate.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace germ {

namespace {

std::string join_values(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ';';
        out += format_double(values[i]);
    }
    return out;
}

std::vector<double> split_values(const std::string& text) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';')) {
        double v = 0.0;
        const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
        if (res.ec != std::errc{} || res.ptr != item.data() + item.size())
            throw std::invalid_argument("bad number in algorithm spec: " + item);
        values.push_back(v);
    }
    if (values.empty())
        throw std::invalid_argument("empty value list in algorithm spec");
    return values;
}

std::size_t parse_count(const std::string& text) {
    std::size_t v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw std::invalid_argument("bad integer: " + text);
    return v;
}

} // namespace

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string describe(const Algorithm& algo) {
    if (std::holds_alternative<PlainErm>(algo)) return "erm";
    const auto& g = std::get<GermAlgorithm>(algo);
    std::string out = "germ:";
    if (const auto* uc = std::get_if<UniformConvergence>(&g.gap.variant)) {
        if (std::holds_alternative<MassartDeterministic>(uc->mode))
            out += "massart";
        else if (std::holds_alternative<EmpiricalMcDiarmid>(uc->mode))
            out += "empirical";
        else
            out += "constant=" + join_values(std::get<UserConstant>(uc->mode).values);
    } else if (std::holds_alternative<EmpiricalBernstein>(g.gap.variant)) {
        out += "bernstein";
    } else {
        out += "fixed=" + join_values(std::get<FixedGap>(g.gap.variant).deltas);
    }
    if (g.initial != 0) out += ":init=" + std::to_string(g.initial);
    if (g.start_step != 1) out += ":start=" + std::to_string(g.start_step);
    if (!g.learner.is_erm()) out += ":learner=" + g.learner.name();
    return out;
}

Algorithm parse_algorithm(const std::string& text, std::size_t class_size) {
    if (text == "erm") return PlainErm{};
    std::vector<std::string> parts;
    {
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ':')) parts.push_back(item);
    }
    if (parts.size() < 2 || parts[0] != "germ")
        throw std::invalid_argument("unknown algorithm spec: " + text);

    GermAlgorithm g{GapSpec::bernstein(class_size)};
    const std::string& gap = parts[1];
    if (gap == "massart")
        g.gap = GapSpec::uniform(MassartDeterministic{}, class_size);
    else if (gap == "empirical")
        g.gap = GapSpec::uniform(EmpiricalMcDiarmid{}, class_size);
    else if (gap == "bernstein")
        g.gap = GapSpec::bernstein(class_size);
    else if (gap.rfind("constant=", 0) == 0)
        g.gap = GapSpec::uniform(UserConstant{split_values(gap.substr(9))}, class_size);
    else if (gap.rfind("fixed=", 0) == 0)
        g.gap = GapSpec::fixed(split_values(gap.substr(6)), class_size);
    else
        throw std::invalid_argument("unknown gap mode: " + gap);

    for (std::size_t i = 2; i < parts.size(); ++i) {
        const auto& opt = parts[i];
        if (opt.rfind("init=", 0) == 0)
            g.initial = parse_count(opt.substr(5));
        else if (opt.rfind("start=", 0) == 0)
            g.start_step = parse_count(opt.substr(6));
        else
            throw std::invalid_argument("unknown algorithm option: " + opt);
    }
    if (g.initial >= class_size)
        throw std::invalid_argument("initial hypothesis out of range");
    if (g.start_step == 0)
        throw std::invalid_argument("start step must be >= 1");
    return g;
}

bool is_deterministic(const Algorithm& algo) {
    if (const auto* g = std::get_if<GermAlgorithm>(&algo)) return g->gap.deterministic();
    return true;
}

RiskCurve exact_risk_curve(const LearningProblem& problem, const Algorithm& algo, std::size_t n_max,
                           std::size_t workers) {
    if (!is_deterministic(algo))
        throw std::invalid_argument("exact curves need a deterministic gap; the empirical Rademacher bound is randomized");
    if (n_max == 0)
        throw std::invalid_argument("exact curve needs n_max >= 1");
    const auto probs = problem.distribution().probs();
    std::vector<Outcome> support;
    for (Outcome z = 0; z < probs.size(); ++z)
        if (probs[z] > 0.0) support.push_back(z);
    if (std::pow(static_cast<double>(support.size()), static_cast<double>(n_max)) > kEnumerationBudget)
        throw ResourceError("exact enumeration exceeds budget");

    std::vector<double> risk(problem.class_size());
    for (HypothesisIndex h = 0; h < risk.size(); ++h) risk[h] = population_risk(problem, h);

    const bool plain = std::holds_alternative<PlainErm>(algo);
    const GermAlgorithm germ_algo =
        plain ? GermAlgorithm{GapSpec::fixed({std::numeric_limits<double>::infinity()}, problem.class_size())}
              : std::get<GermAlgorithm>(algo);

    // partial[j][n] collects the mass of every sequence starting with support[j].
    std::vector<std::vector<double>> partial(support.size(), std::vector<double>(n_max + 1, 0.0));

    auto explore = [&](std::size_t j) {
        auto& acc = partial[j];
        auto recurse = [&](auto&& self, const GermStepper& state, std::size_t depth, double w) -> void {
            for (Outcome z : support) {
                GermStepper next = state;
                const auto& rec = next.step(z);
                const double wz = w * probs[z];
                acc[depth + 1] += wz * risk[plain ? rec.erm_index : rec.chosen_index];
                if (depth + 1 < n_max) self(self, next, depth + 1, wz);
            }
        };
        GermStepper root(problem, germ_algo.gap, germ_algo.learner, germ_algo.initial, germ_algo.start_step);
        const Outcome z0 = support[j];
        const auto& rec = root.step(z0);
        acc[1] += probs[z0] * risk[plain ? rec.erm_index : rec.chosen_index];
        if (n_max > 1) recurse(recurse, root, 1, probs[z0]);
    };

    workers = std::max<std::size_t>(1, std::min(workers, support.size()));
    if (workers == 1) {
        for (std::size_t j = 0; j < support.size(); ++j) explore(j);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(workers);
        for (std::size_t t = 0; t < workers; ++t) {
            pool.emplace_back([&, t] {
                try {
                    for (std::size_t j = t; j < support.size(); j += workers) explore(j);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    RiskCurve curve;
    curve.kind = CurveKind::Exact;
    curve.problem = problem.name();
    curve.algo = describe(algo);
    const std::size_t first = plain ? 1 : 0;
    for (std::size_t n = first; n <= n_max; ++n) {
        double v = 0.0;
        if (n == 0) {
            v = risk[germ_algo.initial];
        } else {
            for (const auto& p : partial) v += p[n];
        }
        curve.ns.push_back(n);
        curve.values.push_back(v);
    }
    return curve;
}

namespace {

MonotonicityReport scan(const RiskCurve& curve, double tolerance, bool pooled) {
    if (curve.values.empty())
        throw std::invalid_argument("monotonicity check of an empty curve");
    if (pooled && curve.std_errors.size() != curve.values.size())
        throw std::invalid_argument("pooled check needs per-point standard errors");
    MonotonicityReport report;
    report.tolerance = tolerance;
    report.pooled_stderr = pooled;
    for (std::size_t i = 1; i < curve.values.size(); ++i) {
        const double inc = curve.values[i] - curve.values[i - 1];
        report.max_increase = std::max(report.max_increase, inc);
        double tol = tolerance;
        if (pooled)
            tol = tolerance * std::sqrt(curve.std_errors[i] * curve.std_errors[i] +
                                        curve.std_errors[i - 1] * curve.std_errors[i - 1]);
        if (inc > tol) report.violations.push_back({curve.ns[i], inc});
    }
    report.verdict = report.violations.empty() ? Verdict::Monotone : Verdict::Violated;
    return report;
}

} // namespace

MonotonicityReport check_monotone(const RiskCurve& curve, double tolerance) {
    if (!(tolerance >= 0.0))
        throw std::invalid_argument("tolerance must be nonnegative");
    return scan(curve, tolerance, false);
}

MonotonicityReport check_monotone_pooled(const RiskCurve& curve, double z) {
    if (!(z >= 0.0))
        throw std::invalid_argument("tolerance multiplier must be nonnegative");
    return scan(curve, z, true);
}

WitnessSearchResult find_erm_nonmonotone(std::size_t outcomes, std::size_t class_size, std::size_t n_probe,
                                         std::size_t search_budget, Rng& rng) {
    constexpr unsigned kUnits = 20; // 0.05 grid
    if (outcomes == 0 || outcomes > kUnits || class_size == 0)
        throw std::invalid_argument("witness search needs 1 <= m <= 20 and |H| >= 1");
    if (std::pow(static_cast<double>(outcomes), static_cast<double>(n_probe)) > kEnumerationBudget)
        throw ResourceError("witness probe exceeds enumeration budget");

    WitnessSearchResult result;
    for (std::size_t attempt = 0; attempt < search_budget; ++attempt) {
        std::vector<double> losses(class_size * outcomes);
        for (double& v : losses) v = static_cast<double>(rng() % (kUnits + 1)) / kUnits;
        // Every outcome gets one unit of mass; the rest is spread at random.
        std::vector<unsigned> units(outcomes, 1);
        for (unsigned u = static_cast<unsigned>(outcomes); u < kUnits; ++u) ++units[rng() % outcomes];
        std::vector<double> probs(outcomes);
        for (std::size_t z = 0; z < outcomes; ++z) probs[z] = static_cast<double>(units[z]) / kUnits;

        LearningProblem candidate(DiscreteDistribution(probs), LossTable(class_size, outcomes, losses),
                                  "erm-witness");
        result.attempts = attempt + 1;
        const auto curve = exact_risk_curve(candidate, PlainErm{}, n_probe);
        if (check_monotone(curve, 1e-9).verdict == Verdict::Violated) {
            result.problem = std::move(candidate);
            return result;
        }
    }
    return result;
}

double exact_bernstein_pairwise_coverage(const LearningProblem& problem, std::size_t n, double delta) {
    if (n < 2)
        throw std::invalid_argument("pairwise empirical Bernstein needs n >= 2");
    if (std::pow(static_cast<double>(problem.outcomes()), static_cast<double>(n)) > kEnumerationBudget)
        throw ResourceError("exact coverage enumeration exceeds budget");
    const std::size_t H = problem.class_size();
    const auto& loss = problem.loss();
    std::vector<double> risk(H);
    for (HypothesisIndex h = 0; h < H; ++h) risk[h] = population_risk(problem, h);

    double mass = 0.0;
    std::vector<double> a(n), b(n);
    detail::for_each_sequence(problem.distribution(), n, [&](std::span<const Outcome> seq, double w) {
        bool holds = true;
        for (HypothesisIndex h = 0; h < H && holds; ++h) {
            for (HypothesisIndex g = 0; g < H && holds; ++g) {
                if (g == h) continue;
                for (std::size_t i = 0; i < n; ++i) {
                    a[i] = loss(h, seq[i]);
                    b[i] = loss(g, seq[i]);
                }
                const double gap = empirical_risk(loss, h, seq) - empirical_risk(loss, g, seq);
                holds = risk[h] - risk[g] <= gap + empirical_bernstein_rhs(a, b, H, delta);
            }
        }
        if (holds) mass += w;
    });
    return mass;
}

void write_curve_csv(const RiskCurve& curve, std::ostream& out) {
    auto clean = [](const std::string& s) {
        if (s.find_first_of(",\n\r") != std::string::npos)
            throw std::invalid_argument("CSV field contains a separator: " + s);
        return s;
    };
    const std::string kind = curve.kind == CurveKind::Exact ? "exact" : "mc";
    const std::string seed = curve.seed ? std::to_string(*curve.seed) : "";
    out << "n,value,stderr,kind,problem,algo,seed\n";
    for (std::size_t i = 0; i < curve.values.size(); ++i) {
        out << curve.ns[i] << ',' << format_double(curve.values[i]) << ',';
        if (curve.kind == CurveKind::MonteCarlo) out << format_double(curve.std_errors[i]);
        out << ',' << kind << ',' << clean(curve.problem) << ',' << clean(curve.algo) << ',' << seed << '\n';
    }
}

RiskCurve read_curve_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "n,value,stderr,kind,problem,algo,seed")
        throw std::invalid_argument("curve CSV header mismatch");
    RiskCurve curve;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string item;
        while (std::getline(ss, item, ',')) f.push_back(item);
        if (!line.empty() && line.back() == ',') f.emplace_back();
        if (f.size() != 7)
            throw std::invalid_argument("curve CSV row needs 7 fields: " + line);
        curve.ns.push_back(parse_count(f[0]));
        double v = 0.0;
        if (std::from_chars(f[1].data(), f[1].data() + f[1].size(), v).ec != std::errc{})
            throw std::invalid_argument("bad value in curve CSV: " + f[1]);
        curve.values.push_back(v);
        if (!f[2].empty()) {
            double se = 0.0;
            if (std::from_chars(f[2].data(), f[2].data() + f[2].size(), se).ec != std::errc{})
                throw std::invalid_argument("bad stderr in curve CSV: " + f[2]);
            curve.std_errors.push_back(se);
        }
        if (first) {
            if (f[3] == "exact")
                curve.kind = CurveKind::Exact;
            else if (f[3] == "mc")
                curve.kind = CurveKind::MonteCarlo;
            else
                throw std::invalid_argument("unknown curve kind: " + f[3]);
            curve.problem = f[4];
            curve.algo = f[5];
            if (!f[6].empty()) curve.seed = std::stoull(f[6]);
            first = false;
        }
    }
    if (!curve.std_errors.empty() && curve.std_errors.size() != curve.values.size())
        throw std::invalid_argument("curve CSV has standard errors on some rows only");
    if (curve.kind == CurveKind::MonteCarlo && curve.std_errors.empty())
        throw std::invalid_argument("Monte Carlo curve CSV without standard errors");
    return curve;
}

} // namespace germ

#include "germ/experiment.hpp"

#include "germ/analysis.hpp"

#include "json.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace germ {

using nlohmann::json;

namespace {

constexpr std::size_t kAnyClassSize = std::numeric_limits<std::size_t>::max();

template <class T>
T get_field(const json& obj, const char* key, const T& fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("field \"") + key + "\" has the wrong type");
    }
}

std::string algorithm_from_object(const json& a) {
    const auto variant = get_field<std::string>(a, "variant", "germ");
    if (variant == "erm") return "erm";
    if (variant != "germ") throw ConfigError("unknown algorithm variant: " + variant);
    const auto gap = get_field<std::string>(a, "gap", "massart");
    std::string spec = "germ:";
    if (gap == "constant" || gap == "fixed") {
        const auto values = get_field<std::vector<double>>(a, "values", {});
        if (values.empty()) throw ConfigError("gap \"" + gap + "\" needs a nonempty \"values\" array");
        spec += gap + "=";
        for (std::size_t i = 0; i < values.size(); ++i) spec += (i ? ";" : "") + format_double(values[i]);
    } else {
        spec += gap;
    }
    spec += ":init=" + std::to_string(get_field<std::size_t>(a, "initial", 0));
    spec += ":start=" + std::to_string(get_field<std::size_t>(a, "start_step", 1));
    return spec;
}

// Canonical spec string, validated for syntax.
std::string canonical_algorithm(const std::string& spec) {
    try {
        // Class size is not known yet; range checks happen at run time.
        return describe(parse_algorithm(spec, kAnyClassSize));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

json algorithm_echo(const std::string& spec) {
    const auto algo = parse_algorithm(spec, kAnyClassSize);
    json out{{"spec", spec}};
    if (const auto* g = std::get_if<GermAlgorithm>(&algo)) {
        out["variant"] = "germ";
        out["initial"] = g->initial;
        out["start_step"] = g->start_step;
        out["learner"] = g->learner.name();
    } else {
        out["variant"] = "erm";
    }
    return out;
}

} // namespace

std::vector<std::size_t> default_grid(std::size_t n_max) {
    std::vector<std::size_t> grid;
    for (int j = 0;; ++j) {
        const auto v = static_cast<std::size_t>(std::llround(std::pow(10.0, j / 4.0)));
        if (v >= n_max) break;
        if (grid.empty() || grid.back() != v) grid.push_back(v);
    }
    grid.push_back(n_max);
    return grid;
}

ExperimentConfig parse_experiment_config(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed config JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");

    ExperimentConfig cfg;
    if (doc.contains("scenario"))
        cfg.scenario = get_field<std::string>(doc, "scenario", "");
    else if (doc.contains("problem_file"))
        cfg.scenario = get_field<std::string>(doc, "problem_file", "");
    if (cfg.scenario.empty()) throw ConfigError("config needs \"scenario\" or \"problem_file\"");

    if (doc.contains("algorithm")) {
        const auto& a = doc.at("algorithm");
        if (a.is_string())
            cfg.algorithm = a.get<std::string>();
        else if (a.is_object())
            cfg.algorithm = algorithm_from_object(a);
        else
            throw ConfigError("\"algorithm\" must be a spec string or an object");
    }
    cfg.algorithm = canonical_algorithm(cfg.algorithm);

    if (doc.contains("seed")) {
        if (!doc.at("seed").is_number_unsigned()) throw ConfigError("\"seed\" must be an unsigned 64-bit integer");
        cfg.seed = doc.at("seed").get<std::uint64_t>();
    }

    const json engine = doc.value("engine", json{{"kind", "exact"}});
    const auto kind = get_field<std::string>(engine, "kind", "exact");
    if (kind == "exact") {
        ExactEngine e;
        e.n_max = get_field<std::size_t>(engine, "n_max", 8);
        if (e.n_max == 0) throw ConfigError("engine.n_max must be >= 1");
        cfg.engine = e;
    } else if (kind == "mc") {
        McEngine e;
        e.replications = get_field<std::size_t>(engine, "replications", 1000);
        e.n_max = get_field<std::size_t>(engine, "n_max", 100);
        e.grid = get_field<std::vector<std::size_t>>(engine, "grid", default_grid(e.n_max));
        if (!cfg.seed) throw ConfigError("the mc engine needs an explicit \"seed\"");
        try {
            McConfig{e.replications, e.n_max, *cfg.seed, e.grid, 1}.validate();
        } catch (const std::invalid_argument& ex) {
            throw ConfigError(ex.what());
        }
        cfg.engine = e;
    } else {
        throw ConfigError("unknown engine kind: " + kind);
    }
    const bool exact = std::holds_alternative<ExactEngine>(cfg.engine);
    if (exact && !is_deterministic(parse_algorithm(cfg.algorithm, kAnyClassSize)))
        throw ConfigError("the exact engine needs a deterministic gap mode");

    for (const auto& c : doc.value("checks", json::array())) {
        const auto type = get_field<std::string>(c, "type", "");
        if (type == "monotone") {
            cfg.checks.push_back(MonotoneCheck{get_field<double>(c, "tolerance", exact ? kExactMonotoneTolerance : 3.0)});
        } else if (type == "coverage" || type == "decay") {
            if (exact) throw ConfigError(type + " checks need the mc engine");
            if (type == "coverage") {
                CoverageCheck cc{get_field<std::string>(c, "event", ""), get_field<double>(c, "delta", 0.1)};
                try {
                    make_event(cc.event, cc.delta);
                } catch (const std::invalid_argument& ex) {
                    throw ConfigError(ex.what());
                }
                cfg.checks.push_back(cc);
            } else {
                const double beta = get_field<double>(c, "beta", 0.0);
                if (!(beta >= 0.0 && beta <= 1.0)) throw ConfigError("decay beta must lie in [0,1]");
                cfg.checks.push_back(DecayCheck{beta, get_field<double>(c, "max_slope", decay_slope_threshold(beta))});
            }
        } else {
            throw ConfigError("unknown check type: " + type);
        }
    }
    cfg.output_dir = get_field<std::string>(doc, "output_dir", "germ_out");
    cfg.dump_trajectory = get_field<bool>(doc, "dump_trajectory", false);
    return cfg;
}

std::string config_echo(const ExperimentConfig& cfg) {
    json out;
    out["scenario"] = cfg.scenario;
    out["algorithm"] = algorithm_echo(cfg.algorithm);
    if (const auto* e = std::get_if<ExactEngine>(&cfg.engine)) {
        out["engine"] = {{"kind", "exact"}, {"n_max", e->n_max}};
    } else {
        const auto& m = std::get<McEngine>(cfg.engine);
        out["engine"] = {{"kind", "mc"}, {"replications", m.replications}, {"n_max", m.n_max}, {"grid", m.grid}};
    }
    out["seed"] = cfg.seed ? json(*cfg.seed) : json(nullptr);
    json checks = json::array();
    for (const auto& c : cfg.checks) {
        if (const auto* m = std::get_if<MonotoneCheck>(&c))
            checks.push_back({{"type", "monotone"}, {"tolerance", m->tolerance}});
        else if (const auto* cc = std::get_if<CoverageCheck>(&c))
            checks.push_back({{"type", "coverage"}, {"event", cc->event}, {"delta", cc->delta}});
        else {
            const auto& d = std::get<DecayCheck>(c);
            checks.push_back({{"type", "decay"}, {"beta", d.beta}, {"max_slope", d.max_slope}});
        }
    }
    out["checks"] = std::move(checks);
    out["dump_trajectory"] = cfg.dump_trajectory;
    return out.dump();
}

namespace {

json monotone_json(const MonotonicityReport& r) {
    json v = json::array();
    for (const auto& x : r.violations) v.push_back({{"n", x.n}, {"increase", x.increase}});
    return {{"type", "monotone"},
            {"tolerance", r.tolerance},
            {"pooled_stderr", r.pooled_stderr},
            {"verdict", r.verdict == Verdict::Monotone ? "monotone" : "violated"},
            {"max_increase", r.max_increase},
            {"violations", std::move(v)},
            {"passed", r.verdict == Verdict::Monotone}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

ExperimentResult execute(const ExperimentConfig& cfg) {
    ExperimentResult result;
    const Scenario scenario = resolve_scenario(cfg.scenario);
    const auto& problem = scenario.problem;
    Algorithm algo;
    try {
        algo = parse_algorithm(cfg.algorithm, problem.class_size());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    const bool exact = std::holds_alternative<ExactEngine>(cfg.engine);
    McConfig mc;
    RiskCurve curve;
    if (exact) {
        curve = exact_risk_curve(problem, algo, std::get<ExactEngine>(cfg.engine).n_max, cfg.workers);
    } else {
        const auto& e = std::get<McEngine>(cfg.engine);
        mc = McConfig{e.replications, e.n_max, *cfg.seed, e.grid, cfg.workers};
        curve = mc_risk_curve(problem, algo, mc);
    }

    std::filesystem::create_directories(cfg.output_dir);
    const auto curve_path = cfg.output_dir / "curve.csv";
    {
        std::ostringstream csv;
        write_curve_csv(curve, csv);
        write_text(curve_path, csv.str());
    }
    result.artifacts.push_back(curve_path);

    const auto star = optimal_risk(problem);
    json report;
    report["tool"] = "germ";
    report["version"] = kToolVersion;
    report["config"] = json::parse(config_echo(cfg));
    report["seed"] = cfg.seed ? json(*cfg.seed) : json(nullptr);
    report["problem"] = {{"name", problem.name()},
                         {"class_size", problem.class_size()},
                         {"outcomes", problem.outcomes()},
                         {"optimal_risk", star.risk},
                         {"optimal_index", star.index}};
    report["curve"] = {{"file", "curve.csv"},
                       {"kind", exact ? "exact" : "mc"},
                       {"points", curve.values.size()},
                       {"degenerate_stderr", curve.degenerate_stderr()}};

    bool all_passed = true;
    json checks = json::array();
    std::vector<CoverageReport> coverage;
    for (const auto& check : cfg.checks) {
        if (const auto* m = std::get_if<MonotoneCheck>(&check)) {
            const auto r = exact ? check_monotone(curve, m->tolerance) : check_monotone_pooled(curve, m->tolerance);
            all_passed &= r.verdict == Verdict::Monotone;
            checks.push_back(monotone_json(r));
            result.summary.push_back("check=monotone verdict=" +
                                     std::string(r.verdict == Verdict::Monotone ? "monotone" : "violated") +
                                     " max_increase=" + format_double(r.max_increase) +
                                     " violations=" + std::to_string(r.violations.size()));
        } else if (const auto* c = std::get_if<CoverageCheck>(&check)) {
            auto rep = mc_bound_coverage(problem, algo, make_event(c->event, c->delta), mc);
            json pts = json::array();
            double worst_margin = std::numeric_limits<double>::infinity();
            for (const auto& p : rep.points) {
                pts.push_back({{"n", p.n}, {"coverage", p.coverage}, {"level", p.level}, {"floor", p.floor}});
                worst_margin = std::min(worst_margin, p.coverage - p.floor);
            }
            const bool ok = rep.passed();
            all_passed &= ok;
            checks.push_back({{"type", "coverage"},
                              {"event", rep.event},
                              {"delta", rep.delta},
                              {"replications", rep.replications},
                              {"points", std::move(pts)},
                              {"passed", ok}});
            result.summary.push_back("check=coverage event=" + rep.event + " passed=" + (ok ? "true" : "false") +
                                     " min_margin=" + format_double(worst_margin));
            coverage.push_back(std::move(rep));
        } else {
            const auto& d = std::get<DecayCheck>(check);
            const auto fit = excess_risk_decay(problem, algo, mc);
            const auto cert = bernstein_min_B(problem, d.beta);
            const bool ok = fit.degenerate || fit.slope <= d.max_slope;
            all_passed &= ok;
            checks.push_back({{"type", "decay"},
                              {"beta", d.beta},
                              {"max_slope", d.max_slope},
                              {"slope", fit.slope},
                              {"intercept", fit.intercept},
                              {"residual", fit.residual},
                              {"points", fit.points},
                              {"degenerate", fit.degenerate},
                              {"ns", fit.ns},
                              {"mean_excess", fit.mean_excess},
                              {"certificate",
                               {{"beta", cert.beta},
                                {"minimal_B", std::isfinite(cert.minimal_B) ? json(cert.minimal_B) : json(nullptr)},
                                {"hstar_index", cert.hstar_index}}},
                              {"passed", ok}});
            result.summary.push_back("check=decay slope=" + format_double(fit.slope) + " max_slope=" +
                                     format_double(d.max_slope) + " degenerate=" + (fit.degenerate ? "true" : "false") +
                                     " passed=" + (ok ? "true" : "false"));
        }
    }
    report["checks"] = std::move(checks);
    report["passed"] = all_passed;

    if (!coverage.empty()) {
        const auto path = cfg.output_dir / "coverage.csv";
        std::ostringstream csv;
        write_coverage_csv(coverage, csv);
        write_text(path, csv.str());
        result.artifacts.push_back(path);
    }
    if (cfg.dump_trajectory) {
        const std::size_t n = exact ? std::get<ExactEngine>(cfg.engine).n_max : mc.n_max;
        Rng rng = replication_rng(cfg.seed.value_or(0), 0);
        const Sample sample = draw_sample(problem.distribution(), n, rng);
        GermAlgorithm g = std::holds_alternative<GermAlgorithm>(algo)
                              ? std::get<GermAlgorithm>(algo)
                              : GermAlgorithm{GapSpec::fixed({std::numeric_limits<double>::infinity()},
                                                             problem.class_size())};
        auto traj = run_germ_from_step(problem, sample, g.gap, g.learner, g.initial,
                                       std::min(g.start_step, sample.size()), rng);
        if (std::holds_alternative<PlainErm>(algo)) {
            HypothesisIndex previous = traj.initial_index;
            for (auto& rec : traj.steps) {
                rec.chosen_index = rec.erm_index;
                rec.incumbent_empirical_loss = rec.erm_empirical_loss;
                rec.updated = rec.k == 1 || rec.erm_index != previous;
                previous = rec.erm_index;
            }
        }
        const auto path = cfg.output_dir / "trajectory.json";
        write_text(path, trajectory_to_json(traj) + "\n");
        result.artifacts.push_back(path);
    }

    const auto report_path = cfg.output_dir / "report.json";
    write_text(report_path, report.dump(2) + "\n");
    result.artifacts.push_back(report_path);
    result.exit_code = all_passed ? kExitOk : kExitCheckFailed;
    return result;
}

} // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
    try {
        return execute(config);
    } catch (const ResourceError& e) {
        return ExperimentResult{kExitResource, {}, {}, e.what()};
    } catch (const std::invalid_argument& e) {
        return ExperimentResult{kExitBadConfig, {}, {}, e.what()};
    } catch (const std::runtime_error& e) {
        return ExperimentResult{kExitBadConfig, {}, {}, e.what()};
    }
}

ExperimentResult run_experiment_file(const std::filesystem::path& config_path, std::size_t workers,
                                     const std::optional<std::filesystem::path>& output_override) {
    std::ifstream in(config_path);
    if (!in) return ExperimentResult{kExitBadConfig, {}, {}, "cannot open config " + config_path.string()};
    std::ostringstream buf;
    buf << in.rdbuf();
    ExperimentConfig cfg;
    try {
        cfg = parse_experiment_config(buf.str());
    } catch (const ConfigError& e) {
        return ExperimentResult{kExitBadConfig, {}, {}, e.what()};
    }
    cfg.workers = std::max<std::size_t>(1, workers);
    if (output_override) cfg.output_dir = *output_override;
    return run_experiment(cfg);
}

} // namespace germ

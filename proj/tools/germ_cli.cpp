#include "germ/analysis.hpp"
#include "germ/experiment.hpp"
#include "germ/rademacher.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace germ;

int report_error(const std::string& what, int code) {
    std::cerr << "germ: " << what << "\n";
    return code;
}

std::string join_tags(const Scenario& s) {
    std::string out;
    for (auto t : s.tags) out += (out.empty() ? "" : ",") + tag_name(t);
    return out.empty() ? "-" : out;
}

int print_result(const ExperimentResult& r) {
    if (!r.error.empty()) return report_error(r.error, r.exit_code);
    for (const auto& line : r.summary) std::cout << line << "\n";
    std::string files;
    for (const auto& a : r.artifacts) files += (files.empty() ? "" : ",") + a.string();
    std::cout << "status=" << (r.exit_code == kExitOk ? "ok" : "check-failed") << " exit=" << r.exit_code
              << " artifacts=" << files << "\n";
    return r.exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Greedy empirical risk minimization experiments"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    std::size_t workers = 1;

    auto* run = app.add_subcommand("run", "Run an experiment described by a JSON config");
    std::string config_path;
    std::string run_out;
    run->add_option("config", config_path, "Config file")->required();
    run->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
    run->add_option("--out", run_out, "Override the output directory");

    auto* scen = app.add_subcommand("scenarios", "Built-in scenarios");
    auto* scen_list = scen->add_subcommand("list", "List built-in scenarios");
    scen->require_subcommand(1);

    auto* curve = app.add_subcommand("curve", "Compute a risk curve");
    std::string curve_scenario, algo = "germ:massart", engine = "exact", curve_out = "germ_out";
    std::optional<std::uint64_t> seed;
    std::size_t n_max = 0, replications = 1000;
    std::vector<std::size_t> grid;
    bool monotone = false;
    curve->add_option("scenario", curve_scenario, "Scenario name or problem file")->required();
    curve->add_option("--algo", algo, "Algorithm spec");
    curve->add_option("--engine", engine, "exact or mc")->check(CLI::IsMember({"exact", "mc"}));
    curve->add_option("--seed", seed, "Base seed (required for mc)");
    curve->add_option("--out", curve_out, "Output directory");
    curve->add_option("--n-max", n_max, "Largest sample size");
    curve->add_option("--replications", replications, "Monte Carlo replications");
    curve->add_option("--grid", grid, "Monte Carlo checkpoints")->delimiter(',');
    curve->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
    curve->add_flag("--check-monotone", monotone, "Also run the default monotonicity check");

    auto* mono = app.add_subcommand("check-monotone", "Check a curve CSV for adjacent increases");
    std::string csv_path;
    std::optional<double> tol;
    mono->add_option("csv", csv_path, "Curve CSV")->required();
    mono->add_option("--tol", tol, "Absolute tolerance (exact) or stderr multiple (mc)");

    auto* rad = app.add_subcommand("rademacher", "Rademacher complexity estimates");
    std::string rad_scenario, mode = "exact";
    std::size_t k = 1;
    std::uint64_t rad_seed = 0;
    rad->add_option("scenario", rad_scenario, "Scenario name or problem file")->required();
    rad->add_option("--k", k, "Sample size")->required()->check(CLI::PositiveNumber);
    rad->add_option("--mode", mode, "empirical, massart or exact")
        ->check(CLI::IsMember({"empirical", "massart", "exact"}));
    rad->add_option("--seed", rad_seed, "Seed for the empirical mode");

    auto* bern = app.add_subcommand("bernstein", "Minimal Bernstein constant");
    std::string bern_scenario;
    double beta = 0.0;
    bern->add_option("scenario", bern_scenario, "Scenario name or problem file")->required();
    bern->add_option("--beta", beta, "Exponent in [0,1]")->required()->check(CLI::Range(0.0, 1.0));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitBadConfig;
    }

    try {
        if (*run) {
            std::optional<std::filesystem::path> out;
            if (!run_out.empty()) out = run_out;
            return print_result(run_experiment_file(config_path, workers, out));
        }
        if (*scen_list) {
            for (const auto& s : builtin_scenarios()) {
                const auto star = optimal_risk(s.problem);
                std::cout << "name=" << s.name() << " class_size=" << s.problem.class_size()
                          << " outcomes=" << s.problem.outcomes() << " optimal_risk=" << format_double(star.risk)
                          << " tags=" << join_tags(s) << "\n";
            }
            return kExitOk;
        }
        if (*curve) {
            ExperimentConfig cfg;
            cfg.scenario = curve_scenario;
            cfg.algorithm = describe(parse_algorithm(algo, std::numeric_limits<std::size_t>::max()));
            cfg.seed = seed;
            if (engine == "exact") {
                if (!is_deterministic(parse_algorithm(cfg.algorithm, std::numeric_limits<std::size_t>::max())))
                    return report_error("the exact engine needs a deterministic gap mode", kExitBadConfig);
                cfg.engine = ExactEngine{n_max ? n_max : 8};
                if (monotone) cfg.checks.push_back(MonotoneCheck{kExactMonotoneTolerance});
            } else {
                if (!seed) return report_error("the mc engine needs --seed", kExitBadConfig);
                const std::size_t n = n_max ? n_max : 100;
                McEngine e{replications, n, grid.empty() ? default_grid(n) : grid};
                McConfig{e.replications, e.n_max, *seed, e.grid, 1}.validate();
                cfg.engine = e;
                if (monotone) cfg.checks.push_back(MonotoneCheck{3.0});
            }
            cfg.output_dir = curve_out;
            cfg.workers = workers;
            return print_result(run_experiment(cfg));
        }
        if (*mono) {
            std::ifstream in(csv_path);
            if (!in) return report_error("cannot open " + csv_path, kExitBadConfig);
            const auto c = read_curve_csv(in);
            const bool exact = c.kind == CurveKind::Exact;
            const auto r = exact ? check_monotone(c, tol.value_or(kExactMonotoneTolerance))
                                 : check_monotone_pooled(c, tol.value_or(3.0));
            std::cout << "verdict=" << (r.verdict == Verdict::Monotone ? "monotone" : "violated")
                      << " points=" << c.values.size() << " violations=" << r.violations.size()
                      << " max_increase=" << format_double(r.max_increase) << " tolerance=" << format_double(r.tolerance)
                      << " pooled_stderr=" << (r.pooled_stderr ? "true" : "false") << "\n";
            return r.verdict == Verdict::Monotone ? kExitOk : kExitCheckFailed;
        }
        if (*rad) {
            const auto s = resolve_scenario(rad_scenario);
            double value = 0.0;
            if (mode == "massart") {
                value = rbar_massart(s.problem.class_size(), k);
            } else if (mode == "exact") {
                value = exact_rademacher_by_counts(s.problem, k);
            } else {
                Rng rng(rad_seed);
                const Sample sample = draw_sample(s.problem.distribution(), k, rng);
                value = rbar_empirical(s.problem.loss(), sample, rng);
            }
            std::cout << "scenario=" << s.name() << " mode=" << mode << " k=" << k;
            if (mode == "empirical") std::cout << " seed=" << rad_seed;
            std::cout << " value=" << format_double(value) << "\n";
            return kExitOk;
        }
        if (*bern) {
            const auto s = resolve_scenario(bern_scenario);
            const auto cert = bernstein_min_B(s.problem, beta);
            std::cout << "scenario=" << s.name() << " beta=" << format_double(beta)
                      << " minimal_B=" << format_double(cert.minimal_B) << " hstar=" << cert.hstar_index << "\n";
            return kExitOk;
        }
    } catch (const ResourceError& e) {
        return report_error(e.what(), kExitResource);
    } catch (const std::exception& e) {
        return report_error(e.what(), kExitBadConfig);
    }
    return kExitBadConfig;
}

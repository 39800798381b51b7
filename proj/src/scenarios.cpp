#include "germ/scenarios.hpp"

#include "germ/analysis.hpp"
#include "germ/oracle.hpp"

#include "json.hpp"

#include <array>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#ifndef GERM_DEFAULT_DATA_DIR
#define GERM_DEFAULT_DATA_DIR "data/scenarios"
#endif

namespace germ {

namespace {

constexpr std::array<std::pair<ScenarioTag, const char*>, 6> kTagNames{{
    {ScenarioTag::SingleHypothesis, "single-hypothesis"},
    {ScenarioTag::Realizable, "realizable"},
    {ScenarioTag::Misspecified, "misspecified"},
    {ScenarioTag::ErmNonmonotoneWitness, "erm-nonmonotone-witness"},
    {ScenarioTag::Massart, "massart"},
    {ScenarioTag::WorstCase, "worst-case"},
}};

constexpr std::array<const char*, 6> kRegistry{"S1", "S2", "S3", "S4", "S5", "S6"};

void fail(const Scenario& s, const std::string& why) {
    throw std::runtime_error("scenario " + s.name() + ": " + why);
}

} // namespace

std::string tag_name(ScenarioTag tag) {
    for (const auto& [t, name] : kTagNames)
        if (t == tag) return name;
    return "unknown";
}

ScenarioTag parse_tag(const std::string& name) {
    for (const auto& [t, n] : kTagNames)
        if (name == n) return t;
    throw std::invalid_argument("unknown scenario tag: " + name);
}

std::filesystem::path scenario_data_dir() {
    if (const char* env = std::getenv("GERM_DATA_DIR"); env && *env) return env;
    return GERM_DEFAULT_DATA_DIR;
}

void verify_tags(const Scenario& s) {
    const auto& p = s.problem;
    const double best = optimal_risk(p).risk;
    for (ScenarioTag tag : s.tags) {
        switch (tag) {
        case ScenarioTag::SingleHypothesis:
            if (p.class_size() != 1) fail(s, "single-hypothesis tag on a larger class");
            break;
        case ScenarioTag::Realizable:
            if (best != 0.0) fail(s, "realizable tag but optimal risk is positive");
            break;
        case ScenarioTag::Misspecified:
            if (!(best > 0.0)) fail(s, "misspecified tag but optimal risk is zero");
            break;
        case ScenarioTag::ErmNonmonotoneWitness: {
            if (!s.witness) fail(s, "witness tag without a stored curve");
            const auto& w = *s.witness;
            const auto curve = exact_risk_curve(p, PlainErm{}, w.n_probe);
            if (curve.values.size() != w.erm_curve.size()) fail(s, "stored witness curve has the wrong length");
            for (std::size_t i = 0; i < curve.values.size(); ++i)
                if (std::abs(curve.values[i] - w.erm_curve[i]) > 1e-12) fail(s, "stored witness curve is stale");
            if (check_monotone(curve, 1e-9).verdict != Verdict::Violated) fail(s, "witness ERM curve is monotone");
            break;
        }
        case ScenarioTag::Massart:
            if (!std::isfinite(bernstein_min_B(p, 1.0).minimal_B)) fail(s, "no finite beta = 1 Bernstein constant");
            break;
        case ScenarioTag::WorstCase:
            if (!(bernstein_min_B(p, 0.0).minimal_B <= 1.0)) fail(s, "beta = 0 Bernstein constant exceeds 1");
            break;
        }
    }
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open scenario file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    Scenario s{parse_problem_json(text), {}, {}, std::nullopt};
    const auto doc = nlohmann::json::parse(text);
    for (const auto& t : doc.value("tags", std::vector<std::string>{})) s.tags.insert(parse_tag(t));
    s.note = doc.value("note", std::string{});
    if (doc.contains("witness")) {
        const auto& w = doc.at("witness");
        s.witness = WitnessFixture{w.at("seed").get<std::uint64_t>(),   w.at("outcomes").get<std::size_t>(),
                                   w.at("class_size").get<std::size_t>(), w.at("n_probe").get<std::size_t>(),
                                   w.at("budget").get<std::size_t>(),     w.at("attempts").get<std::size_t>(),
                                   w.at("erm_curve").get<std::vector<double>>()};
    }
    verify_tags(s);
    return s;
}

std::vector<Scenario> builtin_scenarios() {
    const auto dir = scenario_data_dir();
    std::vector<Scenario> out;
    for (const char* name : kRegistry) out.push_back(load_scenario(dir / (std::string(name) + ".json")));
    return out;
}

Scenario resolve_scenario(const std::string& name_or_path) {
    for (const char* name : kRegistry)
        if (name_or_path == name) return load_scenario(scenario_data_dir() / (name_or_path + ".json"));
    if (std::filesystem::exists(name_or_path)) return load_scenario(name_or_path);
    throw std::invalid_argument("unknown scenario: " + name_or_path);
}

} // namespace germ

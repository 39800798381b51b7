#pragma once
// Built-in learning problems, stored as JSON under the scenario data
// directory and re-verified against their tags when loaded.

#include "germ/problem.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace germ {

enum class ScenarioTag { SingleHypothesis, Realizable, Misspecified, ErmNonmonotoneWitness, Massart, WorstCase };

std::string tag_name(ScenarioTag tag);
ScenarioTag parse_tag(const std::string& name);

// Frozen output of find_erm_nonmonotone: the search parameters and the exact
// plain-ERM curve (n = 1..n_probe) of the problem it returned.
struct WitnessFixture {
    std::uint64_t seed = 0;
    std::size_t outcomes = 0;
    std::size_t class_size = 0;
    std::size_t n_probe = 0;
    std::size_t budget = 0;
    std::size_t attempts = 0;
    std::vector<double> erm_curve;
};

struct Scenario {
    LearningProblem problem;
    std::set<ScenarioTag> tags;
    std::string note;
    std::optional<WitnessFixture> witness;

    const std::string& name() const { return problem.name(); }
    bool has(ScenarioTag tag) const { return tags.count(tag) != 0; }
};

// GERM_DATA_DIR if set, otherwise the directory configured at build time.
std::filesystem::path scenario_data_dir();

// Throws std::runtime_error naming the first tag that fails to re-verify.
void verify_tags(const Scenario& scenario);

Scenario load_scenario(const std::filesystem::path& path);

// S1..S6 in registry order, each verified.
std::vector<Scenario> builtin_scenarios();

// A registry name, or a path to a problem JSON file (untagged scenario).
Scenario resolve_scenario(const std::string& name_or_path);

} // namespace germ

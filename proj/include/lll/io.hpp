#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lll/criteria.hpp"
#include "lll/dependency_graph.hpp"

namespace lll {

// Criteria description:
//   {m, adjacency, gamma, psi, mode}
//   clique mode adds {cliques, x}
//   backtrack mode uses {backtrack: {variables, entries: [[{set, gamma}, ...], ...], span, init_ratio}, psi}
//   presets: {preset: "rainbow", n, lambda[, psi]} and {preset: "aec-backtrack", delta, q[, gamma]}
struct CriteriaInput {
    std::string mode = "cluster";
    std::string preset;
    int m = 0;
    DependencyGraph graph;
    std::vector<double> gamma;
    std::vector<double> psi;
    std::optional<CliqueLllConfig> clique;
    std::optional<BacktrackChargeTable> table;
    nlohmann::json preset_params = nlohmann::json::object();
};

inline const std::vector<std::string>& criteria_modes() {
    static const std::vector<std::string> modes{"general", "cluster", "shearer", "clique", "backtrack"};
    return modes;
}

CriteriaInput parse_criteria(const nlohmann::json& j);
CriteriaInput parse_criteria_file(const std::string& path);

struct CriteriaResult {
    bool pass = false;
    nlohmann::json report;
};

// mode_override, when non-empty, replaces the description's mode.
CriteriaResult evaluate_criteria(const CriteriaInput& in, const std::string& mode_override = "");

nlohmann::json to_json(const CriterionReport& r);
nlohmann::json to_json(const ShearerReport& r);

}  // namespace lll

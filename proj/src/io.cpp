#include "lll/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "lll/solvers/aec.hpp"

namespace lll {

namespace {

using nlohmann::json;

const json& need(const json& j, const char* key) {
    if (!j.contains(key)) throw LllError(std::string("criteria: missing field '") + key + "'");
    return j.at(key);
}

std::vector<double> numbers(const json& j, const char* key, std::size_t size) {
    const auto& a = need(j, key);
    if (!a.is_array()) throw LllError(std::string("criteria: '") + key + "' must be an array");
    std::vector<double> out;
    for (const auto& x : a) {
        if (!x.is_number()) throw LllError(std::string("criteria: '") + key + "' holds a non-number");
        double v = x.get<double>();
        if (!std::isfinite(v) || v < 0.0) throw LllError(std::string("criteria: '") + key + "' must be finite and >= 0");
        out.push_back(v);
    }
    if (out.size() != size) throw LllError(std::string("dimension mismatch: ") + key);
    return out;
}

std::vector<int> ints(const json& a, const char* what) {
    if (!a.is_array()) throw LllError(std::string("criteria: ") + what + " must be an array");
    std::vector<int> out;
    for (const auto& x : a) {
        if (!x.is_number_integer()) throw LllError(std::string("criteria: ") + what + " holds a non-integer");
        out.push_back(x.get<int>());
    }
    return out;
}

const char* rel_name(Inequality r) { return r == Inequality::strict ? "<" : "<="; }

CriteriaResult rainbow_preset(const CriteriaInput& in) {
    const auto& p = in.preset_params;
    const int n = need(p, "n").get<int>();
    const double lambda = need(p, "lambda").get<double>();
    if (n < 2) throw LllError("rainbow preset: n must be at least 2");
    if (!(lambda > 0.0)) throw LllError("rainbow preset: lambda must be positive");
    const double psi = p.contains("psi") ? p.at("psi").get<double>() : 3.0 / (4.0 * n * n);
    if (!(psi > 0.0)) throw LllError("weights must be positive");
    const double gamma = 1.0 / ((2.0 * n - 1) * (2.0 * n - 3));
    const double zeta = std::pow(1.0 + (2.0 * n - 1) * std::max(0.0, lambda * n - 1) * psi, 4);
    auto r = cluster_expansion_from_zeta({gamma}, {zeta}, {psi});
    r.scalars["n"] = n;
    r.scalars["lambda"] = lambda;
    r.scalars["psi"] = psi;
    r.scalars["gamma"] = gamma;
    r.scalars["zeta"] = zeta;
    r.scalars["steps_bound"] = 3.0 * lambda * n;
    return {r.pass, to_json(r)};
}

CriteriaResult aec_preset(const CriteriaInput& in) {
    const auto& p = in.preset_params;
    const int delta = need(p, "delta").get<int>();
    const int q = need(p, "q").get<int>();
    const double g = p.contains("gamma") ? p.at("gamma").get<double>() : (1.0 + std::sqrt(5.0)) / 2.0;
    auto r = aec_backtrack_criterion(delta, q, g);
    r.scalars["delta"] = delta;
    r.scalars["q"] = q;
    return {r.pass, to_json(r)};
}

}  // namespace

nlohmann::json to_json(const CriterionReport& r) {
    json rows = json::array();
    for (std::size_t k = 0; k < r.lhs.size(); ++k)
        rows.push_back({{"label", k < r.labels.size() ? r.labels[k] : std::to_string(k)},
                        {"lhs", r.lhs[k]},
                        {"rel", rel_name(r.rel[k])},
                        {"rhs", r.rhs[k]}});
    json j = {{"name", r.name}, {"pass", r.pass}, {"slack", r.slack}, {"max_ratio", r.max_ratio}, {"rows", rows}};
    if (!r.scalars.empty()) j["scalars"] = r.scalars;
    if (!r.aux.empty()) j["aux"] = r.aux;
    return j;
}

nlohmann::json to_json(const ShearerReport& r) {
    json q = json::array();
    for (const auto& [s, v] : r.q) q.push_back({{"set", s}, {"q", v}});
    return {{"name", "shearer"}, {"pass", r.pass}, {"q_empty", r.q_empty}, {"min_q", r.min_q}, {"ratios", r.ratios}, {"q", q}};
}

CriteriaInput parse_criteria(const nlohmann::json& j) {
    if (!j.is_object()) throw LllError("criteria: top level must be an object");
    CriteriaInput in;
    if (j.contains("mode")) in.mode = j.at("mode").get<std::string>();
    if (j.contains("preset")) {
        in.preset = j.at("preset").get<std::string>();
        if (in.preset != "rainbow" && in.preset != "aec-backtrack") throw LllError("criteria: unknown preset '" + in.preset + "'");
        in.preset_params = j;
        if (!j.contains("mode")) in.mode = in.preset == "rainbow" ? "cluster" : "backtrack";
        return in;
    }
    if (std::find(criteria_modes().begin(), criteria_modes().end(), in.mode) == criteria_modes().end())
        throw LllError("criteria: unknown mode '" + in.mode + "'");

    if (j.contains("backtrack")) {
        const auto& b = j.at("backtrack");
        BacktrackChargeTable t;
        t.variables = need(b, "variables").get<int>();
        if (t.variables < 0) throw LllError("criteria: negative variable count");
        t.entries.resize(static_cast<std::size_t>(t.variables));
        const auto& entries = need(b, "entries");
        if (!entries.is_array() || static_cast<int>(entries.size()) != t.variables)
            throw LllError("dimension mismatch: backtrack entries");
        for (int v = 0; v < t.variables; ++v)
            for (const auto& e : entries[v]) {
                auto s = ints(need(e, "set"), "backtrack set");
                for (int u : s)
                    if (u < 0 || u >= t.variables) throw LllError("criteria: backtrack set out of range");
                t.set(v, s, need(e, "gamma").get<double>());
            }
        if (b.contains("span")) t.span = ints(b.at("span"), "span");
        if (b.contains("init_ratio")) t.init_ratio = b.at("init_ratio").get<double>();
        in.m = t.variables;
        in.table = std::move(t);
        in.psi = numbers(j, "psi", static_cast<std::size_t>(in.m));
        if (!j.contains("mode")) in.mode = "backtrack";
        return in;
    }

    in.m = need(j, "m").get<int>();
    if (in.m < 0) throw LllError("criteria: m must be >= 0");
    const auto& adj = need(j, "adjacency");
    if (!adj.is_array() || static_cast<int>(adj.size()) != in.m) throw LllError("dimension mismatch: adjacency");
    std::vector<std::vector<int>> lists;
    for (const auto& row : adj) lists.push_back(ints(row, "adjacency row"));
    in.graph = DependencyGraph::from_adjacency(lists);
    in.gamma = numbers(j, "gamma", static_cast<std::size_t>(in.m));
    if (j.contains("psi")) in.psi = numbers(j, "psi", static_cast<std::size_t>(in.m));
    if (j.contains("cliques")) {
        CliqueLllConfig cfg;
        for (const auto& c : j.at("cliques")) cfg.cliques.push_back(ints(c, "clique"));
        const auto& x = need(j, "x");
        if (!x.is_array() || x.size() != cfg.cliques.size()) throw LllError("dimension mismatch: x");
        for (std::size_t v = 0; v < cfg.cliques.size(); ++v) {
            std::vector<double> row;
            for (const auto& e : x[v]) row.push_back(e.get<double>());
            if (row.size() != cfg.cliques[v].size()) throw LllError("dimension mismatch: x row");
            cfg.x.push_back(std::move(row));
        }
        in.clique = std::move(cfg);
    }
    return in;
}

CriteriaInput parse_criteria_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw LllError("cannot open " + path);
    json j;
    try {
        j = json::parse(f);
    } catch (const json::exception& e) {
        throw LllError(std::string("criteria: malformed JSON: ") + e.what());
    }
    return parse_criteria(j);
}

CriteriaResult evaluate_criteria(const CriteriaInput& in, const std::string& mode_override) {
    const std::string mode = mode_override.empty() ? in.mode : mode_override;
    if (std::find(criteria_modes().begin(), criteria_modes().end(), mode) == criteria_modes().end())
        throw LllError("unknown mode '" + mode + "'");
    CriteriaResult res;
    if (in.preset == "rainbow") {
        if (mode != "cluster") throw LllError("rainbow preset supports cluster mode only");
        res = rainbow_preset(in);
    } else if (in.preset == "aec-backtrack") {
        if (mode != "backtrack") throw LllError("aec-backtrack preset supports backtrack mode only");
        res = aec_preset(in);
    } else if (mode == "backtrack") {
        if (!in.table) throw LllError("backtrack mode needs a 'backtrack' table");
        auto r = backtracking_criterion(*in.table, in.psi);
        res = {r.pass, to_json(r)};
    } else {
        if (in.table) throw LllError("a backtrack table only supports backtrack mode");
        if (mode == "shearer") {
            auto r = shearer_polynomials(in.gamma, in.graph);
            res = {r.pass, to_json(r)};
        } else if (mode == "clique") {
            if (!in.clique) throw LllError("clique mode needs 'cliques' and 'x'");
            auto r = clique_lll_check(in.gamma, in.graph, *in.clique);
            res = {r.pass, to_json(r)};
        } else {
            if (in.psi.empty() && in.m > 0) throw LllError(mode + " mode needs 'psi'");
            auto r = mode == "general" ? general_lll_check(in.gamma, in.graph, in.psi)
                                       : cluster_expansion_check(in.gamma, in.graph, in.psi);
            res = {r.pass, to_json(r)};
        }
    }
    res.report = {{"mode", mode}, {"pass", res.pass}, {"result", res.report}};
    if (!in.preset.empty()) res.report["preset"] = in.preset;
    return res;
}

}  // namespace lll

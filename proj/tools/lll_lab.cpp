// lll-lab: solvers, criteria, Monte-Carlo verdict suites and generators.
//
// Exit codes: 0 ok, 1 usage/parse/config error, 2 censored run, 3 criterion
// or verdict failure. JSON goes to stdout (or --json PATH), summaries to stderr.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "lll/analysis.hpp"
#include "lll/engine.hpp"
#include "lll/io.hpp"
#include "lll/oracle.hpp"
#include "lll/solvers/aec.hpp"
#include "lll/solvers/cnf.hpp"
#include "lll/solvers/coloring.hpp"
#include "lll/solvers/graph.hpp"
#include "lll/solvers/ksat.hpp"
#include "lll/solvers/rainbow.hpp"
#include "lll/witness.hpp"

using nlohmann::json;
using namespace lll;

namespace {

enum Exit { kOk = 0, kUsage = 1, kCensored = 2, kFail = 3 };

const std::vector<std::string> kSolvers{"ksat-mt",        "ksat-backtrack", "aec-backtrack", "aec-clique-mt",
                                        "vertex-coloring", "rainbow",        "rainbow-partial"};

struct Common {
    std::string solver;
    std::string instance;
    std::uint64_t seed = 1;
    long long max_steps = 1'000'000;
    std::string strategy = "lowest_index";
    int colors = 0;
    double bias = -1.0;
    std::string json_out;
};

std::uint64_t default_seed() {
    const char* env = std::getenv("LLL_LAB_SEED");
    if (!env || !*env) return 1;
    std::string s(env);
    if (s.find_first_not_of("0123456789") != std::string::npos || s.size() > 20)
        throw LllError("LLL_LAB_SEED must be a nonnegative integer");
    try {
        return std::stoull(s);
    } catch (const std::exception&) {
        throw LllError("LLL_LAB_SEED out of range");
    }
}

void emit(const json& j, const std::string& path) {
    const std::string text = j.dump(2) + "\n";
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw LllError("cannot write " + path);
    f << text;
}

// The problem plus what the verdict suites need to know about it.
struct Loaded {
    std::unique_ptr<SearchProblem> problem;
    std::vector<double> declared_gamma;           // empty: use the oracle
    std::optional<std::vector<double>> closed_psi;  // rainbow
    std::optional<std::vector<double>> closed_zeta;
    const RainbowMatching* rainbow = nullptr;
};

Loaded load(const Common& c) {
    Loaded l;
    const auto& s = c.solver;
    if (s == "ksat-mt" || s == "ksat-backtrack") {
        auto f = parse_dimacs_file(c.instance);
        if (s == "ksat-mt") {
            auto p = std::make_unique<KsatMt>(f);
            l.declared_gamma = p->declared_charges();
            l.problem = std::move(p);
        } else {
            std::optional<std::vector<double>> bias;
            if (c.bias >= 0.0) {
                if (c.bias > 1.0) throw LllError("--bias must lie in [0,1]");
                bias = std::vector<double>(static_cast<std::size_t>(f.variables), c.bias);
            }
            l.problem = std::make_unique<KsatBacktrack>(f, bias);
        }
        return l;
    }
    if (s == "aec-backtrack" || s == "aec-clique-mt" || s == "vertex-coloring") {
        auto g = parse_graph_file(c.instance);
        if (c.colors <= 0) throw LllError("--colors is required for " + s);
        if (s == "aec-backtrack") {
            l.problem = std::make_unique<AecBacktrack>(g, c.colors);
        } else if (s == "aec-clique-mt") {
            auto p = std::make_unique<AecCliqueMt>(g, c.colors);
            l.declared_gamma = p->charges();
            l.problem = std::move(p);
        } else {
            auto p = std::make_unique<VertexColoringGreedy>(g, c.colors);
            l.declared_gamma.assign(static_cast<std::size_t>(p->flaw_count()), p->declared_charge());
            l.problem = std::move(p);
        }
        return l;
    }
    if (s == "rainbow" || s == "rainbow-partial") {
        auto p = std::make_unique<RainbowMatching>(parse_colored_clique_file(c.instance));
        const std::size_t m = static_cast<std::size_t>(p->flaw_count());
        l.declared_gamma.assign(m, p->declared_charge());
        l.closed_psi = std::vector<double>(m, p->default_psi());
        l.closed_zeta = std::vector<double>(m, p->zeta_closed_form(p->default_psi()));
        l.rainbow = p.get();
        l.problem = std::move(p);
        return l;
    }
    throw LllError("unknown solver: " + s);
}

json output_json(const Common& c, const SearchProblem& p, const State& s) {
    if (c.solver == "ksat-mt" || c.solver == "ksat-backtrack") return {{"assignment", s}};
    if (c.solver == "aec-backtrack" || c.solver == "aec-clique-mt") return {{"edge_colors", s}};
    if (c.solver == "vertex-coloring") return {{"colors", s}};
    const auto& r = dynamic_cast<const RainbowMatching&>(p);
    json edges = json::array();
    for (int e : r.matching_edges(s)) {
        auto [u, v] = r.clique().endpoints(e);
        edges.push_back({u, v, r.clique().color(e)});
    }
    return {{"matching", edges}};
}

int cmd_solve(const Common& c) {
    auto l = load(c);
    const auto& p = *l.problem;
    json rep{{"op", "solve"},
             {"solver", c.solver},
             {"instance", c.instance},
             {"params", {{"seed", c.seed}, {"max_steps", c.max_steps}, {"strategy", c.strategy}}}};
    if (c.colors > 0) rep["params"]["colors"] = c.colors;
    if (c.bias >= 0.0) rep["params"]["bias"] = c.bias;

    if (c.solver == "rainbow-partial") {
        const auto& k = l.rainbow->clique();
        const double alpha = k.lambda() * k.half() > 1.0 ? rainbow_partial_alpha(k.half(), k.lambda()) : l.rainbow->default_psi();
        auto edges = rainbow_partial_once(*l.rainbow, alpha, c.seed, c.max_steps);
        std::set<int> colors;
        json out = json::array();
        for (int e : edges) {
            colors.insert(k.color(e));
            auto [u, v] = k.endpoints(e);
            out.push_back({u, v, k.color(e)});
        }
        const bool valid = colors.size() == edges.size();
        rep["params"]["alpha"] = alpha;
        rep["valid"] = valid;
        rep["size"] = edges.size();
        rep["output"] = {{"matching", out}};
        emit(rep, c.json_out);
        std::cerr << "rainbow-partial: " << edges.size() << " of " << k.half() << " edges kept\n";
        return valid ? kOk : kFail;
    }

    auto strategy = FlawChoiceStrategy::parse(c.strategy);
    RunOptions opt;
    opt.max_steps = c.max_steps;
    auto r = run(p, strategy, c.seed, opt);
    const bool valid = r.terminated && p.is_valid_output(r.final_state);
    rep["terminated"] = r.terminated;
    rep["steps"] = r.steps;
    rep["valid"] = valid;
    if (r.terminated) rep["output"] = output_json(c, p, r.final_state);
    emit(rep, c.json_out);
    if (!r.terminated) {
        std::cerr << c.solver << ": censored after " << r.steps << " steps\n";
        return kCensored;
    }
    std::cerr << c.solver << ": " << (valid ? "valid" : "INVALID") << " output after " << r.steps << " steps\n";
    if (valid && (c.solver == "ksat-mt" || c.solver == "ksat-backtrack")) {
        std::cerr << "v";
        for (std::size_t v = 0; v < r.final_state.size(); ++v)
            std::cerr << ' ' << (r.final_state[v] ? "" : "-") << v + 1;
        std::cerr << " 0\n";
    }
    return valid ? kOk : kFail;
}

int cmd_criteria(const std::string& path, const std::string& mode, const std::string& json_out) {
    auto in = parse_criteria_file(path);
    auto res = evaluate_criteria(in, mode);
    json rep{{"op", "criteria"}, {"instance", path}};
    for (auto& [k, v] : res.report.items()) rep[k] = v;
    emit(rep, json_out);
    std::cerr << "criteria (" << rep["mode"].get<std::string>() << "): " << (res.pass ? "pass" : "FAIL") << "\n";
    return res.pass ? kOk : kFail;
}

struct VerifyOptions {
    std::string suite;
    long long runs = 10000;
    int parallel = 1;
    std::string mode = "cluster";
    int max_tree_nodes = 3;
    double psi = -1.0;
    int event_flaw = -1;
    std::string event_state;
};

std::vector<double> gamma_for(const Loaded& l) {
    if (!l.declared_gamma.empty() || l.problem->flaw_count() == 0) return l.declared_gamma;
    return build_oracle(*l.problem).charges;
}

std::vector<double> cluster_psi(const Loaded& l, const std::vector<double>& gamma) {
    if (l.closed_psi) return *l.closed_psi;
    auto psi = minimal_cluster_weights(gamma, DependencyGraph::from_problem(*l.problem));
    if (!psi) throw CriterionRefused("cluster expansion condition fails: no weights found");
    return *psi;
}

State parse_state(const std::string& text) {
    State s;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t pos = 0;
            s.push_back(std::stoi(tok, &pos));
            if (pos != tok.size()) throw LllError("");
        } catch (const std::exception&) {
            throw LllError("--event-state: expected comma-separated integers");
        }
    }
    return s;
}

int cmd_verify(const Common& c, const VerifyOptions& v) {
    if (v.runs <= 0) throw LllError("runs must be positive");
    if (v.parallel < 1) throw LllError("--parallel must be at least 1");
    auto l = load(c);
    const auto& p = *l.problem;
    if (p.is_backtracking()) throw LllError("verify suites need a commutative (non-backtracking) solver");
    McOptions mc;
    mc.runs = v.runs;
    mc.seed = c.seed;
    mc.threads = v.parallel;
    mc.max_steps = c.max_steps;
    auto strategy = FlawChoiceStrategy::parse(c.strategy);

    AnalysisReport rep;
    if (v.suite == "witness") {
        rep = check_witness_tree_lemma(p, strategy, gamma_for(l), v.max_tree_nodes, mc);
    } else if (v.suite == "resamples") {
        auto gamma = gamma_for(l);
        if (v.mode == "shearer") {
            rep = check_resample_bounds(p, strategy, gamma, BoundMode::shearer, {}, mc);
        } else if (v.mode == "cluster") {
            rep = check_resample_bounds(p, strategy, gamma, BoundMode::cluster, cluster_psi(l, gamma), mc, l.closed_zeta);
        } else {
            throw LllError("--mode must be cluster or shearer");
        }
    } else if (v.suite == "distribution") {
        auto gamma = gamma_for(l);
        rep = output_distribution(p, strategy, cluster_psi(l, gamma), mc);
    } else if (v.suite == "partial") {
        if (l.rainbow) {
            rep = rainbow_partial(*l.rainbow, mc).report;
        } else {
            if (!(v.psi > 0.0)) throw LllError("--psi is required for the partial suite");
            auto gamma = gamma_for(l);
            PartialAvoidanceConfig cfg{std::vector<double>(gamma.size(), v.psi), gamma, {}};
            rep = partial_avoidance(p, strategy, cfg, mc);
        }
    } else if (v.suite == "event") {
        auto gamma = gamma_for(l);
        auto psi = cluster_psi(l, gamma);
        EventExtension e;
        if (!v.event_state.empty()) {
            auto space = enumerate_space(p);
            State s0 = parse_state(v.event_state);
            if (!space.find(s0)) throw LllError("--event-state is not a state of this instance");
            e = singleton_event(p, space, s0);
        } else {
            const int i = v.event_flaw < 0 ? 0 : v.event_flaw;
            if (i >= p.flaw_count()) throw LllError("--event-flaw out of range");
            e = flaw_as_event(p, i);
        }
        rep = check_event_probability(p, strategy, e, psi, mc);
    } else {
        throw LllError("unknown suite: " + v.suite);
    }
    rep.instance = c.instance;
    rep.params["solver"] = c.solver;
    rep.params["suite"] = v.suite;
    emit(rep.to_json(), c.json_out);
    std::cerr << "verify " << v.suite << ": " << rep.verdicts.size() - rep.failures() << "/" << rep.verdicts.size()
              << " verdicts pass\n";
    return rep.pass() ? kOk : kFail;
}

struct GenOptions {
    std::string family;
    int n = 0;
    int k = 3;
    int degree = 2;
    int delta = 3;
    int multiplicity = 1;
    std::string shape = "random";
};

int cmd_gen(const GenOptions& g, std::uint64_t seed) {
    if (g.n < 0) throw LllError("--n must be >= 0");
    if (g.family == "ksat") {
        std::cout << to_dimacs(random_ksat(g.n, g.k, g.degree, seed));
    } else if (g.family == "graph") {
        GraphInstance gr;
        if (g.shape == "random") gr = g.n == 0 ? GraphInstance(0, {}) : random_graph_max_degree(g.n, g.delta, seed);
        else if (g.shape == "complete") gr = complete_graph(g.n);
        else if (g.shape == "path") gr = path_graph(g.n);
        else if (g.shape == "cycle") gr = cycle_graph(g.n);
        else if (g.shape == "petersen") gr = petersen_graph();
        else if (g.shape == "hypercube") gr = hypercube_graph(g.n);
        else throw LllError("unknown --shape: " + g.shape);
        std::cout << to_text(gr);
    } else if (g.family == "colored-clique") {
        std::cout << to_text(random_colored_clique(2 * g.n, g.multiplicity, seed));
    } else {
        throw LllError("unknown family: " + g.family);
    }
    return kOk;
}

int cmd_trace(const Common& c, int max_trees) {
    auto l = load(c);
    const auto& p = *l.problem;
    if (c.solver == "rainbow-partial") throw LllError("trace supports plain solvers only");
    RunOptions opt;
    opt.max_steps = c.max_steps;
    opt.record_trajectory = true;
    auto r = run(p, FlawChoiceStrategy::parse(c.strategy), c.seed, opt);
    const auto w = r.trajectory->witness_sequence();
    json rep{{"op", "trace"},
             {"solver", c.solver},
             {"instance", c.instance},
             {"params", {{"seed", c.seed}, {"max_steps", c.max_steps}, {"strategy", c.strategy}}},
             {"terminated", r.terminated},
             {"steps", r.steps},
             {"witness_sequence", w}};
    if (p.is_backtracking()) {
        rep["forest"] = json::parse(build_witness_forest(*r.trajectory).to_json());
    } else {
        const auto g = DependencyGraph::from_problem(p);
        json trees = json::array();
        const std::size_t first = w.size() > static_cast<std::size_t>(max_trees) ? w.size() - max_trees : 0;
        for (std::size_t k = first + 1; k <= w.size(); ++k) {
            auto t = build_witness_tree(w, k, g);
            trees.push_back({{"k", k}, {"canonical", t.canonical()}, {"tree", json::parse(t.to_json())}});
        }
        rep["trees"] = trees;
    }
    emit(rep, c.json_out);
    std::cerr << "trace: " << r.steps << " steps" << (r.terminated ? "" : " (censored)") << "\n";
    return r.terminated ? kOk : kCensored;
}

void add_common(CLI::App* sub, Common& c, bool with_solver) {
    if (with_solver) {
        sub->add_option("solver", c.solver, "Solver name")->required()->check(CLI::IsMember(kSolvers));
        sub->add_option("instance", c.instance, "Instance file")->required();
        sub->add_option("--max-steps", c.max_steps, "Step cap per run")->check(CLI::PositiveNumber);
        sub->add_option("--strategy", c.strategy, "lowest_index or recency");
        sub->add_option("--colors,--q", c.colors, "Number of colors (graph solvers)");
        sub->add_option("--bias", c.bias, "Pr[x = 1] for biased ksat-backtrack");
    }
    sub->add_option("--seed", c.seed, "Master seed (default LLL_LAB_SEED or 1)");
    sub->add_option("--json", c.json_out, "Write the JSON report here instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lll-lab: local lemma solvers, criteria and verification suites"};
    app.set_help_flag("--help", "Print help");
    app.require_subcommand(1);

    Common c;
    try {
        c.seed = default_seed();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }

    auto* solve = app.add_subcommand("solve", "Run a solver once");
    add_common(solve, c, true);

    std::string criteria_path, mode;
    auto* criteria = app.add_subcommand("criteria", "Evaluate a local lemma criterion from JSON");
    criteria->add_option("file", criteria_path, "Criteria JSON")->required();
    criteria->add_option("--mode", mode, "general, cluster, shearer, clique or backtrack")
        ->check(CLI::IsMember(criteria_modes()));
    criteria->add_option("--json", c.json_out, "Write the JSON report here instead of stdout");

    VerifyOptions v;
    auto* verify = app.add_subcommand("verify", "Monte-Carlo verdict suite");
    add_common(verify, c, true);
    verify->add_option("--suite", v.suite, "witness, resamples, distribution, partial or event")
        ->required()
        ->check(CLI::IsMember({"witness", "resamples", "distribution", "partial", "event"}));
    verify->add_option("--runs", v.runs, "Number of runs");
    verify->add_option("--parallel", v.parallel, "Worker threads");
    verify->add_option("--mode", v.mode, "cluster or shearer (resamples suite)");
    verify->add_option("--max-tree-nodes", v.max_tree_nodes, "Largest witness tree checked")->check(CLI::Range(1, 8));
    verify->add_option("--psi", v.psi, "Uniform psi (partial suite)");
    verify->add_option("--event-flaw", v.event_flaw, "Event = this flaw (event suite)");
    verify->add_option("--event-state", v.event_state, "Event = this single state, comma separated (event suite)");

    GenOptions g;
    auto* gen = app.add_subcommand("gen", "Generate a random instance on stdout");
    gen->add_option("family", g.family, "ksat, graph or colored-clique")
        ->required()
        ->check(CLI::IsMember({"ksat", "graph", "colored-clique"}));
    gen->add_option("--n", g.n, "Variables, vertices, or half the clique size");
    gen->add_option("--k", g.k, "Clause width");
    gen->add_option("--degree", g.degree, "Occurrences per variable");
    gen->add_option("--delta", g.delta, "Maximum degree");
    gen->add_option("--multiplicity", g.multiplicity, "Edges per color");
    gen->add_option("--shape", g.shape, "random, complete, path, cycle, petersen or hypercube");
    gen->add_option("--seed", c.seed, "Seed (default LLL_LAB_SEED or 1)");

    int max_trees = 20;
    auto* trace = app.add_subcommand("trace", "Run once and dump witness trees or the witness forest");
    add_common(trace, c, true);
    trace->add_option("--max-trees", max_trees, "Trees for the last steps")->check(CLI::NonNegativeNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*solve) return cmd_solve(c);
        if (*criteria) return cmd_criteria(criteria_path, mode, c.json_out);
        if (*verify) return cmd_verify(c, v);
        if (*gen) return cmd_gen(g, c.seed);
        if (*trace) return cmd_trace(c, max_trees);
    } catch (const CriterionRefused& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return kFail;
    } catch (const LllError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}

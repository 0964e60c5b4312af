#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "lll/criteria.hpp"
#include "lll/problem.hpp"
#include "lll/solvers/graph.hpp"

namespace lll {

// Number of cycles of length 2l through a fixed edge.
using CycleBound = std::function<double(int l)>;

CycleBound default_cycle_bound(int delta);  // (delta-1)^{2l-2}
// H-free refinement: beta * delta^{2l-2-exponent}.
CycleBound h_free_cycle_bound(double beta, int delta, double exponent);

// Backtracking acyclic edge coloring with q = 2(delta-1) + Q colors.
// State: color per edge, -1 uncolored; always a partial proper coloring with
// no bichromatic cycle. Flaw e = edge e uncolored.
class AecBacktrack : public SearchProblem {
public:
    AecBacktrack(GraphInstance g, int q);

    std::string name() const override { return "aec-backtrack"; }
    int flaw_count() const override { return g_.edge_count(); }
    bool is_present(int e, const State& s) const override { return s[e] < 0; }
    State sample_action(int e, const State& s, Rng& rng) const override;
    std::vector<Transition> actions(int e, const State& s) const override;
    bool adjacent(int e, int f) const override { return comp_[g_.edges[e].first] == comp_[g_.edges[f].first]; }
    double weight(const State&) const override { return 1.0; }
    State sample_initial(Rng&) const override { return State(static_cast<std::size_t>(g_.edge_count()), -1); }
    std::vector<Transition> initial_distribution() const override;
    double init_ratio() const override;
    std::optional<std::vector<State>> enumerate_states() const override;
    bool is_backtracking() const override { return true; }
    bool is_valid_output(const State& s) const override;

    const GraphInstance& graph() const { return g_; }
    int colors() const { return q_; }
    int delta() const { return delta_; }
    int slack() const { return q_ - 2 * (delta_ - 1); }  // Q

    // Colors that are not 4-forbidden for e, ascending.
    std::vector<int> available(int e, const State& s) const;
    // Color e with c, then uncolor the lowest bichromatic cycle through e
    // except its last two edges.
    State apply(int e, int c, const State& s) const;
    // Bichromatic cycles through e (e colored), each in walk order starting at e.
    std::vector<std::vector<int>> bichromatic_cycles(int e, const State& s) const;
    // Edges uncolored when cycle C (walk order from e) triggers a backtrack.
    static std::vector<int> uncolored_set(const std::vector<int>& cycle);

    // gamma_empty = 1/Q, gamma_S = |C_e(S)|/Q from explicit cycles of length
    // 6..max_len through each edge.
    BacktrackChargeTable charge_table(int max_len) const;

private:
    GraphInstance g_;
    int q_;
    int delta_;
    std::vector<int> comp_;
};

// zeta bound (1/psi)(1/Q + sum_{l>=3} bound(l) psi^{2l-2} / Q).
double aec_zeta_bound(int delta, int Q, double psi, const CycleBound& bound, int max_l = 400);
// Closed-form criterion at psi = 1/(gamma (delta-1)); passes iff zeta < 1.
CriterionReport aec_backtrack_criterion(int delta, int q, double gamma_param,
                                        const std::optional<CycleBound>& bound = std::nullopt);
// gamma + 1/(gamma (gamma^2 - 1)) on gamma > 1.
double aec_psi_objective(double gamma);

// Moser-Tardos with flaws f_P (monochromatic 2-paths, indices first) and f_C
// (bicolored even cycles of length >= 4, enumerated up to max_cycle_len).
class AecCliqueMt : public SearchProblem {
public:
    AecCliqueMt(GraphInstance g, int q, int max_cycle_len = 8, std::size_t cycle_cap = 200000);

    std::string name() const override { return "aec-clique-mt"; }
    int flaw_count() const override { return static_cast<int>(flaw_edges_.size()); }
    bool is_present(int i, const State& s) const override;
    State sample_action(int i, const State& s, Rng& rng) const override;
    std::vector<Transition> actions(int i, const State& s) const override;
    bool adjacent(int i, int j) const override;
    std::vector<int> neighbors(int i) const override;
    double weight(const State&) const override { return 1.0; }
    State sample_initial(Rng& rng) const override;
    std::optional<std::vector<State>> enumerate_states() const override;
    bool is_valid_output(const State& s) const override;

    const GraphInstance& graph() const { return g_; }
    int path_flaws() const { return paths_; }
    const std::vector<int>& flaw_edges(int i) const { return flaw_edges_[i]; }
    bool is_cycle(int i) const { return i >= paths_; }
    // Whether every even cycle of the graph is present as a flaw.
    bool cycles_complete() const { return complete_; }

    // mu(f): 1/q for paths, q(q-1)/q^{|C|} for cycles.
    std::vector<double> charges() const;
    // One clique per edge; x from the appendix formulas.
    CliqueLllConfig clique_config(double eps, double c) const;
    DependencyGraph dependency_graph() const;

private:
    GraphInstance g_;
    int q_;
    int delta_;
    int paths_ = 0;
    bool complete_ = true;
    std::vector<std::vector<int>> flaw_edges_;  // paths: 2 edges; cycles: walk order
    std::vector<std::vector<int>> by_edge_;     // flaws containing each edge
};

}  // namespace lll

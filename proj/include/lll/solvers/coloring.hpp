#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "lll/problem.hpp"
#include "lll/solvers/graph.hpp"
#include "lll/strategy.hpp"

namespace lll {

// Greedy proper vertex coloring. Flaw (e, c), index e*q + c, holds when both
// endpoints of e have color c. Addressing recolors the endpoints in order
// u < v, each uniformly among the q - delta lowest colors absent from its
// neighborhood.
class VertexColoringGreedy : public SearchProblem {
public:
    VertexColoringGreedy(GraphInstance g, int q);

    std::string name() const override { return "vertex-coloring-greedy"; }
    int flaw_count() const override { return g_.edge_count() * q_; }
    bool is_present(int i, const State& s) const override;
    std::vector<int> present_flaws(const State& s) const override;
    State sample_action(int i, const State& s, Rng& rng) const override;
    std::vector<Transition> actions(int i, const State& s) const override;
    bool adjacent(int i, int j) const override { return near_[static_cast<std::size_t>(i / q_) * g_.edge_count() + j / q_]; }
    std::vector<int> neighbors(int i) const override;
    double weight(const State&) const override { return 1.0; }
    State sample_initial(Rng& rng) const override;
    std::optional<std::vector<State>> enumerate_states() const override;
    bool is_valid_output(const State& s) const override { return is_proper_vertex_coloring(g_, s); }

    const GraphInstance& graph() const { return g_; }
    int colors() const { return q_; }
    int delta() const { return delta_; }
    double declared_charge() const;  // 1/(q - delta)^2
    // Flaws on `first_edges` first (ascending), then the rest.
    FlawChoiceStrategy priority(const std::vector<int>& first_edges) const;
    // The q - delta lowest colors missing around w.
    std::vector<int> palette(int w, const State& s) const;

private:
    GraphInstance g_;
    int q_;
    int delta_;
    std::vector<char> near_;  // edges equal or within distance 2 in the line graph
};

std::vector<int> ball(const GraphInstance& g, int v, int radius);

struct LocalWeight {
    int center = 0;
    int radius = 0;
    // Reads only colors inside the radius ball.
    std::function<double(const State&)> w;
};

struct ColoringWeightSpec {
    std::vector<LocalWeight> terms;
    // Throws unless the radius+1 balls are pairwise disjoint.
    void validate(const GraphInstance& g) const;
    std::vector<int> priority_edges(const GraphInstance& g) const;  // edges inside the radius balls
};

struct LocalWeightBound {
    int center = 0;
    double r = 0.0;     // proper colorings of G_v / q^{|V_v|}
    double a = 0.0;     // sum over matchings of G_v of (q/(q-delta)^2)^{|M|}
    double e_nu = 0.0;  // E[W_v] under the uniform proper coloring
    double bound = 0.0; // r a e_nu
};

std::vector<LocalWeightBound> coloring_weight_bounds(const GraphInstance& g, int q, const ColoringWeightSpec& spec,
                                                     double enumeration_cap = 5e6);
double count_proper_colorings(const GraphInstance& g, int q);

}  // namespace lll

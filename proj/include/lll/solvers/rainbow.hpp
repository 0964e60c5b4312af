#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lll/problem.hpp"

namespace lll {

// Complete graph on `vertices` (= 2n) vertices with a color per edge; 2n = 0 is allowed.
class EdgeColoredClique {
public:
    EdgeColoredClique(int vertices, std::vector<int> colors);

    int vertices() const { return v_; }
    int half() const { return v_ / 2; }  // n
    int edge_count() const { return static_cast<int>(color_.size()); }
    int edge_index(int u, int v) const;
    std::pair<int, int> endpoints(int e) const { return ends_[e]; }
    int color(int e) const { return color_[e]; }
    const std::vector<int>& colors() const { return color_; }
    int max_multiplicity() const { return mult_; }
    double lambda() const { return half() ? static_cast<double>(mult_) / half() : 0.0; }
    // Pairs {e1 < e2} of vertex-disjoint equally colored edges.
    const std::vector<std::pair<int, int>>& conflicts() const { return conflicts_; }

private:
    int v_;
    std::vector<int> color_;
    std::vector<std::pair<int, int>> ends_;
    std::vector<int> row_;
    int mult_ = 0;
    std::vector<std::pair<int, int>> conflicts_;
};

// Each color used on at most `multiplicity` edges, assignment shuffled.
EdgeColoredClique random_colored_clique(int vertices, int multiplicity, std::uint64_t seed);
EdgeColoredClique rainbow_colored_clique(int vertices);
// Lines "u v color", one per edge of the complete graph.
EdgeColoredClique parse_colored_clique(std::istream& in);
EdgeColoredClique parse_colored_clique_file(const std::string& path);
std::string to_text(const EdgeColoredClique& k);

// Perfect matchings of K_{2n}; state = partner array. One flaw per conflict
// pair, addressed by the switching resampling oracle.
class RainbowMatching : public SearchProblem {
public:
    explicit RainbowMatching(EdgeColoredClique k);

    std::string name() const override { return "rainbow-matching"; }
    int flaw_count() const override { return static_cast<int>(k_.conflicts().size()); }
    bool is_present(int i, const State& s) const override;
    State sample_action(int i, const State& s, Rng& rng) const override;
    std::vector<Transition> actions(int i, const State& s) const override;
    bool adjacent(int i, int j) const override;
    double weight(const State&) const override { return 1.0; }
    State sample_initial(Rng& rng) const override;
    std::optional<std::vector<State>> enumerate_states() const override;
    bool is_valid_output(const State& s) const override;

    const EdgeColoredClique& clique() const { return k_; }
    std::vector<int> matching_edges(const State& s) const;  // edge ids, ascending
    double matching_weight(const State& s, const std::vector<double>& edge_weight) const;

    double declared_charge() const;  // 1/((2n-1)(2n-3))
    double default_psi() const;      // 3/(4n^2)
    // (1 + (2n-1)(lambda n - 1) psi)^4
    double zeta_closed_form(double psi) const;

private:
    std::vector<int> vertices_of(int i) const;

    EdgeColoredClique k_;
};

// (2n-1)!!
double double_factorial_odd(int n);

}  // namespace lll

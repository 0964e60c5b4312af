#pragma once

#include <cstdint>
#include <vector>

#include "lll/problem.hpp"

namespace lll {

// Symmetric relation on flaws. Self-loops are kept (they matter for witness
// trees) but independence only looks at distinct pairs, so {i} is always
// independent.
class DependencyGraph {
public:
    DependencyGraph() = default;
    explicit DependencyGraph(int m);

    static DependencyGraph from_problem(const SearchProblem& problem);
    // Throws on an asymmetric or out-of-range list.
    static DependencyGraph from_adjacency(const std::vector<std::vector<int>>& adj);

    void add_edge(int i, int j);

    int size() const { return m_; }
    bool adjacent(int i, int j) const { return mat_[static_cast<std::size_t>(i) * m_ + j] != 0; }
    bool has_self_loop(int i) const { return adjacent(i, i); }
    // Sorted; contains i iff i has a self-loop.
    const std::vector<int>& neighbors(int i) const { return adj_[i]; }
    std::vector<int> neighbors_and_self(int i) const;

    bool is_independent(const std::vector<int>& set) const;
    std::vector<std::vector<int>> adjacency() const { return adj_; }

private:
    int m_ = 0;
    std::vector<std::vector<int>> adj_;
    std::vector<char> mat_;
};

// Sum over independent subsets I of `vertices` of prod_{j in I} w[j].
// Exact recursion Z(U) = Z(U - v) + w_v Z(U - N[v]) with memoisation; at most
// 256 vertices.
double independence_sum(const DependencyGraph& g, const std::vector<int>& vertices, const std::vector<double>& w);

}  // namespace lll

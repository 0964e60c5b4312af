#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "lll/dependency_graph.hpp"
#include "lll/engine.hpp"
#include "lll/oracle.hpp"
#include "lll/problem.hpp"

namespace lll {

// Rooted unordered labeled tree; node 0 is the root, ids in insertion order.
struct WitnessTree {
    std::vector<int> label;
    std::vector<int> parent;  // -1 for the root
    std::vector<int> depth;
    std::vector<std::vector<int>> children;

    std::size_t size() const { return label.size(); }
    int root_label() const { return label.at(0); }
    int add_node(int lbl, int par);
    // Label sets by depth, each sorted (duplicates kept).
    std::vector<std::vector<int>> levels() const;
    // Label-preserving isomorphism class; equal iff trees are isomorphic.
    std::string canonical() const;
    std::string to_json() const;
};

// Backward pass over w_{k-1}..w_1; w_j joins the deepest node whose label is
// adjacent to w_j (self-loops count), ties to the lowest node id. k is 1-based.
WitnessTree build_witness_tree(const std::vector<int>& w, std::size_t k, const DependencyGraph& g);
// The unique 1-based k with tau_W(k) isomorphic to tau, or 0.
std::size_t occurs_at(const WitnessTree& tau, const std::vector<int>& w, const DependencyGraph& g);
inline bool occurs(const WitnessTree& tau, const std::vector<int>& w, const DependencyGraph& g) {
    return occurs_at(tau, w, g) != 0;
}

// Segments I_1..I_k of a stable sequence (each sorted).
using StableSequence = std::vector<std::vector<int>>;

// Greedy partition: a new segment starts when the current one holds an index
// adjacent to the next element. Throws when the result is not stable.
StableSequence stable_partition(const std::vector<int>& seq, const DependencyGraph& g);
bool is_stable(const StableSequence& s, const DependencyGraph& g);

// pi[k] = rank of flaw k; empty means natural order.
// Tree -> witness sequence W with Rev[W] pi-stable and segments = levels.
std::vector<int> tree_to_sequence(const WitnessTree& tau, const std::vector<int>& pi = {});
// Inverse: tau_W(|W|).
WitnessTree sequence_to_tree(const std::vector<int>& w, const DependencyGraph& g);

struct WeightedTree {
    StableSequence levels;  // I_1 = {i}, I_{r+1} independent subset of Gamma(I_r)
    double weight = 0.0;    // prod of gamma over nodes
};

// Every tree in W_i with at most max_nodes nodes, once each (max_nodes <= 8).
void enumerate_witness_trees(int root, const DependencyGraph& g, const std::vector<double>& gamma, int max_nodes,
                             const std::function<void(const WeightedTree&)>& visit);
std::vector<WeightedTree> witness_trees(int root, const DependencyGraph& g, const std::vector<double>& gamma,
                                        int max_nodes);

struct ForestNode {
    int label = -1;
    int parent = -1;
    int step = -1;  // step that expanded this node, -1 if never expanded
    std::vector<int> children;
};

struct WitnessForest {
    std::vector<ForestNode> nodes;  // roots first
    std::vector<int> roots;
    long long steps = 0;

    // Frontier replay: the addressed variables w_1..w_t and the terminal
    // unassigned set U(phi).
    std::vector<int> replay_sequence(const std::vector<int>& pi = {}) const;
    std::vector<int> terminal_unassigned(const std::vector<int>& pi = {}) const;
    // S_0, S_1..S_t recovered from the structure.
    std::vector<std::vector<int>> introduced_sets(const std::vector<int>& pi = {}) const;
    std::string to_json() const;
};

// From S_0 and S_1..S_t. Optional w checks that the lowest frontier label is
// the addressed variable at every step.
WitnessForest build_witness_forest(const std::vector<int>& s0, const std::vector<std::vector<int>>& s,
                                   const std::vector<int>& w = {}, const std::vector<int>& pi = {});
WitnessForest build_witness_forest(const Trajectory& t, const std::vector<int>& pi = {});

struct CommutativityReport {
    bool commutative = true;
    long long checked = 0;  // (sigma1, sigma3, i, j) classes examined
    std::vector<std::string> violations;
};

// Exhaustive: for every sigma1 -i-> sigma2 -j-> sigma3 with i !~ j, the swapped
// paths sigma1 -j-> sigma2' -i-> sigma3 must admit an injective matching with
// equal rho products.
CommutativityReport check_commutativity(const SearchProblem& problem, std::size_t cap = 200000,
                                        std::size_t max_violations = 10);

}  // namespace lll

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace lll {

// Simple undirected graph. Edges are stored with u < v; edge index = position.
struct GraphInstance {
    int n = 0;
    std::vector<std::pair<int, int>> edges;

    GraphInstance() = default;
    GraphInstance(int vertices, std::vector<std::pair<int, int>> edge_list);

    int edge_count() const { return static_cast<int>(edges.size()); }
    int max_degree() const;
    int degree(int v) const { return static_cast<int>(inc_[v].size()); }
    const std::vector<int>& incident(int v) const { return inc_[v]; }  // edge ids, ascending
    std::vector<int> neighbors(int v) const;
    int edge_index(int u, int v) const;  // -1 if absent
    bool edges_touch(int e, int f) const;

private:
    std::vector<std::vector<int>> inc_;
};

GraphInstance complete_graph(int n);
GraphInstance path_graph(int n);
GraphInstance cycle_graph(int n);
GraphInstance petersen_graph();
GraphInstance hypercube_graph(int d);
// Random simple graph with max degree <= delta: random stub pairing,
// dropping loops and repeated pairs.
GraphInstance random_graph_max_degree(int n, int delta, std::uint64_t seed);

GraphInstance parse_graph(std::istream& in);
GraphInstance parse_graph_file(const std::string& path);
std::string to_text(const GraphInstance& g);

// Edge colorings use -1 for uncolored.
bool is_proper_edge_coloring(const GraphInstance& g, const std::vector<int>& color, bool require_complete = true);
// No cycle using exactly two alternating colors.
bool is_acyclic_edge_coloring(const GraphInstance& g, const std::vector<int>& color);
bool is_proper_vertex_coloring(const GraphInstance& g, const std::vector<int>& color);

// Simple cycles as edge-index sequences (closed walk order), each listed once.
// Only lengths in [min_len, max_len]. Throws past `cap` cycles.
std::vector<std::vector<int>> simple_cycles(const GraphInstance& g, int min_len, int max_len, std::size_t cap = 200000);

}  // namespace lll

#include "lll/solvers/graph.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include "lll/problem.hpp"
#include "lll/rng.hpp"

namespace lll {

GraphInstance::GraphInstance(int vertices, std::vector<std::pair<int, int>> edge_list) : n(vertices) {
    if (n < 0) throw LllError("negative vertex count");
    inc_.resize(static_cast<std::size_t>(n));
    std::set<std::pair<int, int>> seen;
    for (auto [u, v] : edge_list) {
        if (u < 0 || v < 0 || u >= n || v >= n) throw LllError("edge endpoint out of range");
        if (u == v) throw LllError("graph must be simple: self-loop");
        if (u > v) std::swap(u, v);
        if (!seen.insert({u, v}).second) throw LllError("graph must be simple: repeated edge");
        inc_[u].push_back(edge_count());
        inc_[v].push_back(edge_count());
        edges.push_back({u, v});
    }
}

int GraphInstance::max_degree() const {
    int d = 0;
    for (const auto& l : inc_) d = std::max(d, static_cast<int>(l.size()));
    return d;
}

std::vector<int> GraphInstance::neighbors(int v) const {
    std::vector<int> out;
    for (int e : inc_[v]) out.push_back(edges[e].first == v ? edges[e].second : edges[e].first);
    std::sort(out.begin(), out.end());
    return out;
}

int GraphInstance::edge_index(int u, int v) const {
    if (u < 0 || v < 0 || u >= n || v >= n) return -1;
    for (int e : inc_[u]) {
        const auto& [a, b] = edges[e];
        if ((a == u && b == v) || (a == v && b == u)) return e;
    }
    return -1;
}

bool GraphInstance::edges_touch(int e, int f) const {
    auto [a, b] = edges[e];
    auto [c, d] = edges[f];
    return a == c || a == d || b == c || b == d;
}

GraphInstance complete_graph(int n) {
    std::vector<std::pair<int, int>> es;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) es.push_back({u, v});
    return GraphInstance(n, es);
}

GraphInstance path_graph(int n) {
    std::vector<std::pair<int, int>> es;
    for (int v = 0; v + 1 < n; ++v) es.push_back({v, v + 1});
    return GraphInstance(n, es);
}

GraphInstance cycle_graph(int n) {
    if (n < 3) throw LllError("cycle needs at least 3 vertices");
    std::vector<std::pair<int, int>> es;
    for (int v = 0; v < n; ++v) es.push_back({v, (v + 1) % n});
    return GraphInstance(n, es);
}

GraphInstance petersen_graph() {
    std::vector<std::pair<int, int>> es;
    for (int i = 0; i < 5; ++i) {
        es.push_back({i, (i + 1) % 5});
        es.push_back({i, i + 5});
        es.push_back({5 + i, 5 + (i + 2) % 5});
    }
    return GraphInstance(10, es);
}

GraphInstance hypercube_graph(int d) {
    if (d < 0 || d > 20) throw LllError("hypercube dimension out of range");
    std::vector<std::pair<int, int>> es;
    for (int v = 0; v < (1 << d); ++v)
        for (int b = 0; b < d; ++b)
            if (!(v >> b & 1)) es.push_back({v, v | (1 << b)});
    return GraphInstance(1 << d, es);
}

GraphInstance random_graph_max_degree(int n, int delta, std::uint64_t seed) {
    if (n < 0 || delta < 0) throw LllError("random graph: negative parameter");
    Rng rng(seed);
    std::vector<int> stubs;
    for (int v = 0; v < n; ++v)
        for (int d = 0; d < delta; ++d) stubs.push_back(v);
    for (std::size_t i = stubs.size(); i > 1; --i) std::swap(stubs[i - 1], stubs[rng.below(i)]);
    std::set<std::pair<int, int>> es;
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
        int u = stubs[i], v = stubs[i + 1];
        if (u == v) continue;
        es.insert({std::min(u, v), std::max(u, v)});
    }
    return GraphInstance(n, std::vector<std::pair<int, int>>(es.begin(), es.end()));
}

GraphInstance parse_graph(std::istream& in) {
    std::string line;
    auto next_line = [&](std::vector<long long>& nums) {
        while (std::getline(in, line)) {
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            std::istringstream ls(line);
            nums.clear();
            long long x;
            while (ls >> x) nums.push_back(x);
            if (!ls.eof()) throw LllError("malformed graph line: " + line);
            if (!nums.empty()) return true;
        }
        return false;
    };
    std::vector<long long> nums;
    if (!next_line(nums) || nums.size() != 2 || nums[0] < 0 || nums[1] < 0) throw LllError("malformed graph header");
    const int n = static_cast<int>(nums[0]);
    const long long m = nums[1];
    std::vector<std::pair<int, int>> es;
    for (long long i = 0; i < m; ++i) {
        if (!next_line(nums) || nums.size() != 2) throw LllError("malformed or missing edge line");
        es.push_back({static_cast<int>(nums[0]), static_cast<int>(nums[1])});
    }
    if (next_line(nums)) throw LllError("trailing data after edge list");
    return GraphInstance(n, es);
}

GraphInstance parse_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw LllError("cannot open " + path);
    return parse_graph(in);
}

std::string to_text(const GraphInstance& g) {
    std::ostringstream os;
    os << g.n << ' ' << g.edge_count() << '\n';
    for (auto [u, v] : g.edges) os << u << ' ' << v << '\n';
    return os.str();
}

bool is_proper_edge_coloring(const GraphInstance& g, const std::vector<int>& color, bool require_complete) {
    if (static_cast<int>(color.size()) != g.edge_count()) return false;
    for (int v = 0; v < g.n; ++v) {
        std::set<int> used;
        for (int e : g.incident(v)) {
            if (color[e] < 0) {
                if (require_complete) return false;
                continue;
            }
            if (!used.insert(color[e]).second) return false;
        }
    }
    return true;
}

bool is_acyclic_edge_coloring(const GraphInstance& g, const std::vector<int>& color) {
    if (!is_proper_edge_coloring(g, color, false)) return false;
    std::set<int> palette;
    for (int c : color)
        if (c >= 0) palette.insert(c);
    std::vector<int> cols(palette.begin(), palette.end());
    std::vector<int> parent(static_cast<std::size_t>(g.n));
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (std::size_t a = 0; a < cols.size(); ++a)
        for (std::size_t b = a + 1; b < cols.size(); ++b) {
            std::iota(parent.begin(), parent.end(), 0);
            for (int e = 0; e < g.edge_count(); ++e) {
                if (color[e] != cols[a] && color[e] != cols[b]) continue;
                int x = find(g.edges[e].first), y = find(g.edges[e].second);
                if (x == y) return false;
                parent[x] = y;
            }
        }
    return true;
}

bool is_proper_vertex_coloring(const GraphInstance& g, const std::vector<int>& color) {
    if (static_cast<int>(color.size()) != g.n) return false;
    for (int c : color)
        if (c < 0) return false;
    for (auto [u, v] : g.edges)
        if (color[u] == color[v]) return false;
    return true;
}

std::vector<std::vector<int>> simple_cycles(const GraphInstance& g, int min_len, int max_len, std::size_t cap) {
    // Each cycle is rooted at its smallest vertex s and walked in the direction
    // whose second vertex is smaller than its last one.
    std::vector<std::vector<int>> out;
    std::vector<char> on(static_cast<std::size_t>(g.n), 0);
    std::vector<int> vpath, epath;
    std::function<void(int, int)> dfs = [&](int s, int v) {
        for (int e : g.incident(v)) {
            int w = g.edges[e].first == v ? g.edges[e].second : g.edges[e].first;
            if (w < s) continue;
            if (w == s) {
                int len = static_cast<int>(epath.size()) + 1;
                if (len >= 3 && len >= min_len && len <= max_len && vpath[1] < v) {
                    auto c = epath;
                    c.push_back(e);
                    out.push_back(std::move(c));
                    if (out.size() > cap) throw LllError("cycle enumeration cap exceeded");
                }
                continue;
            }
            if (on[w] || static_cast<int>(epath.size()) + 1 >= max_len) continue;
            on[w] = 1;
            vpath.push_back(w);
            epath.push_back(e);
            dfs(s, w);
            vpath.pop_back();
            epath.pop_back();
            on[w] = 0;
        }
    };
    for (int s = 0; s < g.n; ++s) {
        on[s] = 1;
        vpath = {s};
        epath.clear();
        dfs(s, s);
        on[s] = 0;
    }
    return out;
}

}  // namespace lll

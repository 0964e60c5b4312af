#include "lll/dependency_graph.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <unordered_map>

namespace lll {

DependencyGraph::DependencyGraph(int m)
    : m_(m), adj_(static_cast<std::size_t>(m)), mat_(static_cast<std::size_t>(m) * m, 0) {
    if (m < 0) throw LllError("negative flaw count");
}

DependencyGraph DependencyGraph::from_problem(const SearchProblem& problem) {
    const int m = problem.flaw_count();
    DependencyGraph g(m);
    for (int i = 0; i < m; ++i)
        for (int j : problem.neighbors(i)) {
            if (j < 0 || j >= m) throw LllError("neighbor index out of range");
            if (!problem.adjacent(j, i)) throw LllError("Gamma not symmetric");
            g.add_edge(i, j);
        }
    return g;
}

DependencyGraph DependencyGraph::from_adjacency(const std::vector<std::vector<int>>& adj) {
    const int m = static_cast<int>(adj.size());
    DependencyGraph g(m);
    for (int i = 0; i < m; ++i)
        for (int j : adj[i]) {
            if (j < 0 || j >= m) throw LllError("neighbor index out of range");
            g.add_edge(i, j);
        }
    for (int i = 0; i < m; ++i)
        for (int j : adj[i])
            if (std::find(adj[j].begin(), adj[j].end(), i) == adj[j].end())
                throw LllError("adjacency not symmetric");
    return g;
}

void DependencyGraph::add_edge(int i, int j) {
    if (i < 0 || j < 0 || i >= m_ || j >= m_) throw LllError("edge index out of range");
    if (adjacent(i, j)) return;
    mat_[static_cast<std::size_t>(i) * m_ + j] = 1;
    mat_[static_cast<std::size_t>(j) * m_ + i] = 1;
    adj_[i].insert(std::lower_bound(adj_[i].begin(), adj_[i].end(), j), j);
    if (i != j) adj_[j].insert(std::lower_bound(adj_[j].begin(), adj_[j].end(), i), i);
}

std::vector<int> DependencyGraph::neighbors_and_self(int i) const {
    std::vector<int> out = adj_[i];
    if (!std::binary_search(out.begin(), out.end(), i)) out.insert(std::lower_bound(out.begin(), out.end(), i), i);
    return out;
}

bool DependencyGraph::is_independent(const std::vector<int>& set) const {
    for (std::size_t a = 0; a < set.size(); ++a)
        for (std::size_t b = a + 1; b < set.size(); ++b) {
            if (set[a] == set[b]) return false;
            if (adjacent(set[a], set[b])) return false;
        }
    return true;
}

namespace {

using Mask = std::array<std::uint64_t, 4>;

struct MaskHash {
    std::size_t operator()(const Mask& m) const noexcept {
        std::uint64_t h = 0x9e3779b97f4a7c15ULL;
        for (auto w : m) h = (h ^ w) * 0xff51afd7ed558ccdULL ^ (h >> 31);
        return static_cast<std::size_t>(h);
    }
};

bool empty(const Mask& m) { return (m[0] | m[1] | m[2] | m[3]) == 0; }
bool test(const Mask& m, int b) { return (m[b >> 6] >> (b & 63)) & 1ULL; }
void set(Mask& m, int b) { m[b >> 6] |= 1ULL << (b & 63); }
void reset(Mask& m, int b) { m[b >> 6] &= ~(1ULL << (b & 63)); }
Mask minus(const Mask& a, const Mask& b) { return {a[0] & ~b[0], a[1] & ~b[1], a[2] & ~b[2], a[3] & ~b[3]}; }
int count_and(const Mask& a, const Mask& b) {
    int c = 0;
    for (int k = 0; k < 4; ++k) c += std::popcount(a[k] & b[k]);
    return c;
}

struct Local {
    int k = 0;
    std::vector<Mask> nbr;  // open neighbourhood, distinct pairs only
    std::vector<double> w;
    std::unordered_map<Mask, double, MaskHash> memo;

    double z(const Mask& u) {
        if (empty(u)) return 1.0;
        auto it = memo.find(u);
        if (it != memo.end()) return it->second;
        int best = -1, best_deg = -1;
        for (int v = 0; v < k; ++v) {
            if (!test(u, v)) continue;
            int d = count_and(nbr[v], u);
            if (d > best_deg) { best = v; best_deg = d; }
        }
        double r;
        if (best_deg == 0) {
            r = 1.0;
            for (int v = 0; v < k; ++v)
                if (test(u, v)) r *= 1.0 + w[v];
        } else {
            Mask without = u;
            reset(without, best);
            Mask closed = nbr[best];
            set(closed, best);
            r = z(without) + w[best] * z(minus(u, closed));
        }
        memo.emplace(u, r);
        return r;
    }
};

}  // namespace

double independence_sum(const DependencyGraph& g, const std::vector<int>& vertices, const std::vector<double>& w) {
    std::vector<int> vs = vertices;
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    if (vs.size() > 256) throw LllError("independence_sum: more than 256 vertices");
    Local loc;
    loc.k = static_cast<int>(vs.size());
    loc.nbr.assign(vs.size(), Mask{0, 0, 0, 0});
    loc.w.resize(vs.size());
    Mask all{0, 0, 0, 0};
    for (int a = 0; a < loc.k; ++a) {
        loc.w[a] = w.at(vs[a]);
        set(all, a);
        for (int b = 0; b < loc.k; ++b)
            if (a != b && g.adjacent(vs[a], vs[b])) set(loc.nbr[a], b);
    }
    return loc.z(all);
}

}  // namespace lll

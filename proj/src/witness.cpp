#include "lll/witness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace lll {

namespace {

int rank_of(const std::vector<int>& pi, int label) {
    if (pi.empty()) return label;
    if (label < 0 || label >= static_cast<int>(pi.size())) throw LllError("ordering does not cover label");
    return pi[label];
}

void sort_by_rank(std::vector<int>& xs, const std::vector<int>& pi) {
    std::sort(xs.begin(), xs.end(), [&](int a, int b) { return rank_of(pi, a) < rank_of(pi, b); });
}

}  // namespace

int WitnessTree::add_node(int lbl, int par) {
    const int id = static_cast<int>(label.size());
    label.push_back(lbl);
    parent.push_back(par);
    depth.push_back(par < 0 ? 0 : depth[par] + 1);
    children.emplace_back();
    if (par >= 0) children[par].push_back(id);
    return id;
}

std::vector<std::vector<int>> WitnessTree::levels() const {
    std::vector<std::vector<int>> out;
    for (std::size_t v = 0; v < size(); ++v) {
        if (static_cast<int>(out.size()) <= depth[v]) out.resize(static_cast<std::size_t>(depth[v]) + 1);
        out[depth[v]].push_back(label[v]);
    }
    for (auto& l : out) std::sort(l.begin(), l.end());
    return out;
}

std::string WitnessTree::canonical() const {
    if (label.empty()) return "";
    std::function<std::string(int)> enc = [&](int v) {
        std::vector<std::string> parts;
        for (int c : children[v]) parts.push_back(enc(c));
        std::sort(parts.begin(), parts.end());
        std::string s = "(" + std::to_string(label[v]);
        for (const auto& p : parts) s += p;
        return s + ")";
    };
    return enc(0);
}

std::string WitnessTree::to_json() const {
    using nlohmann::json;
    if (label.empty()) return "null";
    std::function<json(int)> enc = [&](int v) {
        json node{{"label", label[v]}, {"children", json::array()}};
        for (int c : children[v]) node["children"].push_back(enc(c));
        return node;
    };
    return enc(0).dump();
}

WitnessTree build_witness_tree(const std::vector<int>& w, std::size_t k, const DependencyGraph& g) {
    if (k < 1 || k > w.size()) throw LllError("witness tree step out of range");
    WitnessTree t;
    t.add_node(w[k - 1], -1);
    for (std::size_t j = k - 1; j-- > 0;) {
        int best = -1;
        for (std::size_t v = 0; v < t.size(); ++v)
            if (g.adjacent(w[j], t.label[v]) && (best < 0 || t.depth[v] > t.depth[best])) best = static_cast<int>(v);
        if (best >= 0) t.add_node(w[j], best);
    }
    return t;
}

std::size_t occurs_at(const WitnessTree& tau, const std::vector<int>& w, const DependencyGraph& g) {
    if (tau.size() == 0) return 0;
    const std::string key = tau.canonical();
    for (std::size_t k = 1; k <= w.size(); ++k)
        if (w[k - 1] == tau.root_label() && build_witness_tree(w, k, g).canonical() == key) return k;
    return 0;
}

bool is_stable(const StableSequence& s, const DependencyGraph& g) {
    if (s.empty()) return false;
    for (std::size_t r = 0; r < s.size(); ++r) {
        if (s[r].empty() || !g.is_independent(s[r])) return false;
        if (r == 0) continue;
        for (int x : s[r]) {
            bool covered = false;
            for (int y : s[r - 1])
                if (g.adjacent(x, y)) { covered = true; break; }
            if (!covered) return false;
        }
    }
    return true;
}

StableSequence stable_partition(const std::vector<int>& seq, const DependencyGraph& g) {
    if (seq.empty()) throw LllError("empty sequence");
    StableSequence out{{seq[0]}};
    for (std::size_t k = 1; k < seq.size(); ++k) {
        bool related = false;
        for (int x : out.back())
            if (g.adjacent(x, seq[k])) { related = true; break; }
        if (related)
            out.push_back({seq[k]});
        else
            out.back().push_back(seq[k]);
    }
    for (auto& seg : out) std::sort(seg.begin(), seg.end());
    if (!is_stable(out, g)) throw LllError("sequence is not stable");
    return out;
}

std::vector<int> tree_to_sequence(const WitnessTree& tau, const std::vector<int>& pi) {
    std::vector<int> rev;
    for (auto level : tau.levels()) {
        if (std::adjacent_find(level.begin(), level.end()) != level.end())
            throw LllError("tree level repeats a label");
        sort_by_rank(level, pi);
        rev.insert(rev.end(), level.begin(), level.end());
    }
    std::reverse(rev.begin(), rev.end());
    return rev;
}

WitnessTree sequence_to_tree(const std::vector<int>& w, const DependencyGraph& g) {
    return build_witness_tree(w, w.size(), g);
}

void enumerate_witness_trees(int root, const DependencyGraph& g, const std::vector<double>& gamma, int max_nodes,
                             const std::function<void(const WeightedTree&)>& visit) {
    if (max_nodes > 8) throw LllError("max_nodes above 8");
    if (root < 0 || root >= g.size()) throw LllError("root out of range");
    if (static_cast<int>(gamma.size()) != g.size()) throw LllError("gamma size mismatch");
    if (max_nodes < 1) return;
    WeightedTree cur{{{root}}, gamma[root]};
    std::function<void(int)> grow = [&](int budget) {
        visit(cur);
        if (budget == 0) return;
        std::set<int> cand_set;
        for (int x : cur.levels.back())
            for (int y : g.neighbors(x)) cand_set.insert(y);
        std::vector<int> cand(cand_set.begin(), cand_set.end());
        std::vector<int> pick;
        std::function<void(std::size_t, double)> subsets = [&](std::size_t from, double w) {
            if (!pick.empty()) {
                const double saved = cur.weight;
                cur.levels.push_back(pick);
                cur.weight = saved * w;
                grow(budget - static_cast<int>(pick.size()));
                cur.levels.pop_back();
                cur.weight = saved;
            }
            if (static_cast<int>(pick.size()) == budget) return;
            for (std::size_t k = from; k < cand.size(); ++k) {
                bool ok = true;
                for (int p : pick)
                    if (g.adjacent(p, cand[k])) { ok = false; break; }
                if (!ok) continue;
                pick.push_back(cand[k]);
                subsets(k + 1, w * gamma[cand[k]]);
                pick.pop_back();
            }
        };
        subsets(0, 1.0);
    };
    grow(max_nodes - 1);
}

std::vector<WeightedTree> witness_trees(int root, const DependencyGraph& g, const std::vector<double>& gamma,
                                        int max_nodes) {
    std::vector<WeightedTree> out;
    enumerate_witness_trees(root, g, gamma, max_nodes, [&](const WeightedTree& t) { out.push_back(t); });
    return out;
}

WitnessForest build_witness_forest(const std::vector<int>& s0, const std::vector<std::vector<int>>& s,
                                   const std::vector<int>& w, const std::vector<int>& pi) {
    if (!w.empty() && w.size() != s.size()) throw LllError("inconsistent S_i record: sequence length");
    WitnessForest f;
    std::vector<int> frontier;
    auto has_label = [&](int lbl) {
        for (int id : frontier)
            if (f.nodes[id].label == lbl) return true;
        return false;
    };
    std::vector<int> roots = s0;
    sort_by_rank(roots, pi);
    for (int x : roots) {
        if (has_label(x)) throw LllError("inconsistent S_i record: repeated root");
        f.nodes.push_back({x, -1, -1, {}});
        f.roots.push_back(static_cast<int>(f.nodes.size()) - 1);
        frontier.push_back(f.roots.back());
    }
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (frontier.empty()) throw LllError("inconsistent S_i record: step with nothing unassigned");
        auto it = std::min_element(frontier.begin(), frontier.end(), [&](int a, int b) {
            return rank_of(pi, f.nodes[a].label) < rank_of(pi, f.nodes[b].label);
        });
        const int u = *it;
        if (!w.empty() && f.nodes[u].label != w[i]) throw LllError("inconsistent S_i record: addressed variable");
        frontier.erase(it);
        f.nodes[u].step = static_cast<int>(i) + 1;
        std::vector<int> kids = s[i];
        sort_by_rank(kids, pi);
        for (int x : kids) {
            if (has_label(x)) throw LllError("inconsistent S_i record: variable already unassigned");
            f.nodes.push_back({x, u, -1, {}});
            const int id = static_cast<int>(f.nodes.size()) - 1;
            f.nodes[u].children.push_back(id);
            frontier.push_back(id);
        }
    }
    f.steps = static_cast<long long>(s.size());
    return f;
}

WitnessForest build_witness_forest(const Trajectory& t, const std::vector<int>& pi) {
    std::vector<std::vector<int>> s;
    std::vector<int> w;
    for (const auto& st : t.steps) {
        s.push_back(st.introduced);
        w.push_back(st.flaw);
    }
    return build_witness_forest(t.initial_present, s, w, pi);
}

namespace {

// Frontier replay shared by the accessors: returns expanded node ids in order
// and the final frontier.
std::pair<std::vector<int>, std::vector<int>> replay(const WitnessForest& f, const std::vector<int>& pi) {
    std::vector<int> frontier = f.roots;
    std::vector<int> order;
    for (long long i = 0; i < f.steps; ++i) {
        if (frontier.empty()) throw LllError("forest exhausted before its step count");
        auto it = std::min_element(frontier.begin(), frontier.end(), [&](int a, int b) {
            return rank_of(pi, f.nodes[a].label) < rank_of(pi, f.nodes[b].label);
        });
        const int u = *it;
        frontier.erase(it);
        order.push_back(u);
        for (int c : f.nodes[u].children) frontier.push_back(c);
    }
    return {order, frontier};
}

}  // namespace

std::vector<int> WitnessForest::replay_sequence(const std::vector<int>& pi) const {
    std::vector<int> out;
    for (int u : replay(*this, pi).first) out.push_back(nodes[u].label);
    return out;
}

std::vector<int> WitnessForest::terminal_unassigned(const std::vector<int>& pi) const {
    std::vector<int> out;
    for (int u : replay(*this, pi).second) out.push_back(nodes[u].label);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::vector<int>> WitnessForest::introduced_sets(const std::vector<int>& pi) const {
    std::vector<std::vector<int>> out;
    std::vector<int> s0;
    for (int r : roots) s0.push_back(nodes[r].label);
    std::sort(s0.begin(), s0.end());
    out.push_back(s0);
    for (int u : replay(*this, pi).first) {
        std::vector<int> kids;
        for (int c : nodes[u].children) kids.push_back(nodes[c].label);
        std::sort(kids.begin(), kids.end());
        out.push_back(kids);
    }
    return out;
}

std::string WitnessForest::to_json() const {
    using nlohmann::json;
    std::function<json(int)> enc = [&](int v) {
        json node{{"label", nodes[v].label}, {"step", nodes[v].step}, {"children", json::array()}};
        for (int c : nodes[v].children) node["children"].push_back(enc(c));
        return node;
    };
    json out{{"steps", steps}, {"roots", json::array()}};
    for (int r : roots) out["roots"].push_back(enc(r));
    return out.dump();
}

CommutativityReport check_commutativity(const SearchProblem& problem, std::size_t cap, std::size_t max_violations) {
    auto space = enumerate_space(problem, cap);
    using Moves = std::vector<std::pair<std::size_t, double>>;
    std::map<std::pair<std::size_t, int>, Moves> cache;
    std::vector<std::vector<int>> present(space.size());
    for (std::size_t a = 0; a < space.size(); ++a) present[a] = problem.present_flaws(space.states[a]);
    auto is_present = [&](std::size_t a, int i) {
        return std::binary_search(present[a].begin(), present[a].end(), i);
    };
    auto moves = [&](std::size_t a, int i) -> const Moves& {
        auto key = std::make_pair(a, i);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        std::map<std::size_t, double> merged;
        for (const auto& t : problem.actions(i, space.states[a])) {
            auto idx = space.find(t.next);
            if (!idx) throw LllError("inconsistent actions: successor outside the state space");
            merged[*idx] += t.prob;
        }
        Moves mv(merged.begin(), merged.end());
        return cache.emplace(key, std::move(mv)).first->second;
    };

    CommutativityReport rep;
    for (std::size_t a = 0; a < space.size(); ++a) {
        // (sigma3, i, j) -> products of the left paths
        std::map<std::tuple<std::size_t, int, int>, std::vector<double>> left;
        for (int i : present[a])
            for (auto [b, p1] : moves(a, i))
                for (int j : present[b]) {
                    if (problem.adjacent(i, j)) continue;
                    for (auto [c, p2] : moves(b, j)) left[{c, i, j}].push_back(p1 * p2);
                }
        for (auto& [key, lhs] : left) {
            auto [c, i, j] = key;
            ++rep.checked;
            std::vector<double> rhs;
            if (is_present(a, j))
                for (auto [b, q1] : moves(a, j))
                    if (is_present(b, i))
                        for (auto [c2, q2] : moves(b, i))
                            if (c2 == c) rhs.push_back(q1 * q2);
            std::sort(lhs.begin(), lhs.end());
            std::sort(rhs.begin(), rhs.end());
            std::size_t r = 0;
            bool ok = true;
            for (double l : lhs) {
                while (r < rhs.size() && rhs[r] < l && std::abs(rhs[r] - l) > 1e-12 * std::max(l, rhs[r])) ++r;
                if (r < rhs.size() && std::abs(rhs[r] - l) <= 1e-12 * std::max(l, rhs[r])) {
                    ++r;
                } else {
                    ok = false;
                    break;
                }
            }
            if (!ok) {
                rep.commutative = false;
                if (rep.violations.size() < max_violations) {
                    std::ostringstream os;
                    os << "no swap for " << state_to_string(space.states[a]) << " -" << i << "-> . -" << j << "-> "
                       << state_to_string(space.states[c]);
                    rep.violations.push_back(os.str());
                }
            }
        }
    }
    return rep;
}

}  // namespace lll

#include "lll/solvers/coloring.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <set>

#include "lll/dependency_graph.hpp"

namespace lll {

VertexColoringGreedy::VertexColoringGreedy(GraphInstance g, int q) : g_(std::move(g)), q_(q) {
    delta_ = g_.max_degree();
    if (q_ <= delta_) throw LllError("q must exceed the maximum degree");
    const int m = g_.edge_count();
    std::vector<char> adjv(static_cast<std::size_t>(g_.n) * g_.n, 0);
    for (auto [u, v] : g_.edges) adjv[static_cast<std::size_t>(u) * g_.n + v] = adjv[static_cast<std::size_t>(v) * g_.n + u] = 1;
    near_.assign(static_cast<std::size_t>(m) * m, 0);
    for (int e = 0; e < m; ++e)
        for (int f = 0; f < m; ++f) {
            bool close = false;
            for (int a : {g_.edges[e].first, g_.edges[e].second})
                for (int b : {g_.edges[f].first, g_.edges[f].second})
                    if (a == b || adjv[static_cast<std::size_t>(a) * g_.n + b]) close = true;
            near_[static_cast<std::size_t>(e) * m + f] = close;
        }
}

bool VertexColoringGreedy::is_present(int i, const State& s) const {
    auto [u, v] = g_.edges[i / q_];
    int c = i % q_;
    return s[u] == c && s[v] == c;
}

std::vector<int> VertexColoringGreedy::present_flaws(const State& s) const {
    std::vector<int> out;
    for (int e = 0; e < g_.edge_count(); ++e) {
        auto [u, v] = g_.edges[e];
        if (s[u] == s[v]) out.push_back(e * q_ + s[u]);
    }
    return out;
}

std::vector<int> VertexColoringGreedy::palette(int w, const State& s) const {
    std::vector<char> used(static_cast<std::size_t>(q_), 0);
    for (int x : g_.neighbors(w))
        if (s[x] >= 0) used[s[x]] = 1;
    std::vector<int> out;
    for (int c = 0; c < q_ && static_cast<int>(out.size()) < q_ - delta_; ++c)
        if (!used[c]) out.push_back(c);
    return out;
}

State VertexColoringGreedy::sample_action(int i, const State& s, Rng& rng) const {
    auto [u, v] = g_.edges[i / q_];
    State t = s;
    for (int w : {u, v}) {
        auto pal = palette(w, t);
        t[w] = pal[rng.below(pal.size())];
    }
    return t;
}

std::vector<Transition> VertexColoringGreedy::actions(int i, const State& s) const {
    auto [u, v] = g_.edges[i / q_];
    std::vector<Transition> out;
    auto pu = palette(u, s);
    for (int cu : pu) {
        State t = s;
        t[u] = cu;
        auto pv = palette(v, t);
        for (int cv : pv) {
            State r = t;
            r[v] = cv;
            out.push_back({std::move(r), 1.0 / (static_cast<double>(pu.size()) * pv.size())});
        }
    }
    return out;
}

std::vector<int> VertexColoringGreedy::neighbors(int i) const {
    std::vector<int> out;
    const int e = i / q_;
    for (int f = 0; f < g_.edge_count(); ++f)
        if (near_[static_cast<std::size_t>(e) * g_.edge_count() + f])
            for (int c = 0; c < q_; ++c) out.push_back(f * q_ + c);
    return out;
}

State VertexColoringGreedy::sample_initial(Rng& rng) const {
    State s(static_cast<std::size_t>(g_.n));
    for (auto& c : s) c = static_cast<int>(rng.below(static_cast<std::uint64_t>(q_)));
    return s;
}

std::optional<std::vector<State>> VertexColoringGreedy::enumerate_states() const {
    if (std::pow(static_cast<double>(q_), g_.n) > 2e6) return std::nullopt;
    std::vector<State> out;
    State s(static_cast<std::size_t>(g_.n), 0);
    while (true) {
        out.push_back(s);
        int a = 0;
        while (a < g_.n && ++s[a] == q_) s[a++] = 0;
        if (a == g_.n) break;
    }
    return out;
}

double VertexColoringGreedy::declared_charge() const {
    const double d = q_ - delta_;
    return 1.0 / (d * d);
}

FlawChoiceStrategy VertexColoringGreedy::priority(const std::vector<int>& first_edges) const {
    std::set<int> first(first_edges.begin(), first_edges.end());
    std::vector<int> order;
    for (int e : first)
        for (int c = 0; c < q_; ++c) order.push_back(e * q_ + c);
    for (int e = 0; e < g_.edge_count(); ++e)
        if (!first.count(e))
            for (int c = 0; c < q_; ++c) order.push_back(e * q_ + c);
    return FlawChoiceStrategy::fixed_priority(order);
}

std::vector<int> ball(const GraphInstance& g, int v, int radius) {
    if (v < 0 || v >= g.n) throw LllError("ball center out of range");
    std::vector<int> dist(static_cast<std::size_t>(g.n), -1);
    std::deque<int> queue{v};
    dist[v] = 0;
    while (!queue.empty()) {
        int x = queue.front();
        queue.pop_front();
        if (dist[x] == radius) continue;
        for (int y : g.neighbors(x))
            if (dist[y] < 0) {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
    }
    std::vector<int> out;
    for (int x = 0; x < g.n; ++x)
        if (dist[x] >= 0) out.push_back(x);
    return out;
}

void ColoringWeightSpec::validate(const GraphInstance& g) const {
    std::vector<int> owner(static_cast<std::size_t>(g.n), -1);
    for (std::size_t t = 0; t < terms.size(); ++t) {
        if (terms[t].radius < 0) throw LllError("negative weight radius");
        if (!terms[t].w) throw LllError("weight function missing");
        for (int x : ball(g, terms[t].center, terms[t].radius + 1)) {
            if (owner[x] >= 0) throw LllError("weight balls overlap");
            owner[x] = static_cast<int>(t);
        }
    }
}

std::vector<int> ColoringWeightSpec::priority_edges(const GraphInstance& g) const {
    std::set<int> out;
    for (const auto& t : terms) {
        auto b = ball(g, t.center, t.radius);
        for (int e = 0; e < g.edge_count(); ++e)
            if (std::binary_search(b.begin(), b.end(), g.edges[e].first) &&
                std::binary_search(b.begin(), b.end(), g.edges[e].second))
                out.insert(e);
    }
    return {out.begin(), out.end()};
}

namespace {

GraphInstance induced(const GraphInstance& g, const std::vector<int>& vs) {
    std::vector<int> idx(static_cast<std::size_t>(g.n), -1);
    for (std::size_t k = 0; k < vs.size(); ++k) idx[vs[k]] = static_cast<int>(k);
    std::vector<std::pair<int, int>> es;
    for (auto [u, v] : g.edges)
        if (idx[u] >= 0 && idx[v] >= 0) es.push_back({idx[u], idx[v]});
    return GraphInstance(static_cast<int>(vs.size()), es);
}

// Visits every proper coloring; stops early past `cap`.
void for_each_proper(const GraphInstance& g, int q, double cap, const std::function<void(const State&)>& visit) {
    State s(static_cast<std::size_t>(g.n), -1);
    double seen = 0.0;
    std::function<void(int)> rec = [&](int v) {
        if (v == g.n) {
            if (++seen > cap) throw LllError("too many proper colorings to enumerate");
            visit(s);
            return;
        }
        for (int c = 0; c < q; ++c) {
            bool ok = true;
            for (int x : g.neighbors(v))
                if (x < v && s[x] == c) { ok = false; break; }
            if (!ok) continue;
            s[v] = c;
            rec(v + 1);
        }
        s[v] = -1;
    };
    rec(0);
}

}  // namespace

double count_proper_colorings(const GraphInstance& g, int q) {
    double count = 0.0;
    for_each_proper(g, q, 1e9, [&](const State&) { count += 1.0; });
    return count;
}

std::vector<LocalWeightBound> coloring_weight_bounds(const GraphInstance& g, int q, const ColoringWeightSpec& spec,
                                                     double enumeration_cap) {
    spec.validate(g);
    const int delta = g.max_degree();
    if (q <= delta) throw LllError("q must exceed the maximum degree");
    const double per_edge = q / std::pow(static_cast<double>(q - delta), 2);
    std::vector<LocalWeightBound> out(spec.terms.size());
    std::vector<double> sums(spec.terms.size(), 0.0);
    double total = 0.0;
    for_each_proper(g, q, enumeration_cap, [&](const State& s) {
        total += 1.0;
        for (std::size_t t = 0; t < spec.terms.size(); ++t) sums[t] += spec.terms[t].w(s);
    });
    if (total == 0.0) throw LllError("graph has no proper q-coloring");
    for (std::size_t t = 0; t < spec.terms.size(); ++t) {
        const auto& term = spec.terms[t];
        auto gv = induced(g, ball(g, term.center, term.radius));
        DependencyGraph line(gv.edge_count());
        for (int e = 0; e < gv.edge_count(); ++e)
            for (int f = e + 1; f < gv.edge_count(); ++f)
                if (gv.edges_touch(e, f)) line.add_edge(e, f);
        std::vector<int> all(static_cast<std::size_t>(gv.edge_count()));
        for (int e = 0; e < gv.edge_count(); ++e) all[e] = e;
        LocalWeightBound b;
        b.center = term.center;
        b.a = independence_sum(line, all, std::vector<double>(all.size(), per_edge));
        b.r = count_proper_colorings(gv, q) / std::pow(static_cast<double>(q), gv.n);
        b.e_nu = sums[t] / total;
        b.bound = b.r * b.a * b.e_nu;
        out[t] = b;
    }
    return out;
}

}  // namespace lll

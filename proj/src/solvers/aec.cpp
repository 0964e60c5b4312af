#include "lll/solvers/aec.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>

namespace lll {

namespace {

constexpr double kEnumerateCap = 2e7;

int other_end(const GraphInstance& g, int e, int v) {
    return g.edges[e].first == v ? g.edges[e].second : g.edges[e].first;
}

// Edge at vertex v with color c other than `skip`, or -1.
int colored_edge_at(const GraphInstance& g, const State& s, int v, int c, int skip) {
    for (int f : g.incident(v))
        if (f != skip && s[f] == c) return f;
    return -1;
}

std::vector<int> components(const GraphInstance& g) {
    std::vector<int> p(static_cast<std::size_t>(g.n));
    std::iota(p.begin(), p.end(), 0);
    std::function<int(int)> find = [&](int x) { return p[x] == x ? x : p[x] = find(p[x]); };
    for (auto [u, v] : g.edges) p[find(u)] = find(v);
    for (int v = 0; v < g.n; ++v) p[v] = find(v);
    return p;
}

double pow_count(int base, int exp) {
    return std::pow(static_cast<double>(base), static_cast<double>(exp));
}

}  // namespace

CycleBound default_cycle_bound(int delta) {
    return [delta](int l) { return std::pow(static_cast<double>(delta - 1), 2.0 * l - 2.0); };
}

CycleBound h_free_cycle_bound(double beta, int delta, double exponent) {
    return [=](int l) { return beta * std::pow(static_cast<double>(delta), 2.0 * l - 2.0 - exponent); };
}

AecBacktrack::AecBacktrack(GraphInstance g, int q) : g_(std::move(g)), q_(q) {
    delta_ = g_.max_degree();
    if (q_ <= 2 * (delta_ - 1) || q_ <= 0) throw LllError("q <= 2(delta-1): no guaranteed available color");
    comp_ = components(g_);
}

std::vector<int> AecBacktrack::available(int e, const State& s) const {
    const auto [u, v] = g_.edges[e];
    std::vector<char> bad(static_cast<std::size_t>(q_), 0);
    for (int w : {u, v})
        for (int f : g_.incident(w))
            if (f != e && s[f] >= 0) bad[s[f]] = 1;
    // u-v-x-y-u with colors c, d, c, d
    for (int ev : g_.incident(v)) {
        if (ev == e || s[ev] < 0) continue;
        int x = other_end(g_, ev, v);
        int eu = colored_edge_at(g_, s, u, s[ev], e);
        if (eu < 0) continue;
        int y = other_end(g_, eu, u);
        if (x == y) continue;
        int xy = g_.edge_index(x, y);
        if (xy >= 0 && s[xy] >= 0) bad[s[xy]] = 1;
    }
    std::vector<int> out;
    for (int c = 0; c < q_; ++c)
        if (!bad[c]) out.push_back(c);
    return out;
}

std::vector<std::vector<int>> AecBacktrack::bichromatic_cycles(int e, const State& s) const {
    std::vector<std::vector<int>> out;
    const int c = s[e];
    if (c < 0) return out;
    const auto [u, v] = g_.edges[e];
    for (int first : g_.incident(v)) {
        if (first == e || s[first] < 0 || s[first] == c) continue;
        const int d = s[first];
        std::vector<int> walk{e};
        int cur = v, want = d, last = e;
        bool closed = false;
        for (int guard = 0; guard <= g_.edge_count(); ++guard) {
            int f = colored_edge_at(g_, s, cur, want, last);
            if (f < 0) break;
            walk.push_back(f);
            cur = other_end(g_, f, cur);
            last = f;
            if (cur == u) {
                closed = want == d;
                break;
            }
            want = want == d ? c : d;
        }
        if (closed) out.push_back(std::move(walk));
    }
    return out;
}

std::vector<int> AecBacktrack::uncolored_set(const std::vector<int>& cycle) {
    const std::size_t len = cycle.size();
    std::vector<int> keep;
    if (cycle[1] < cycle[len - 1])
        keep = {cycle[len - 2], cycle[len - 1]};
    else
        keep = {cycle[2], cycle[1]};
    std::vector<int> out;
    for (int f : cycle)
        if (f != keep[0] && f != keep[1]) out.push_back(f);
    std::sort(out.begin(), out.end());
    return out;
}

State AecBacktrack::apply(int e, int c, const State& s) const {
    State t = s;
    t[e] = c;
    auto cycles = bichromatic_cycles(e, t);
    if (cycles.empty()) return t;
    std::vector<int> best_key;
    const std::vector<int>* best = nullptr;
    for (const auto& cyc : cycles) {
        auto key = cyc;
        std::sort(key.begin(), key.end());
        if (!best || key < best_key) {
            best_key = key;
            best = &cyc;
        }
    }
    for (int f : uncolored_set(*best)) t[f] = -1;
    return t;
}

State AecBacktrack::sample_action(int e, const State& s, Rng& rng) const {
    auto avail = available(e, s);
    if (avail.empty()) throw LllError("no 4-available color");
    return apply(e, avail[rng.below(avail.size())], s);
}

std::vector<Transition> AecBacktrack::actions(int e, const State& s) const {
    auto avail = available(e, s);
    if (avail.empty()) throw LllError("no 4-available color");
    std::vector<Transition> out;
    const double p = 1.0 / static_cast<double>(avail.size());
    for (int c : avail) out.push_back({apply(e, c, s), p});
    return out;
}

std::vector<Transition> AecBacktrack::initial_distribution() const {
    return {{State(static_cast<std::size_t>(g_.edge_count()), -1), 1.0}};
}

double AecBacktrack::init_ratio() const {
    // |Omega| when countable, else the bound (q+1)^m
    if (auto states = enumerate_states()) return static_cast<double>(states->size());
    return pow_count(q_ + 1, g_.edge_count());
}

std::optional<std::vector<State>> AecBacktrack::enumerate_states() const {
    const int m = g_.edge_count();
    if (pow_count(q_ + 1, m) > kEnumerateCap) return std::nullopt;
    std::vector<State> out;
    State s(static_cast<std::size_t>(m), -1);
    std::function<void(int)> rec = [&](int e) {
        if (e == m) {
            out.push_back(s);
            return;
        }
        rec(e + 1);
        const auto [u, v] = g_.edges[e];
        for (int c = 0; c < q_; ++c) {
            if (colored_edge_at(g_, s, u, c, e) >= 0 || colored_edge_at(g_, s, v, c, e) >= 0) continue;
            s[e] = c;
            if (bichromatic_cycles(e, s).empty()) rec(e + 1);
            s[e] = -1;
        }
    };
    rec(0);
    return out;
}

bool AecBacktrack::is_valid_output(const State& s) const {
    return is_proper_edge_coloring(g_, s, true) && is_acyclic_edge_coloring(g_, s);
}

BacktrackChargeTable AecBacktrack::charge_table(int max_len) const {
    const int Q = slack();
    BacktrackChargeTable t;
    t.variables = g_.edge_count();
    t.entries.resize(static_cast<std::size_t>(t.variables));
    std::map<std::pair<int, std::vector<int>>, int> count;
    for (const auto& cyc : simple_cycles(g_, 6, max_len)) {
        if (cyc.size() % 2) continue;
        const std::size_t len = cyc.size();
        for (std::size_t k = 0; k < len; ++k) {
            const int e = cyc[k];
            const int v = g_.edges[e].second;
            std::vector<int> walk{e};
            int nxt = cyc[(k + 1) % len];
            bool forward = g_.edges[nxt].first == v || g_.edges[nxt].second == v;
            for (std::size_t j = 1; j < len; ++j) walk.push_back(cyc[forward ? (k + j) % len : (k + len - j) % len]);
            ++count[{e, uncolored_set(walk)}];
        }
    }
    for (int e = 0; e < t.variables; ++e) t.set(e, {}, 1.0 / Q);
    for (const auto& [key, n] : count) t.set(key.first, key.second, static_cast<double>(n) / Q);
    for (int e = 0; e < t.variables; ++e) t.span.push_back(e);
    t.init_ratio = init_ratio();
    return t;
}

double aec_zeta_bound(int delta, int Q, double psi, const CycleBound& bound, int max_l) {
    (void)delta;
    double sum = 0.0;
    for (int l = 3; l <= max_l; ++l) {
        double term = bound(l) * std::pow(psi, 2.0 * l - 2.0) / Q;
        sum += term;
        if (l > 10 && term < 1e-18 * sum) break;
    }
    return (1.0 / Q + sum) / psi;
}

double aec_psi_objective(double gamma) { return gamma + 1.0 / (gamma * (gamma * gamma - 1.0)); }

CriterionReport aec_backtrack_criterion(int delta, int q, double gamma_param, const std::optional<CycleBound>& bound) {
    if (delta < 2) throw LllError("aec criterion needs max degree >= 2");
    const int Q = q - 2 * (delta - 1);
    if (Q <= 0) throw LllError("q <= 2(delta-1): no guaranteed available color");
    if (!(gamma_param > 1.0)) throw LllError("gamma must exceed 1");
    const double psi = 1.0 / (gamma_param * (delta - 1));
    const double zeta = aec_zeta_bound(delta, Q, psi, bound ? *bound : default_cycle_bound(delta));
    CriterionReport r;
    r.name = "aec-backtrack";
    r.add("zeta", zeta, 1.0, Inequality::strict);
    r.scalars["Q"] = Q;
    r.scalars["c"] = static_cast<double>(Q) / (delta - 1);
    r.scalars["psi"] = psi;
    r.scalars["zeta"] = zeta;
    r.scalars["closed_form"] = aec_psi_objective(gamma_param) * (delta - 1) / Q;
    r.aux = {zeta};
    r.finish();
    return r;
}

AecCliqueMt::AecCliqueMt(GraphInstance g, int q, int max_cycle_len, std::size_t cycle_cap)
    : g_(std::move(g)), q_(q) {
    if (q_ < 1) throw LllError("need at least one color");
    delta_ = g_.max_degree();
    for (int w = 0; w < g_.n; ++w) {
        const auto& inc = g_.incident(w);
        for (std::size_t a = 0; a < inc.size(); ++a)
            for (std::size_t b = a + 1; b < inc.size(); ++b) flaw_edges_.push_back({inc[a], inc[b]});
    }
    paths_ = static_cast<int>(flaw_edges_.size());
    for (auto& cyc : simple_cycles(g_, 4, max_cycle_len, cycle_cap))
        if (cyc.size() % 2 == 0) flaw_edges_.push_back(std::move(cyc));
    complete_ = max_cycle_len >= g_.n;
    by_edge_.resize(static_cast<std::size_t>(g_.edge_count()));
    for (int i = 0; i < flaw_count(); ++i)
        for (int e : flaw_edges_[i]) by_edge_[e].push_back(i);
}

bool AecCliqueMt::is_present(int i, const State& s) const {
    const auto& es = flaw_edges_[i];
    if (i < paths_) return s[es[0]] == s[es[1]];
    const int c0 = s[es[0]], c1 = s[es[1]];
    if (c0 == c1) return false;
    for (std::size_t k = 0; k < es.size(); ++k)
        if (s[es[k]] != (k % 2 ? c1 : c0)) return false;
    return true;
}

State AecCliqueMt::sample_action(int i, const State& s, Rng& rng) const {
    State t = s;
    for (int e : flaw_edges_[i]) t[e] = static_cast<int>(rng.below(static_cast<std::uint64_t>(q_)));
    return t;
}

std::vector<Transition> AecCliqueMt::actions(int i, const State& s) const {
    const auto& es = flaw_edges_[i];
    const int k = static_cast<int>(es.size());
    if (pow_count(q_, k) > 1e6) throw LllError("action enumeration too large");
    const double p = 1.0 / pow_count(q_, k);
    std::vector<Transition> out;
    std::vector<int> digits(static_cast<std::size_t>(k), 0);
    while (true) {
        State t = s;
        for (int a = 0; a < k; ++a) t[es[a]] = digits[a];
        out.push_back({std::move(t), p});
        int a = 0;
        while (a < k && ++digits[a] == q_) digits[a++] = 0;
        if (a == k) break;
    }
    return out;
}

bool AecCliqueMt::adjacent(int i, int j) const {
    for (int e : flaw_edges_[i])
        for (int f : flaw_edges_[j])
            if (e == f) return true;
    return false;
}

std::vector<int> AecCliqueMt::neighbors(int i) const {
    std::vector<int> out;
    for (int e : flaw_edges_[i]) out.insert(out.end(), by_edge_[e].begin(), by_edge_[e].end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

State AecCliqueMt::sample_initial(Rng& rng) const {
    State s(static_cast<std::size_t>(g_.edge_count()));
    for (auto& c : s) c = static_cast<int>(rng.below(static_cast<std::uint64_t>(q_)));
    return s;
}

std::optional<std::vector<State>> AecCliqueMt::enumerate_states() const {
    const int m = g_.edge_count();
    if (pow_count(q_, m) > 2e6) return std::nullopt;
    std::vector<State> out;
    State s(static_cast<std::size_t>(m), 0);
    while (true) {
        out.push_back(s);
        int a = 0;
        while (a < m && ++s[a] == q_) s[a++] = 0;
        if (a == m) break;
    }
    return out;
}

bool AecCliqueMt::is_valid_output(const State& s) const {
    return is_proper_edge_coloring(g_, s, true) && is_acyclic_edge_coloring(g_, s);
}

std::vector<double> AecCliqueMt::charges() const {
    std::vector<double> out;
    for (int i = 0; i < flaw_count(); ++i) {
        if (i < paths_)
            out.push_back(1.0 / q_);
        else
            out.push_back(static_cast<double>(q_) * (q_ - 1) / pow_count(q_, static_cast<int>(flaw_edges_[i].size())));
    }
    return out;
}

CliqueLllConfig AecCliqueMt::clique_config(double eps, double c) const {
    if (delta_ < 2) throw LllError("clique config needs max degree >= 2");
    CliqueLllConfig cfg;
    for (int e = 0; e < g_.edge_count(); ++e) {
        if (by_edge_[e].empty()) continue;
        cfg.cliques.push_back(by_edge_[e]);
        std::vector<double> xs;
        for (int i : by_edge_[e])
            xs.push_back(i < paths_ ? clique_aec_x_path(eps, c, delta_)
                                    : clique_aec_x_cycle(eps, c, delta_, static_cast<int>(flaw_edges_[i].size())));
        cfg.x.push_back(std::move(xs));
    }
    return cfg;
}

DependencyGraph AecCliqueMt::dependency_graph() const {
    DependencyGraph dg(flaw_count());
    for (int i = 0; i < flaw_count(); ++i)
        for (int j : neighbors(i))
            if (j >= i) dg.add_edge(i, j);
    return dg;
}

}  // namespace lll

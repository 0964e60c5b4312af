#include "lll/solvers/ksat.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace lll {

namespace {

constexpr int kEnumerateVars = 20;
constexpr int kPartialVars = 14;
constexpr int kExclusionClauses = 22;

}  // namespace

KsatMt::KsatMt(CnfInstance f) : f_(std::move(f)) {
    f_.validate();
    const int m = flaw_count();
    for (const auto& c : f_.clauses)
        if (c.empty()) throw LllError("empty clause");
    adj_.assign(static_cast<std::size_t>(m) * m, 0);
    auto vars = f_.clause_vars();
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            bool share = false;
            for (int v : vars[i])
                if (std::binary_search(vars[j].begin(), vars[j].end(), v)) { share = true; break; }
            adj_[static_cast<std::size_t>(i) * m + j] = share;
        }
    nbr_.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (adjacent(i, j)) nbr_[i].push_back(j);
}

State KsatMt::sample_action(int c, const State& s, Rng& rng) const {
    State out = s;
    for (int lit : f_.clauses[c]) out[CnfInstance::var_of(lit)] = static_cast<int>(rng.below(2));
    return out;
}

std::vector<Transition> KsatMt::actions(int c, const State& s) const {
    const auto& cl = f_.clauses[c];
    const int k = static_cast<int>(cl.size());
    std::vector<Transition> out;
    const double p = std::ldexp(1.0, -k);
    for (int bits = 0; bits < (1 << k); ++bits) {
        State t = s;
        for (int a = 0; a < k; ++a) t[CnfInstance::var_of(cl[a])] = (bits >> a) & 1;
        out.push_back({std::move(t), p});
    }
    return out;
}

State KsatMt::sample_initial(Rng& rng) const {
    State s(static_cast<std::size_t>(f_.variables));
    for (auto& v : s) v = static_cast<int>(rng.below(2));
    return s;
}

std::optional<std::vector<State>> KsatMt::enumerate_states() const {
    if (f_.variables > kEnumerateVars) return std::nullopt;
    std::vector<State> out;
    const int n = f_.variables;
    for (long long bits = 0; bits < (1LL << n); ++bits) {
        State s(static_cast<std::size_t>(n));
        for (int v = 0; v < n; ++v) s[v] = static_cast<int>((bits >> v) & 1);
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<double> KsatMt::declared_charges() const {
    std::vector<double> g;
    for (const auto& c : f_.clauses) g.push_back(std::ldexp(1.0, -static_cast<int>(c.size())));
    return g;
}

KsatBacktrack::KsatBacktrack(CnfInstance f, std::optional<std::vector<double>> p_true) : f_(std::move(f)) {
    f_.validate();
    const int n = f_.variables;
    if (p_true) {
        if (static_cast<int>(p_true->size()) != n) throw LllError("bias vector size mismatch");
        for (double p : *p_true)
            if (!(p >= 0.0 && p <= 1.0)) throw LllError("bias outside [0,1]");
        p_ = *p_true;
        biased_ = true;
    } else {
        p_.assign(static_cast<std::size_t>(n), 0.5);
    }
    occ_ = f_.occurrences();
    for (const auto& c : f_.clauses)
        if (c.empty()) throw LllError("empty clause");
    for (int v = 0; v < n; ++v)
        if (biased_ && (p_[v] == 0.0 || p_[v] == 1.0)) {
            int forced = p_[v] == 1.0 ? 1 : 0;
            for (int c : occ_[v]) {
                bool all_forced_false = true;
                for (int lit : f_.clauses[c]) {
                    int u = CnfInstance::var_of(lit);
                    bool pm = p_[u] == 0.0 || p_[u] == 1.0;
                    int val = u == v ? forced : (p_[u] == 1.0 ? 1 : 0);
                    if (!pm || val != CnfInstance::falsifying_value(lit)) { all_forced_false = false; break; }
                }
                if (all_forced_false) throw LllError("zero-probability value: clause cannot be satisfied");
            }
        }
    adj_.assign(static_cast<std::size_t>(n) * n, 0);
    for (int v = 0; v < n; ++v) adj_[static_cast<std::size_t>(v) * n + v] = 1;
    for (const auto& vars : f_.clause_vars())
        for (int a : vars)
            for (int b : vars) adj_[static_cast<std::size_t>(a) * n + b] = 1;
    if (n <= kPartialVars || static_cast<int>(f_.clauses.size()) <= kExclusionClauses) mass_ = partial_mass();
}

std::vector<int> KsatBacktrack::present_flaws(const State& s) const {
    std::vector<int> out;
    for (int v = 0; v < f_.variables; ++v)
        if (s[v] < 0) out.push_back(v);
    return out;
}

State KsatBacktrack::assign(int v, int value, const State& s) const {
    State t = s;
    t[v] = value;
    for (int c : occ_[v])
        if (f_.violated(c, t)) {
            for (int lit : f_.clauses[c]) t[CnfInstance::var_of(lit)] = -1;
            break;
        }
    return t;
}

State KsatBacktrack::sample_action(int v, const State& s, Rng& rng) const {
    int value = rng.uniform() < p_[v] ? 1 : 0;
    return assign(v, value, s);
}

std::vector<Transition> KsatBacktrack::actions(int v, const State& s) const {
    std::vector<Transition> out;
    if (p_[v] > 0.0) out.push_back({assign(v, 1, s), p_[v]});
    if (p_[v] < 1.0) out.push_back({assign(v, 0, s), 1.0 - p_[v]});
    return out;
}

double KsatBacktrack::weight(const State& s) const {
    if (!biased_) return 1.0;
    double w = 1.0;
    for (int v = 0; v < f_.variables; ++v)
        if (s[v] >= 0) w *= s[v] == 1 ? p_[v] : 1.0 - p_[v];
    return w;
}

std::vector<Transition> KsatBacktrack::initial_distribution() const {
    return {{State(static_cast<std::size_t>(f_.variables), -1), 1.0}};
}

double KsatBacktrack::init_ratio() const {
    if (mass_ < 0.0) throw LllError("init ratio unavailable: too many variables to count partial assignments");
    // mu(empty) = 1 / mass for both measures
    return mass_;
}

double KsatBacktrack::partial_mass() const {
    if (mass_ >= 0.0) return mass_;
    const int n = f_.variables;
    if (n > kPartialVars + 4) return exclusion_mass();
    State s(static_cast<std::size_t>(n), -1);
    std::function<double(int)> rec = [&](int v) -> double {
        if (v == n) return 1.0;
        double total = 0.0;
        for (int val = -1; val <= 1; ++val) {
            double w = val < 0 ? 1.0 : (biased_ ? (val == 1 ? p_[v] : 1.0 - p_[v]) : 1.0);
            if (w == 0.0) continue;
            s[v] = val;
            bool ok = true;
            if (val >= 0)
                for (int c : occ_[v])
                    if (f_.violated(c, s)) { ok = false; break; }
            if (ok) total += w * rec(v + 1);
        }
        s[v] = -1;
        return total;
    };
    return rec(0);
}

// sum over clause sets S of (-1)^|S| mass{all clauses in S violated}
double KsatBacktrack::exclusion_mass() const {
    const int n = f_.variables;
    const int m = static_cast<int>(f_.clauses.size());
    if (m > kExclusionClauses) throw LllError("partial_mass: too many variables");
    const long double free_w = biased_ ? 2.0L : 3.0L;
    std::vector<int> forced(static_cast<std::size_t>(n), -1);
    long double total = 0.0L;
    std::function<void(int, int, int, long double)> rec = [&](int c, int sign, int fixed, long double w) {
        if (c == m) {
            total += sign * w * std::pow(free_w, static_cast<long double>(n - fixed));
            return;
        }
        rec(c + 1, sign, fixed, w);
        std::vector<int> newly;
        long double w2 = w;
        bool ok = true;
        for (int lit : f_.clauses[c]) {
            int v = CnfInstance::var_of(lit);
            int val = CnfInstance::falsifying_value(lit);
            if (forced[v] == val) continue;
            if (forced[v] >= 0) { ok = false; break; }
            forced[v] = val;
            newly.push_back(v);
            w2 *= biased_ ? (val == 1 ? p_[v] : 1.0 - p_[v]) : 1.0;
        }
        if (ok && w2 > 0.0L) rec(c + 1, -sign, fixed + static_cast<int>(newly.size()), w2);
        for (int v : newly) forced[v] = -1;
    };
    rec(0, 1, 0, 1.0L);
    return static_cast<double>(total);
}

std::optional<std::vector<State>> KsatBacktrack::enumerate_states() const {
    const int n = f_.variables;
    if (n > kPartialVars) return std::nullopt;
    std::vector<State> out;
    State s(static_cast<std::size_t>(n), -1);
    std::function<void(int)> rec = [&](int v) {
        if (v == n) {
            if (weight(s) > 0.0) out.push_back(s);
            return;
        }
        for (int val = -1; val <= 1; ++val) {
            s[v] = val;
            bool ok = true;
            if (val >= 0)
                for (int c : occ_[v])
                    if (f_.violated(c, s)) { ok = false; break; }
            if (ok) rec(v + 1);
        }
        s[v] = -1;
    };
    rec(0);
    return out;
}

std::vector<double> KsatBacktrack::violation_probabilities() const {
    std::vector<double> out;
    for (const auto& c : f_.clauses) {
        double p = 1.0;
        for (int lit : c) {
            double pt = p_[CnfInstance::var_of(lit)];
            p *= lit > 0 ? 1.0 - pt : pt;
        }
        out.push_back(p);
    }
    return out;
}

BacktrackChargeTable KsatBacktrack::charge_table() const {
    BacktrackChargeTable t;
    t.variables = f_.variables;
    t.entries.resize(static_cast<std::size_t>(f_.variables));
    auto vars = f_.clause_vars();
    auto viol = violation_probabilities();
    for (int v = 0; v < f_.variables; ++v) {
        t.set(v, {}, biased_ ? 1.0 : 0.5);
        for (int c : occ_[v]) {
            double g = biased_ ? viol[c] : 0.5;
            // several clauses on the same variable set add up
            t.set(v, vars[c], t.get(v, vars[c]) + g);
        }
    }
    for (int v = 0; v < f_.variables; ++v) t.span.push_back(v);
    t.init_ratio = mass_ >= 0.0 ? mass_ : 1.0;
    return t;
}

}  // namespace lll

#include "lll/criteria.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <set>
#include <unordered_map>

namespace lll {

bool holds(double lhs, double rhs, Inequality rel) {
    if (!std::isfinite(lhs) || std::isnan(rhs)) return false;
    return rel == Inequality::strict ? lhs < rhs - kBoundaryTol : lhs <= rhs + kBoundaryTol;
}

void CriterionReport::add(std::string label, double l, double r, Inequality relation) {
    labels.push_back(std::move(label));
    lhs.push_back(l);
    rhs.push_back(r);
    rel.push_back(relation);
}

void CriterionReport::finish() {
    pass = true;
    slack = std::numeric_limits<double>::infinity();
    max_ratio = 0.0;
    for (std::size_t k = 0; k < lhs.size(); ++k) {
        if (!holds(lhs[k], rhs[k], rel[k])) pass = false;
        slack = std::min(slack, rhs[k] - lhs[k]);
        double ratio = rhs[k] > 0.0 ? lhs[k] / rhs[k] : (lhs[k] > 0.0 ? INFINITY : 0.0);
        max_ratio = std::max(max_ratio, ratio);
    }
    if (lhs.empty()) slack = 0.0;
}

namespace {

void check_sizes(std::size_t a, std::size_t b, const char* what) {
    if (a != b) throw LllError(std::string("dimension mismatch: ") + what);
}

void check_positive(const std::vector<double>& psi) {
    for (double p : psi)
        if (!(p > 0.0)) throw LllError("weights must be positive");
}

}  // namespace

CriterionReport general_lll_check(const std::vector<double>& gamma, const DependencyGraph& g,
                                  const std::vector<double>& psi, Inequality rel) {
    const int m = g.size();
    check_sizes(gamma.size(), static_cast<std::size_t>(m), "gamma");
    check_sizes(psi.size(), static_cast<std::size_t>(m), "psi");
    check_positive(psi);
    CriterionReport r;
    r.name = "general";
    for (int i = 0; i < m; ++i) {
        double prod = 1.0;
        for (int j : g.neighbors_and_self(i)) prod *= 1.0 + psi[j];
        r.add("flaw " + std::to_string(i), gamma[i] * prod, psi[i], rel);
    }
    r.finish();
    return r;
}

CriterionReport cluster_expansion_from_zeta(const std::vector<double>& gamma, const std::vector<double>& zeta,
                                            const std::vector<double>& psi) {
    check_sizes(gamma.size(), zeta.size(), "zeta");
    check_sizes(gamma.size(), psi.size(), "psi");
    check_positive(psi);
    CriterionReport r;
    r.name = "cluster";
    for (std::size_t i = 0; i < gamma.size(); ++i)
        r.add("flaw " + std::to_string(i), gamma[i] * zeta[i], psi[i], Inequality::non_strict);
    r.aux = zeta;
    r.finish();
    return r;
}

CriterionReport cluster_expansion_check(const std::vector<double>& gamma, const DependencyGraph& g,
                                        const std::vector<double>& psi, int cap) {
    const int m = g.size();
    check_sizes(gamma.size(), static_cast<std::size_t>(m), "gamma");
    check_sizes(psi.size(), static_cast<std::size_t>(m), "psi");
    std::vector<double> zeta(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        const auto& nb = g.neighbors(i);
        if (static_cast<int>(nb.size()) > cap) throw LllError("neighborhood too large; supply closed form");
        zeta[i] = independence_sum(g, nb, psi);
    }
    return cluster_expansion_from_zeta(gamma, zeta, psi);
}

double ShearerReport::q_of(const std::vector<int>& s) const {
    for (const auto& [set, v] : q)
        if (set == s) return v;
    throw LllError("q_S not computed for requested set");
}

ShearerReport shearer_polynomials(const std::vector<double>& gamma, const DependencyGraph& g, ShearerFamily family,
                                  int cap) {
    const int m = g.size();
    check_sizes(gamma.size(), static_cast<std::size_t>(m), "gamma");
    if (m > cap || m > 30) throw LllError("shearer: flaw count exceeds cap");

    std::vector<std::uint32_t> closed(static_cast<std::size_t>(m));
    for (int v = 0; v < m; ++v) {
        closed[v] = 1u << v;
        for (int u : g.neighbors(v)) closed[v] |= 1u << u;
    }
    const std::uint32_t full = m == 32 ? ~0u : ((1u << m) - 1u);

    // Z(U) = sum over independent I in U of prod (-gamma_j).
    std::vector<double> dense;
    std::unordered_map<std::uint32_t, double> memo;
    const bool use_dense = m <= 22;
    if (use_dense) {
        dense.assign(std::size_t{1} << m, 0.0);
        dense[0] = 1.0;
        for (std::uint32_t u = 1; u <= full; ++u) {
            int v = std::countr_zero(u);
            dense[u] = dense[u & ~(1u << v)] - gamma[v] * dense[u & ~closed[v]];
        }
    }
    std::function<double(std::uint32_t)> z = [&](std::uint32_t u) -> double {
        if (use_dense) return dense[u];
        if (u == 0) return 1.0;
        auto it = memo.find(u);
        if (it != memo.end()) return it->second;
        int v = std::countr_zero(u);
        double r = z(u & ~(1u << v)) - gamma[v] * z(u & ~closed[v]);
        memo.emplace(u, r);
        return r;
    };

    ShearerReport rep;
    auto q_of_set = [&](const std::vector<int>& s) {
        std::uint32_t nb = 0;
        double prod = 1.0;
        for (int j : s) {
            nb |= closed[j];
            prod *= gamma[j];
        }
        return prod * z(full & ~nb);
    };

    if (family == ShearerFamily::singletons) {
        rep.q.push_back({{}, q_of_set({})});
        for (int i = 0; i < m; ++i) rep.q.push_back({{i}, q_of_set({i})});
    } else {
        constexpr std::size_t kMaxSets = std::size_t{1} << 21;
        std::vector<int> cur;
        std::function<void(int, std::uint32_t)> dfs = [&](int start, std::uint32_t allowed) {
            if (rep.q.size() >= kMaxSets) throw LllError("shearer: too many independent sets; request singletons");
            rep.q.push_back({cur, q_of_set(cur)});
            for (int v = start; v < m; ++v) {
                if (!((allowed >> v) & 1u)) continue;
                cur.push_back(v);
                dfs(v + 1, allowed & ~closed[v]);
                cur.pop_back();
            }
        };
        dfs(0, full);
    }

    rep.q_empty = rep.q.front().second;
    rep.min_q = std::numeric_limits<double>::infinity();
    for (const auto& [s, v] : rep.q) rep.min_q = std::min(rep.min_q, v);
    rep.pass = rep.q_empty > kBoundaryTol && rep.min_q >= -kBoundaryTol;
    rep.ratios.assign(static_cast<std::size_t>(m), 0.0);
    for (int i = 0; i < m; ++i) rep.ratios[i] = q_of_set({i}) / rep.q_empty;
    return rep;
}

CriterionReport clique_lll_check(const std::vector<double>& gamma, const DependencyGraph& g,
                                 const CliqueLllConfig& cfg) {
    const int m = g.size();
    check_sizes(gamma.size(), static_cast<std::size_t>(m), "gamma");
    check_sizes(cfg.cliques.size(), cfg.x.size(), "clique x");
    const int nc = static_cast<int>(cfg.cliques.size());

    std::vector<std::vector<std::pair<int, int>>> member(static_cast<std::size_t>(m));  // (clique, position)
    std::vector<double> sum(static_cast<std::size_t>(nc), 0.0);
    for (int v = 0; v < nc; ++v) {
        const auto& k = cfg.cliques[v];
        check_sizes(k.size(), cfg.x[v].size(), "clique x row");
        for (std::size_t a = 0; a < k.size(); ++a) {
            if (k[a] < 0 || k[a] >= m) throw LllError("clique member out of range");
            double x = cfg.x[v][a];
            if (!(x > 0.0 && x < 1.0)) throw LllError("clique x entries must lie in (0,1)");
            for (std::size_t b = a + 1; b < k.size(); ++b)
                if (k[a] == k[b] || !g.adjacent(k[a], k[b])) throw LllError("clique is not a clique");
            member[k[a]].push_back({v, static_cast<int>(a)});
            sum[v] += x;
        }
    }
    for (int i = 0; i < m; ++i) {
        if (member[i].empty()) throw LllError("clique cover incomplete");
        for (int j : g.neighbors(i)) {
            if (j <= i) continue;
            bool covered = false;
            for (auto [v, a] : member[i]) {
                (void)a;
                const auto& k = cfg.cliques[v];
                if (std::find(k.begin(), k.end(), j) != k.end()) { covered = true; break; }
            }
            if (!covered) throw LllError("clique cover incomplete");
        }
    }

    CriterionReport r;
    r.name = "clique";
    for (int v = 0; v < nc; ++v) r.add("(a) clique " + std::to_string(v), sum[v], 1.0, Inequality::strict);

    r.aux.assign(static_cast<std::size_t>(m), std::numeric_limits<double>::infinity());
    double steps = 0.0;
    for (int i = 0; i < m; ++i) {
        for (auto [v, a] : member[i]) {
            double x = cfg.x[v][a];
            double rhs = x;
            for (auto [u, b] : member[i]) {
                if (u == v) continue;
                rhs *= 1.0 - (sum[u] - cfg.x[u][b]);
            }
            r.add("(b) flaw " + std::to_string(i) + " clique " + std::to_string(v), gamma[i], rhs,
                  Inequality::non_strict);
            r.aux[i] = std::min(r.aux[i], x / (1.0 - (sum[v] - x)));
        }
        steps += r.aux[i];
    }
    r.scalars["expected_steps_bound"] = steps;
    r.finish();
    return r;
}

void BacktrackChargeTable::set(int v, std::vector<int> s, double gamma) {
    if (v < 0) throw LllError("variable out of range");
    if (v >= variables) variables = v + 1;
    if (static_cast<int>(entries.size()) < variables) entries.resize(static_cast<std::size_t>(variables));
    std::sort(s.begin(), s.end());
    for (auto& [set, g] : entries[v])
        if (set == s) { g = gamma; return; }
    entries[v].push_back({std::move(s), gamma});
}

double BacktrackChargeTable::get(int v, const std::vector<int>& s) const {
    if (v < 0 || v >= static_cast<int>(entries.size())) return 0.0;
    for (const auto& [set, g] : entries[v])
        if (set == s) return g;
    return 0.0;
}

CriterionReport backtracking_criterion(const BacktrackChargeTable& table, const std::vector<double>& psi) {
    check_sizes(psi.size(), static_cast<std::size_t>(table.variables), "psi");
    check_positive(psi);
    CriterionReport r;
    r.name = "backtrack";
    double max_zeta = 0.0;
    for (int v = 0; v < table.variables; ++v) {
        double s = 0.0;
        if (v < static_cast<int>(table.entries.size()))
            for (const auto& [set, g] : table.entries[v]) {
                double p = g;
                for (int u : set) p *= psi.at(u);
                s += p;
            }
        double zeta = s / psi[v];
        r.aux.push_back(zeta);
        max_zeta = std::max(max_zeta, zeta);
        r.add("variable " + std::to_string(v), zeta, 1.0, Inequality::strict);
    }
    double t0 = std::log2(table.init_ratio);
    for (int v : table.span) t0 += std::log2(1.0 + psi.at(v));
    r.scalars["max_zeta"] = max_zeta;
    r.scalars["delta"] = 1.0 - max_zeta;
    r.scalars["T0"] = t0;
    r.finish();
    return r;
}

double realizable_charge(const BacktrackChargeTable& table, const std::vector<int>& s) {
    double best = 0.0;
    for (int v : s) {
        double g = table.get(v, s);
        for (int u : s)
            if (u != v) g *= table.get(u, {});
        best = std::max(best, g);
    }
    return best;
}

std::vector<RealizableSet> realizable_sets(const BacktrackChargeTable& table) {
    std::set<std::vector<int>> seen;
    for (const auto& row : table.entries)
        for (const auto& [s, g] : row)
            if (!s.empty() && g > 0.0) seen.insert(s);
    std::vector<RealizableSet> out;
    for (const auto& s : seen) out.push_back({s, realizable_charge(table, s), 0.0});
    return out;
}

CriterionReport commutative_backtracking_criterion(const std::vector<RealizableSet>& sets, int cap) {
    const int n = static_cast<int>(sets.size());
    DependencyGraph g(n);
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
            bool meet = false;
            for (int x : sets[a].vars)
                if (std::find(sets[b].vars.begin(), sets[b].vars.end(), x) != sets[b].vars.end()) { meet = true; break; }
            if (meet) g.add_edge(a, b);
        }
    std::vector<double> psi(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) psi[a] = sets[a].psi;
    check_positive(psi);
    CriterionReport r;
    r.name = "commutative_backtrack";
    for (int a = 0; a < n; ++a) {
        const auto& nb = g.neighbors(a);
        if (static_cast<int>(nb.size()) > cap) throw LllError("neighborhood too large; supply closed form");
        double zeta = independence_sum(g, nb, psi);
        r.aux.push_back(zeta);
        r.add("set " + std::to_string(a), sets[a].gamma * zeta, sets[a].psi, Inequality::non_strict);
    }
    r.finish();
    return r;
}

CriterionReport asymmetric_ksat_criterion(int variables, const std::vector<std::vector<int>>& clause_vars,
                                          const std::vector<double>& violation_prob, double psi) {
    check_sizes(clause_vars.size(), violation_prob.size(), "clause probabilities");
    if (!(psi > 0.0)) throw LllError("weights must be positive");
    std::vector<double> sum(static_cast<std::size_t>(variables), 0.0);
    for (std::size_t c = 0; c < clause_vars.size(); ++c) {
        double term = violation_prob[c] * std::pow(psi, static_cast<double>(clause_vars[c].size()) - 1.0);
        std::vector<int> vs = clause_vars[c];
        std::sort(vs.begin(), vs.end());
        vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
        for (int v : vs) sum.at(v) += term;
    }
    CriterionReport r;
    r.name = "asymmetric_ksat";
    for (int v = 0; v < variables; ++v)
        r.add("variable " + std::to_string(v), 1.0 / psi + sum[v], 1.0, Inequality::strict);
    r.finish();
    return r;
}

double counting_bound(int variables, const std::vector<std::vector<int>>& constraint_vars,
                      const std::vector<double>& ratios) {
    check_sizes(constraint_vars.size(), ratios.size(), "ratios");
    std::vector<double> acc(static_cast<std::size_t>(variables), 0.0);
    for (std::size_t c = 0; c < constraint_vars.size(); ++c) {
        std::vector<int> vs = constraint_vars[c];
        std::sort(vs.begin(), vs.end());
        vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
        if (vs.empty()) throw LllError("constraint without variables");
        double y = std::pow(1.0 + ratios[c], 1.0 / static_cast<double>(vs.size())) - 1.0;
        for (int v : vs) acc.at(v) += y;
    }
    double prod = 1.0;
    for (double a : acc) prod *= 1.0 + a;
    return prod;
}

double clique_aec_ratio(double eps, double c) {
    if (!(c > 0.0 && c < eps)) return std::numeric_limits<double>::infinity();
    double r = eps / (eps - c);
    double a = (2.0 / c) * (1.0 + eps) * r;
    double b = (1.0 + eps) / std::sqrt(c) * std::pow(r, 1.5);
    return std::max(a, b);
}

std::pair<double, double> golden_minimize(const std::function<double(double)>& f, double a, double b, double tol) {
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol * (1.0 + std::fabs(a) + std::fabs(b))) {
        if (f1 <= f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - phi * (b - a); f1 = f(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + phi * (b - a); f2 = f(x2);
        }
    }
    double x = 0.5 * (a + b);
    return {x, f(x)};
}

CliqueAecOptimum minimize_clique_aec_ratio() {
    // inner: best c = t * eps for fixed eps (quasi-convex in t)
    auto inner = [](double eps) {
        return golden_minimize([eps](double t) { return clique_aec_ratio(eps, t * eps); }, 1e-9, 1.0 - 1e-9, 1e-13);
    };
    auto outer = [&](double log_eps) { return inner(std::exp(log_eps)).second; };
    double best_l = 0.0, best_v = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= 2000; ++k) {
        double l = std::log(1e-2) + (std::log(1e3) - std::log(1e-2)) * k / 2000.0;
        double v = outer(l);
        if (v < best_v) { best_v = v; best_l = l; }
    }
    const double step = (std::log(1e3) - std::log(1e-2)) / 2000.0;
    auto [l, v] = golden_minimize(outer, best_l - step, best_l + step, 1e-13);
    CliqueAecOptimum o;
    o.eps = std::exp(l);
    o.c = inner(o.eps).first * o.eps;
    o.value = v;
    return o;
}

double clique_aec_x_path(double eps, double c, int delta) {
    return c / (1.0 + eps) / (2.0 * delta - 2.0);
}

double clique_aec_x_cycle(double eps, double c, int delta, int len) {
    return c / std::pow(1.0 + eps, len / 2.0) / std::pow(delta - 1.0, len - 2.0);
}

}  // namespace lll

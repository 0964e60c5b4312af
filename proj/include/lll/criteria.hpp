#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lll/dependency_graph.hpp"

namespace lll {

// Absolute tolerance for every boundary comparison. A strict a < b passes
// only when a < b - tol; a non-strict a <= b passes when a <= b + tol.
inline constexpr double kBoundaryTol = 1e-12;

enum class Inequality { strict, non_strict };

bool holds(double lhs, double rhs, Inequality rel);

// One row per checked condition: lhs (rel) rhs.
struct CriterionReport {
    std::string name;
    bool pass = false;
    std::vector<std::string> labels;
    std::vector<double> lhs;
    std::vector<double> rhs;
    std::vector<Inequality> rel;
    double slack = 0.0;      // min(rhs - lhs)
    double max_ratio = 0.0;  // max(lhs / rhs)
    std::map<std::string, double> scalars;
    std::vector<double> aux;  // zeta values, per-flaw bounds, ...

    void add(std::string label, double l, double r, Inequality relation);
    void finish();
};

// (gamma_i / psi_i) prod_{j in Gamma(i) u {i}} (1 + psi_j) < 1.
CriterionReport general_lll_check(const std::vector<double>& gamma, const DependencyGraph& g,
                                  const std::vector<double>& psi, Inequality rel = Inequality::strict);

// gamma_i zeta_i <= psi_i, zeta_i = sum over Ind(Gamma(i)) of prod psi.
CriterionReport cluster_expansion_check(const std::vector<double>& gamma, const DependencyGraph& g,
                                        const std::vector<double>& psi, int cap = 25);
// Same inequality with caller-supplied zeta (closed forms).
CriterionReport cluster_expansion_from_zeta(const std::vector<double>& gamma, const std::vector<double>& zeta,
                                            const std::vector<double>& psi);

enum class ShearerFamily { all_independent, singletons };

struct ShearerReport {
    bool pass = false;
    double q_empty = 0.0;
    std::vector<std::pair<std::vector<int>, double>> q;  // includes the empty set first
    std::vector<double> ratios;                          // q_{i} / q_empty
    double min_q = 0.0;

    double q_of(const std::vector<int>& s) const;
};

ShearerReport shearer_polynomials(const std::vector<double>& gamma, const DependencyGraph& g,
                                  ShearerFamily family = ShearerFamily::all_independent, int cap = 25);

struct CliqueLllConfig {
    std::vector<std::vector<int>> cliques;
    std::vector<std::vector<double>> x;  // x[v][k] belongs to cliques[v][k]
};

// Conditions (a) per clique and (b) per (flaw, clique); aux holds the
// per-flaw bound min_v x_{i,v} / (1 - sum_{j in K_v \ i} x_{j,v}).
CriterionReport clique_lll_check(const std::vector<double>& gamma, const DependencyGraph& g,
                                 const CliqueLllConfig& cfg);

struct BacktrackChargeTable {
    int variables = 0;
    // entries[v]: (S, gamma_S^v); S sorted, empty S allowed.
    std::vector<std::vector<std::pair<std::vector<int>, double>>> entries;
    std::vector<int> span;  // S(theta)
    double init_ratio = 1.0;

    void set(int v, std::vector<int> s, double gamma);
    double get(int v, const std::vector<int>& s) const;
};

// zeta_v = (1/psi_v) sum_S gamma_S^v prod_{u in S} psi_u < 1 for all v.
// Scalars: delta = 1 - max zeta, T0 = log2 lambda_init + sum_{span} log2(1 + psi).
CriterionReport backtracking_criterion(const BacktrackChargeTable& table, const std::vector<double>& psi);

struct RealizableSet {
    std::vector<int> vars;
    double gamma = 0.0;
    double psi = 0.0;
};

// gamma(S) = max_{v in S} gamma_S^v prod_{u in S \ v} gamma_empty^u.
double realizable_charge(const BacktrackChargeTable& table, const std::vector<int>& s);
// Every realizable set S in the table, with its charge.
std::vector<RealizableSet> realizable_sets(const BacktrackChargeTable& table);

// gamma(S) sum_{B in Ind(Gamma(S))} prod psi_B <= psi_S.
CriterionReport commutative_backtracking_criterion(const std::vector<RealizableSet>& sets, int cap = 256);

// 1/psi + sum_{c ni v} Pr[c violated] psi^{|c|-1} < 1 for all v.
CriterionReport asymmetric_ksat_criterion(int variables, const std::vector<std::vector<int>>& clause_vars,
                                          const std::vector<double>& violation_prob, double psi);

// prod_v (1 + sum_{c ni v} y_c), y_c = (1 + r_c)^{1/|var c|} - 1.
double counting_bound(int variables, const std::vector<std::vector<int>>& constraint_vars,
                      const std::vector<double>& ratios);

// max{ (2/c)(1+eps) eps/(eps-c), ((1+eps)/sqrt c) (eps/(eps-c))^{3/2} }, 0 < c < eps.
double clique_aec_ratio(double eps, double c);

struct CliqueAecOptimum {
    double eps = 0.0;
    double c = 0.0;
    double value = 0.0;
};
CliqueAecOptimum minimize_clique_aec_ratio();

// x_{P,e} and x_{C,e} for a cycle of length len.
double clique_aec_x_path(double eps, double c, int delta);
double clique_aec_x_cycle(double eps, double c, int delta, int len);

// Golden-section search for a unimodal f on [a, b].
std::pair<double, double> golden_minimize(const std::function<double(double)>& f, double a, double b,
                                          double tol = 1e-10);

}  // namespace lll

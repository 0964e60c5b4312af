#pragma once

#include <optional>
#include <vector>

#include "lll/criteria.hpp"
#include "lll/problem.hpp"
#include "lll/solvers/cnf.hpp"

namespace lll {

// Moser-Tardos on a CNF: flaws are clauses, resampling redraws the clause's
// variables uniformly, Gamma is variable sharing, mu = theta = uniform.
class KsatMt : public SearchProblem {
public:
    explicit KsatMt(CnfInstance f);

    std::string name() const override { return "ksat-mt"; }
    int flaw_count() const override { return static_cast<int>(f_.clauses.size()); }
    bool is_present(int c, const State& s) const override { return f_.violated(c, s); }
    State sample_action(int c, const State& s, Rng& rng) const override;
    std::vector<Transition> actions(int c, const State& s) const override;
    bool adjacent(int i, int j) const override { return adj_[static_cast<std::size_t>(i) * flaw_count() + j]; }
    std::vector<int> neighbors(int i) const override { return nbr_[i]; }
    double weight(const State&) const override { return 1.0; }
    State sample_initial(Rng& rng) const override;
    std::optional<std::vector<State>> enumerate_states() const override;
    bool is_valid_output(const State& s) const override { return f_.satisfied_by(s); }

    const CnfInstance& formula() const { return f_; }
    // 2^{-|c|} per clause.
    std::vector<double> declared_charges() const;

private:
    CnfInstance f_;
    std::vector<char> adj_;
    std::vector<std::vector<int>> nbr_;
};

// Backtracking search over partial satisfying assignments. Flaws are the
// variables (present = unassigned). Each step assigns the lowest unassigned
// variable; if clauses become violated, the lowest violated clause is
// unassigned entirely.
//
// Without biases mu is uniform over partial satisfying assignments. With
// per-variable Pr[x_v = 1] the values are drawn from the product measure and
// mu(sigma) is proportional to the product over assigned variables.
// theta is the point mass on the empty assignment.
class KsatBacktrack : public SearchProblem {
public:
    explicit KsatBacktrack(CnfInstance f, std::optional<std::vector<double>> p_true = std::nullopt);

    std::string name() const override { return biased_ ? "ksat-backtrack-biased" : "ksat-backtrack"; }
    int flaw_count() const override { return f_.variables; }
    bool is_present(int v, const State& s) const override { return s[v] < 0; }
    std::vector<int> present_flaws(const State& s) const override;
    State sample_action(int v, const State& s, Rng& rng) const override;
    std::vector<Transition> actions(int v, const State& s) const override;
    bool adjacent(int i, int j) const override { return adj_[static_cast<std::size_t>(i) * flaw_count() + j]; }
    double weight(const State& s) const override;
    State sample_initial(Rng&) const override { return State(static_cast<std::size_t>(f_.variables), -1); }
    std::vector<Transition> initial_distribution() const override;
    double init_ratio() const override;
    std::optional<std::vector<State>> enumerate_states() const override;
    bool is_backtracking() const override { return true; }
    bool is_valid_output(const State& s) const override { return f_.satisfied_by(s); }

    const CnfInstance& formula() const { return f_; }
    double p_true(int v) const { return p_[v]; }
    bool biased() const { return biased_; }

    // Uniform: gamma_empty^v = 1/2 and gamma_clause^v = 1/2 per clause on v.
    // Biased: gamma_empty^v = 1 and gamma_clause^v = Pr[clause violated].
    BacktrackChargeTable charge_table() const;
    std::vector<double> violation_probabilities() const;
    // Total mu-weight of partial satisfying assignments. Direct enumeration for
    // small n, inclusion-exclusion over clauses for few clauses.
    double partial_mass() const;

private:
    State assign(int v, int value, const State& s) const;
    double exclusion_mass() const;

    CnfInstance f_;
    std::vector<double> p_;
    bool biased_ = false;
    std::vector<std::vector<int>> occ_;
    std::vector<char> adj_;
    double mass_ = -1.0;
};

}  // namespace lll

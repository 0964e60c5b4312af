#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "lll/problem.hpp"

namespace lll {

// Exhaustive view of an enumerable problem: normalized mu and theta.
struct StateSpace {
    std::vector<State> states;
    std::vector<double> mu;
    std::vector<double> theta;
    double init_ratio = 1.0;
    std::unordered_map<State, std::size_t, StateHash> index;

    std::optional<std::size_t> find(const State& s) const;
    std::size_t size() const { return states.size(); }
};

StateSpace enumerate_space(const SearchProblem& problem, std::size_t cap = 1'000'000);

// An extra flaw E with its own actions and neighbourhood Gamma(E).
struct EventExtension {
    std::function<bool(const State&)> contains;
    std::function<std::vector<Transition>(const State&)> actions;
    std::function<State(const State&, Rng&)> sample;
    std::vector<int> neighbors;
};

// E = f_i with the problem's own actions.
EventExtension flaw_as_event(const SearchProblem& problem, int i);
// E = {s0}, resampled from mu.
EventExtension singleton_event(const SearchProblem& problem, const StateSpace& space, const State& s0);

double charge(const SearchProblem& problem, int i);
double charge(const SearchProblem& problem, const StateSpace& space, int i);
double event_charge(const SearchProblem& problem, const EventExtension& e);
double event_charge(const SearchProblem& problem, const StateSpace& space, const EventExtension& e);

double measure(const StateSpace& space, const std::function<bool(const State&)>& pred);

// gamma_S^v for every S with nonzero charge; S = U(s') \ (U(s) \ {v}).
std::map<std::vector<int>, double> backtrack_charges(const SearchProblem& problem, const StateSpace& space,
                                                     int v);

struct CausalityReport {
    bool ok = true;
    long long arcs = 0;
    std::string message;
};

// Every arc s -> s' under flaw i that makes f_j present (newly, or j = i)
// must have j in Gamma(i). Also checks symmetry of Gamma.
CausalityReport check_causality(const SearchProblem& problem, const StateSpace& space);

struct CouplingReport {
    bool pass = true;
    double max_z = 0.0;
    std::size_t outcomes = 0;
    std::string message;
};

// Draws `samples` single steps of flaw i from s and compares frequencies
// with rho_i(s, .) outcome by outcome.
CouplingReport coupling_check(const SearchProblem& problem, int i, const State& s, long long samples,
                              std::uint64_t seed, double z_limit = 4.0);

}  // namespace lll

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lll/rng.hpp"

namespace lll {

// Every solver encodes its state as a vector of small integers; the vector is
// its canonical form (matching partner arrays, colour arrays, -1 = unassigned).
using State = std::vector<int>;

struct StateHash {
    std::size_t operator()(const State& s) const noexcept;
};

std::string canonical_bytes(const State& s);
std::string state_to_string(const State& s);

struct Transition {
    State next;
    double prob = 0.0;
};

class LllError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The tuple (Omega, F, rho, Gamma, mu, theta).
//
// Flaws are indexed 0..flaw_count()-1 in declaration order. For backtracking
// problems the flaws are the variables and "present" means unassigned.
class SearchProblem {
public:
    virtual ~SearchProblem() = default;

    virtual std::string name() const = 0;
    virtual int flaw_count() const = 0;
    virtual bool is_present(int flaw, const State& s) const = 0;
    // Sorted ascending.
    virtual std::vector<int> present_flaws(const State& s) const;

    virtual State sample_action(int flaw, const State& s, Rng& rng) const = 0;
    // Exact rho_i(s, .). Problems without an exact form throw.
    virtual std::vector<Transition> actions(int flaw, const State& s) const;

    // Gamma, symmetric, self-loops allowed.
    virtual bool adjacent(int i, int j) const = 0;
    virtual std::vector<int> neighbors(int i) const;

    // Unnormalized mu.
    virtual double weight(const State& s) const = 0;

    virtual State sample_initial(Rng& rng) const = 0;
    // Exact theta; empty means theta = mu.
    virtual std::vector<Transition> initial_distribution() const { return {}; }
    // lambda_init = max theta/mu. Oracle mode recomputes it exactly.
    virtual double init_ratio() const { return 1.0; }

    virtual std::optional<std::vector<State>> enumerate_states() const { return std::nullopt; }

    virtual bool is_backtracking() const { return false; }

    // Solver-level output check; the default accepts any flawless state.
    virtual bool is_valid_output(const State& s) const { return present_flaws(s).empty(); }
};

}  // namespace lll

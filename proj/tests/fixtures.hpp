#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lll/problem.hpp"

namespace lll::testing {

// Two bits; flaw k is "bit k = 1". Flaw 0's action depends on bit 1, so
// addressing 0 then 1 has a different rho product than 1 then 0.
class BrokenSwap : public SearchProblem {
public:
    std::string name() const override { return "broken"; }
    int flaw_count() const override { return 2; }
    bool is_present(int i, const State& s) const override { return s[i] == 1; }
    State sample_action(int i, const State& s, Rng& rng) const override {
        State t = s;
        t[i] = (i == 0 && s[1] == 1) ? static_cast<int>(rng.below(2)) : 0;
        return t;
    }
    std::vector<Transition> actions(int i, const State& s) const override {
        State z = s;
        z[i] = 0;
        if (i == 0 && s[1] == 1) return {{z, 0.5}, {s, 0.5}};
        return {{z, 1.0}};
    }
    bool adjacent(int i, int j) const override { return i == j; }
    double weight(const State&) const override { return 1.0; }
    State sample_initial(Rng& rng) const override {
        return {static_cast<int>(rng.below(2)), static_cast<int>(rng.below(2))};
    }
    std::optional<std::vector<State>> enumerate_states() const override {
        return std::vector<State>{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    }
};

}  // namespace lll::testing

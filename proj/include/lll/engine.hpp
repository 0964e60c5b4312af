#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "lll/problem.hpp"
#include "lll/strategy.hpp"

namespace lll {

struct TrajectoryStep {
    int flaw = -1;
    State state;                  // state after the step
    double rho = -1.0;            // rho_i(prev, state), -1 when not validated
    std::vector<int> introduced;  // U(next) \ (U(prev) \ {flaw}), sorted
};

struct Trajectory {
    State initial_state;
    std::vector<int> initial_present;  // S_0
    std::vector<TrajectoryStep> steps;

    std::vector<int> witness_sequence() const;
};

struct RunOptions {
    long long max_steps = 1'000'000;
    bool record_trajectory = false;
    // Check every sampled successor against the exact action support.
    bool validate_actions = false;
    // Called on every visited state, the initial one included.
    std::function<void(const State&, long long step)> on_state;
};

struct RunReport {
    bool terminated = false;
    long long steps = 0;
    std::vector<long long> resample_counts;
    State final_state;
    std::uint64_t seed = 0;
    std::optional<Trajectory> trajectory;
};

RunReport run(const SearchProblem& problem, const FlawChoiceStrategy& strategy, std::uint64_t seed,
              const RunOptions& options = {});
RunReport run(const SearchProblem& problem, const FlawChoiceStrategy& strategy, long long max_steps,
              std::uint64_t seed);

}  // namespace lll

#include "lll/engine.hpp"

#include <algorithm>

namespace lll {

std::vector<int> Trajectory::witness_sequence() const {
    std::vector<int> w;
    w.reserve(steps.size());
    for (const auto& s : steps) w.push_back(s.flaw);
    return w;
}

namespace {

// new \ (old \ {w}); both inputs sorted.
std::vector<int> introduced_set(const std::vector<int>& old_present, const std::vector<int>& new_present, int w) {
    std::vector<int> out;
    std::size_t a = 0;
    for (int f : new_present) {
        while (a < old_present.size() && old_present[a] < f) ++a;
        bool was = a < old_present.size() && old_present[a] == f && f != w;
        if (!was) out.push_back(f);
    }
    return out;
}

}  // namespace

RunReport run(const SearchProblem& problem, const FlawChoiceStrategy& strategy, std::uint64_t seed,
              const RunOptions& options) {
    if (options.max_steps < 0) throw LllError("max_steps must be nonnegative");
    const int m = problem.flaw_count();
    strategy.validate(m);

    Rng rng(seed);
    RunReport rep;
    rep.seed = seed;
    rep.resample_counts.assign(static_cast<std::size_t>(m), 0);

    State state = problem.sample_initial(rng);
    std::vector<int> present = problem.present_flaws(state);
    std::vector<int> addressed;
    std::vector<long long> introduced_at(static_cast<std::size_t>(m), -1);
    for (int f : present) introduced_at[f] = 0;

    if (options.record_trajectory) {
        rep.trajectory.emplace();
        rep.trajectory->initial_state = state;
        rep.trajectory->initial_present = present;
    }
    if (options.on_state) options.on_state(state, 0);

    long long t = 0;
    while (!present.empty() && t < options.max_steps) {
        History h{&state, &present, &addressed, &introduced_at, t};
        int w = strategy.choose(h);
        if (!std::binary_search(present.begin(), present.end(), w)) throw LllError("invalid strategy");

        State next = problem.sample_action(w, state, rng);
        double rho = -1.0;
        if (options.validate_actions) {
            rho = 0.0;
            for (const auto& tr : problem.actions(w, state))
                if (tr.next == next) rho += tr.prob;
            if (!(rho > 0.0)) throw LllError("inconsistent actions");
        }

        std::vector<int> next_present = problem.present_flaws(next);
        ++t;
        ++rep.resample_counts[w];
        addressed.push_back(w);

        std::vector<int> intro = introduced_set(present, next_present, w);
        for (int f : intro) introduced_at[f] = t;

        if (options.record_trajectory)
            rep.trajectory->steps.push_back({w, next, rho, std::move(intro)});

        state = std::move(next);
        present = std::move(next_present);
        if (options.on_state) options.on_state(state, t);
    }

    rep.terminated = present.empty();
    rep.steps = t;
    rep.final_state = std::move(state);
    return rep;
}

RunReport run(const SearchProblem& problem, const FlawChoiceStrategy& strategy, long long max_steps,
              std::uint64_t seed) {
    RunOptions o;
    o.max_steps = max_steps;
    return run(problem, strategy, seed, o);
}

}  // namespace lll

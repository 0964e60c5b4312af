#include "lll/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace lll {

namespace {

constexpr double kSumTol = 1e-12;

void check_distribution(const std::vector<Transition>& tr) {
    double s = 0.0;
    for (const auto& t : tr) {
        if (!(t.prob >= 0.0)) throw LllError("inconsistent actions");
        s += t.prob;
    }
    if (std::fabs(s - 1.0) > kSumTol) throw LllError("inconsistent actions");
}

// Merge duplicate successors.
std::vector<Transition> merged(std::vector<Transition> tr) {
    std::sort(tr.begin(), tr.end(), [](const Transition& a, const Transition& b) { return a.next < b.next; });
    std::vector<Transition> out;
    for (auto& t : tr) {
        if (!out.empty() && out.back().next == t.next) out.back().prob += t.prob;
        else out.push_back(std::move(t));
    }
    return out;
}

}  // namespace

std::optional<std::size_t> StateSpace::find(const State& s) const {
    auto it = index.find(s);
    if (it == index.end()) return std::nullopt;
    return it->second;
}

StateSpace enumerate_space(const SearchProblem& problem, std::size_t cap) {
    auto all = problem.enumerate_states();
    if (!all) throw LllError("charge requires oracle mode");
    if (all->size() > cap) throw LllError("state space exceeds enumeration cap");
    StateSpace sp;
    sp.states = std::move(*all);
    sp.mu.resize(sp.states.size());
    double z = 0.0;
    for (std::size_t k = 0; k < sp.states.size(); ++k) {
        double w = problem.weight(sp.states[k]);
        if (w < 0.0) throw LllError("negative weight");
        sp.mu[k] = w;
        z += w;
        if (!sp.index.emplace(sp.states[k], k).second) throw LllError("duplicate state in enumeration");
    }
    if (!(z > 0.0)) throw LllError("measure has zero total weight");
    for (auto& m : sp.mu) m /= z;

    auto th = problem.initial_distribution();
    if (th.empty()) {
        sp.theta = sp.mu;
        sp.init_ratio = 1.0;
    } else {
        check_distribution(th);
        sp.theta.assign(sp.states.size(), 0.0);
        for (const auto& t : th) {
            auto k = sp.find(t.next);
            if (!k) throw LllError("initial distribution outside state space");
            sp.theta[*k] += t.prob;
        }
        double r = 0.0;
        for (std::size_t k = 0; k < sp.states.size(); ++k) {
            if (sp.theta[k] <= 0.0) continue;
            if (sp.mu[k] <= 0.0) throw LllError("measure support violation");
            r = std::max(r, sp.theta[k] / sp.mu[k]);
        }
        sp.init_ratio = r;
    }
    return sp;
}

EventExtension flaw_as_event(const SearchProblem& problem, int i) {
    EventExtension e;
    e.contains = [&problem, i](const State& s) { return problem.is_present(i, s); };
    e.actions = [&problem, i](const State& s) { return problem.actions(i, s); };
    e.sample = [&problem, i](const State& s, Rng& r) { return problem.sample_action(i, s, r); };
    e.neighbors = problem.neighbors(i);
    return e;
}

EventExtension singleton_event(const SearchProblem& problem, const StateSpace& space, const State& s0) {
    EventExtension e;
    e.contains = [s0](const State& s) { return s == s0; };
    std::vector<Transition> resample;
    for (std::size_t k = 0; k < space.size(); ++k)
        if (space.mu[k] > 0.0) resample.push_back({space.states[k], space.mu[k]});
    e.actions = [resample](const State&) { return resample; };
    std::vector<double> cdf;
    double acc = 0.0;
    for (const auto& t : resample) cdf.push_back(acc += t.prob);
    e.sample = [resample, cdf](const State&, Rng& r) {
        double u = r.uniform() * cdf.back();
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), resample.size() - 1);
        return resample[k].next;
    };
    for (int j = 0; j < problem.flaw_count(); ++j) e.neighbors.push_back(j);
    return e;
}

double event_charge(const SearchProblem& problem, const StateSpace& space, const EventExtension& e) {
    std::vector<double> inflow(space.size(), 0.0);
    for (std::size_t k = 0; k < space.size(); ++k) {
        const State& s = space.states[k];
        if (space.mu[k] == 0.0 || !e.contains(s)) continue;
        auto tr = e.actions(s);
        check_distribution(tr);
        for (const auto& t : tr) {
            if (t.prob == 0.0) continue;
            auto dst = space.find(t.next);
            if (!dst) throw LllError("inconsistent actions");
            inflow[*dst] += space.mu[k] * t.prob;
        }
    }
    double g = 0.0;
    for (std::size_t k = 0; k < space.size(); ++k) {
        if (inflow[k] == 0.0) continue;
        if (space.mu[k] == 0.0) throw LllError("measure support violation");
        g = std::max(g, inflow[k] / space.mu[k]);
    }
    (void)problem;
    return g;
}

double event_charge(const SearchProblem& problem, const EventExtension& e) {
    return event_charge(problem, enumerate_space(problem), e);
}

double charge(const SearchProblem& problem, const StateSpace& space, int i) {
    return event_charge(problem, space, flaw_as_event(problem, i));
}

double charge(const SearchProblem& problem, int i) { return charge(problem, enumerate_space(problem), i); }

double measure(const StateSpace& space, const std::function<bool(const State&)>& pred) {
    double m = 0.0;
    for (std::size_t k = 0; k < space.size(); ++k)
        if (pred(space.states[k])) m += space.mu[k];
    return m;
}

std::map<std::vector<int>, double> backtrack_charges(const SearchProblem& problem, const StateSpace& space,
                                                     int v) {
    // inflow per (S, target)
    std::map<std::vector<int>, std::vector<double>> inflow;
    for (std::size_t k = 0; k < space.size(); ++k) {
        const State& s = space.states[k];
        if (space.mu[k] == 0.0 || !problem.is_present(v, s)) continue;
        auto before = problem.present_flaws(s);
        auto tr = problem.actions(v, s);
        check_distribution(tr);
        for (const auto& t : merged(tr)) {
            if (t.prob == 0.0) continue;
            auto dst = space.find(t.next);
            if (!dst) throw LllError("inconsistent actions");
            auto after = problem.present_flaws(t.next);
            std::vector<int> S;
            for (int f : after)
                if (f == v || !std::binary_search(before.begin(), before.end(), f)) S.push_back(f);
            auto& row = inflow[S];
            if (row.empty()) row.assign(space.size(), 0.0);
            row[*dst] += space.mu[k] * t.prob;
        }
    }
    std::map<std::vector<int>, double> out;
    for (const auto& [S, row] : inflow) {
        double g = 0.0;
        for (std::size_t k = 0; k < space.size(); ++k) {
            if (row[k] == 0.0) continue;
            if (space.mu[k] == 0.0) throw LllError("measure support violation");
            g = std::max(g, row[k] / space.mu[k]);
        }
        if (g > 0.0) out[S] = g;
    }
    return out;
}

CausalityReport check_causality(const SearchProblem& problem, const StateSpace& space) {
    CausalityReport rep;
    const int m = problem.flaw_count();
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (problem.adjacent(i, j) != problem.adjacent(j, i)) {
                rep.ok = false;
                rep.message = "Gamma not symmetric at (" + std::to_string(i) + "," + std::to_string(j) + ")";
                return rep;
            }
    for (std::size_t k = 0; k < space.size(); ++k) {
        const State& s = space.states[k];
        auto before = problem.present_flaws(s);
        for (int i : before) {
            auto tr = problem.actions(i, s);
            check_distribution(tr);
            for (const auto& t : tr) {
                if (t.prob == 0.0) continue;
                ++rep.arcs;
                for (int j : problem.present_flaws(t.next)) {
                    bool fresh = j == i || !std::binary_search(before.begin(), before.end(), j);
                    if (fresh && !problem.adjacent(i, j)) {
                        rep.ok = false;
                        rep.message = "flaw " + std::to_string(i) + " introduces " + std::to_string(j) +
                                      " from " + state_to_string(s) + " to " + state_to_string(t.next);
                        return rep;
                    }
                }
            }
        }
    }
    return rep;
}

CouplingReport coupling_check(const SearchProblem& problem, int i, const State& s, long long samples,
                              std::uint64_t seed, double z_limit) {
    CouplingReport rep;
    auto tr = merged(problem.actions(i, s));
    check_distribution(tr);
    std::unordered_map<State, long long, StateHash> count;
    Rng rng(seed);
    for (long long r = 0; r < samples; ++r) ++count[problem.sample_action(i, s, rng)];
    rep.outcomes = tr.size();
    std::size_t matched = 0;
    for (const auto& t : tr) {
        auto it = count.find(t.next);
        long long c = it == count.end() ? 0 : it->second;
        if (it != count.end()) ++matched;
        double n = static_cast<double>(samples);
        double sd = std::sqrt(n * t.prob * (1.0 - t.prob));
        double z = sd > 0.0 ? std::fabs(static_cast<double>(c) - n * t.prob) / sd
                            : (static_cast<double>(c) == n * t.prob ? 0.0 : INFINITY);
        rep.max_z = std::max(rep.max_z, z);
    }
    if (matched != count.size()) {
        rep.pass = false;
        rep.message = "sampled successor outside the action support";
        return rep;
    }
    rep.pass = rep.max_z <= z_limit;
    if (!rep.pass) rep.message = "frequency deviation beyond limit";
    return rep;
}

}  // namespace lll

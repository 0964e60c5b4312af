#include <cmath>
#include <memory>

#include "doctest.h"
#include "lll/engine.hpp"
#include "lll/oracle.hpp"
#include "lll/solvers/coloring.hpp"
#include "lll/solvers/ksat.hpp"
#include "lll/solvers/rainbow.hpp"

using namespace lll;

namespace {

// Moser-Tardos vertex colouring: flaw e*q+c, both endpoints resampled.
class MtColoring : public SearchProblem {
public:
    MtColoring(GraphInstance g, int q) : g_(std::move(g)), q_(q) {}
    std::string name() const override { return "mt-coloring"; }
    int flaw_count() const override { return g_.edge_count() * q_; }
    bool is_present(int i, const State& s) const override {
        auto [u, v] = g_.edges[i / q_];
        return s[u] == i % q_ && s[v] == i % q_;
    }
    State sample_action(int i, const State& s, Rng& rng) const override {
        auto [u, v] = g_.edges[i / q_];
        State t = s;
        t[u] = static_cast<int>(rng.below(q_));
        t[v] = static_cast<int>(rng.below(q_));
        return t;
    }
    std::vector<Transition> actions(int i, const State& s) const override {
        auto [u, v] = g_.edges[i / q_];
        std::vector<Transition> out;
        for (int a = 0; a < q_; ++a)
            for (int b = 0; b < q_; ++b) {
                State t = s;
                t[u] = a;
                t[v] = b;
                out.push_back({t, 1.0 / (q_ * q_)});
            }
        return out;
    }
    bool adjacent(int i, int j) const override {
        auto [a, b] = g_.edges[i / q_];
        auto [c, d] = g_.edges[j / q_];
        return a == c || a == d || b == c || b == d;
    }
    double weight(const State&) const override { return 1.0; }
    State sample_initial(Rng& rng) const override {
        State s(static_cast<std::size_t>(g_.n));
        for (auto& x : s) x = static_cast<int>(rng.below(q_));
        return s;
    }
    std::optional<std::vector<State>> enumerate_states() const override {
        std::vector<State> out;
        State s(static_cast<std::size_t>(g_.n), 0);
        while (true) {
            out.push_back(s);
            int a = 0;
            while (a < g_.n && ++s[a] == q_) s[a++] = 0;
            if (a == g_.n) break;
        }
        return out;
    }
    const GraphInstance& graph() const { return g_; }

private:
    GraphInstance g_;
    int q_;
};

// One flaw that a bad action claims to fix but actually jumps outside the support.
class Liar : public SearchProblem {
public:
    std::string name() const override { return "liar"; }
    int flaw_count() const override { return 1; }
    bool is_present(int, const State& s) const override { return s[0] == 1; }
    State sample_action(int, const State&, Rng&) const override { return {2}; }
    std::vector<Transition> actions(int, const State&) const override { return {{{0}, 1.0}}; }
    bool adjacent(int i, int j) const override { return i == j; }
    double weight(const State&) const override { return 1.0; }
    State sample_initial(Rng&) const override { return {1}; }
};

// Solve E[steps] for MT on the single clause (x or y) by value iteration
// over the absorbing chain: from the violated state, every step leaves with
// probability 3/4.
double two_sat_expected_steps() {
    // states 0..3 as (x,y) bits, violated = 0. h(0) = 1 + (1/4) h(0).
    double h = 0.0;
    for (int it = 0; it < 200; ++it) h = 1.0 + 0.25 * h;
    return 0.25 * h;  // theta uniform: only state 0 needs work
}

}  // namespace

TEST_CASE("run: trivial start, determinism, report invariants") {
    CnfInstance one;
    one.variables = 1;
    one.clauses = {{1}};
    KsatMt p(one);
    bool saw_zero = false;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto r = run(p, FlawChoiceStrategy::lowest_index(), seed);
        CHECK(r.terminated);
        if (r.steps == 0) saw_zero = true;
        long long sum = 0;
        for (auto n : r.resample_counts) sum += n;
        CHECK(sum == r.steps);
        CHECK(p.present_flaws(r.final_state).empty());
    }
    CHECK(saw_zero);

    KsatMt q(random_ksat(30, 3, 4, 9));
    for (auto strat : {FlawChoiceStrategy::lowest_index(), FlawChoiceStrategy::recency()}) {
        auto a = run(q, strat, 77);
        auto b = run(q, strat, 77);
        CHECK(a.steps == b.steps);
        CHECK(a.final_state == b.final_state);
        CHECK(a.resample_counts == b.resample_counts);
    }
}

TEST_CASE("run: censoring and errors") {
    CnfInstance f;
    f.variables = 2;
    f.clauses = {{1}, {-1}};
    KsatMt p(f);
    auto r = run(p, FlawChoiceStrategy::lowest_index(), 1000, 3);
    CHECK(!r.terminated);
    CHECK(r.steps == 1000);
    CHECK(run(p, FlawChoiceStrategy::lowest_index(), 0, 3).steps == 0);
    CHECK_THROWS_AS(run(p, FlawChoiceStrategy::lowest_index(), -1, 3), LllError);

    auto bad = FlawChoiceStrategy::custom([](const History&) { return 1; });
    CnfInstance g;
    g.variables = 2;
    g.clauses = {{1}, {2}};
    KsatMt two(g);
    bool thrown = false;
    for (std::uint64_t seed = 0; seed < 10 && !thrown; ++seed) {
        try {
            run(two, bad, seed);
        } catch (const LllError& e) {
            thrown = std::string(e.what()) == "invalid strategy";
        }
    }
    CHECK(thrown);

    RunOptions opt;
    opt.validate_actions = true;
    CHECK_THROWS_WITH_AS(run(Liar(), FlawChoiceStrategy::lowest_index(), 1, opt), "inconsistent actions", LllError);
}

TEST_CASE("run: 2-SAT single clause expected steps matches absorbing chain") {
    CnfInstance f;
    f.variables = 2;
    f.clauses = {{1, 2}};
    KsatMt p(f);
    const int runs = 200000;
    double sum = 0.0, sq = 0.0;
    for (int r = 0; r < runs; ++r) {
        auto rep = run(p, FlawChoiceStrategy::lowest_index(), Rng::stream_seed(5, r));
        sum += rep.steps;
        sq += static_cast<double>(rep.steps) * rep.steps;
    }
    const double mean = sum / runs;
    const double se = std::sqrt((sq / runs - mean * mean) / runs);
    const double exact = two_sat_expected_steps();
    CHECK(std::abs(exact - 1.0 / 3.0) < 1e-12);
    CHECK(std::abs(mean - exact) < 4 * se);
}

TEST_CASE("strategies pick present flaws") {
    CnfInstance f;
    f.variables = 3;
    f.clauses = {{1}, {2}, {3}};
    KsatMt p(f);
    State s{0, 0, 0};
    auto present = p.present_flaws(s);
    std::vector<int> addressed;
    std::vector<long long> intro{0, 5, 2};
    History h{&s, &present, &addressed, &intro, 0};
    CHECK(FlawChoiceStrategy::lowest_index().choose(h) == 0);
    CHECK(FlawChoiceStrategy::fixed_priority({2, 0, 1}).choose(h) == 2);
    CHECK(FlawChoiceStrategy::recency().choose(h) == 1);
    CHECK_THROWS_AS(FlawChoiceStrategy::fixed_priority({0, 0, 1}), LllError);
    CHECK_THROWS_AS(FlawChoiceStrategy::parse("nonsense"), LllError);
    CHECK(FlawChoiceStrategy::parse("recency").kind() == FlawChoiceStrategy::Kind::recency);
}

TEST_CASE("charge examples") {
    CnfInstance f;
    f.variables = 3;
    f.clauses = {{1, 2, 3}};
    KsatMt p(f);
    auto space = enumerate_space(p);
    CHECK(std::abs(charge(p, space, 0) - 0.125) < 1e-12);

    // E = empty set
    EventExtension empty;
    empty.contains = [](const State&) { return false; };
    empty.actions = [](const State& s) { return std::vector<Transition>{{s, 1.0}}; };
    CHECK(event_charge(p, space, empty) == 0.0);

    CHECK(std::abs(event_charge(p, space, flaw_as_event(p, 0)) - charge(p, space, 0)) < 1e-15);
    State s0{1, 0, 1};
    CHECK(std::abs(event_charge(p, space, singleton_event(p, space, s0)) - 0.125) < 1e-12);

    MtColoring col(path_graph(4), 3);
    auto cs = enumerate_space(col);
    const int q = 3;
    // E: edge 0 = (0,1) coloured 0 at both ends and vertex 2 coloured 1,
    // resampling vertices 0 and 1.
    EventExtension e;
    e.contains = [](const State& s) { return s[0] == 0 && s[1] == 0 && s[2] == 1; };
    e.actions = [&](const State& s) { return col.actions(0, s); };
    // brute force max_{s'} sum_{s in E} mu(s) rho(s, s') / mu(s')
    double best = 0.0;
    for (std::size_t b = 0; b < cs.size(); ++b) {
        double in = 0.0;
        for (std::size_t a = 0; a < cs.size(); ++a) {
            if (!e.contains(cs.states[a])) continue;
            for (const auto& t : e.actions(cs.states[a]))
                if (t.next == cs.states[b]) in += cs.mu[a] * t.prob;
        }
        best = std::max(best, in / cs.mu[b]);
    }
    CHECK(std::abs(best - 1.0 / (q * q)) < 1e-12);
    CHECK(std::abs(event_charge(col, cs, e) - best) < 1e-12);
    CHECK(measure(cs, e.contains) == doctest::Approx(1.0 / 27).epsilon(1e-12));

    CHECK_THROWS_WITH_AS(charge(KsatMt(random_ksat(40, 3, 3, 1)), 0), "charge requires oracle mode", LllError);
}

TEST_CASE("charge is at least mu(f), with equality for resampling oracles") {
    std::vector<std::unique_ptr<SearchProblem>> problems;
    problems.push_back(std::make_unique<KsatMt>(random_ksat(6, 3, 2, 3)));
    problems.push_back(std::make_unique<MtColoring>(cycle_graph(4), 3));
    problems.push_back(std::make_unique<RainbowMatching>(random_colored_clique(6, 2, 1)));
    problems.push_back(std::make_unique<VertexColoringGreedy>(path_graph(4), 4));
    for (std::size_t k = 0; k < problems.size(); ++k) {
        const auto& p = *problems[k];
        auto space = enumerate_space(p);
        for (int i = 0; i < p.flaw_count(); ++i) {
            const double mu_f = measure(space, [&](const State& s) { return p.is_present(i, s); });
            const double g = charge(p, space, i);
            CHECK(g >= mu_f - 1e-12);
            if (k < 3) CHECK(std::abs(g - mu_f) < 1e-12);
        }
        CHECK(check_causality(p, space).ok);
    }
}

TEST_CASE("coupling: sampled steps follow the declared actions") {
    RainbowMatching p(random_colored_clique(6, 2, 11));
    Rng rng(2);
    State s = p.sample_initial(rng);
    for (int tries = 0; tries < 1000 && p.present_flaws(s).empty(); ++tries) s = p.sample_initial(rng);
    REQUIRE(!p.present_flaws(s).empty());
    auto rep = coupling_check(p, p.present_flaws(s)[0], s, 1'000'000, 17);
    CHECK(rep.pass);
    CHECK(rep.outcomes > 1);

    VertexColoringGreedy c(path_graph(4), 5);
    State t{0, 0, 1, 2};
    auto cr = coupling_check(c, 0, t, 200000, 3);
    CHECK(cr.pass);
    CHECK(cr.outcomes == 9);
}

TEST_CASE("causality check catches an undeclared arc") {
    class Sneaky : public MtColoring {
    public:
        using MtColoring::MtColoring;
        bool adjacent(int i, int j) const override { return i == j; }
    };
    Sneaky p(path_graph(3), 2);
    auto rep = check_causality(p, enumerate_space(p));
    CHECK(!rep.ok);
    CHECK(!rep.message.empty());
}

TEST_CASE("rng streams") {
    Rng a(Rng::stream_seed(1, 0)), b(Rng::stream_seed(1, 1)), c(Rng::stream_seed(1, 0));
    CHECK(a.next() != b.next());
    Rng d(Rng::stream_seed(1, 0));
    CHECK(c.next() == d.next());
    Rng r(4);
    for (int k = 0; k < 1000; ++k) {
        CHECK(r.below(7) < 7);
        double u = r.uniform();
        CHECK((u >= 0.0 && u < 1.0));
    }
}

#include <cmath>

#include "doctest.h"
#include "lll/criteria.hpp"
#include "lll/oracle.hpp"
#include "lll/rng.hpp"
#include "lll/solvers/aec.hpp"
#include "lll/solvers/ksat.hpp"
#include "lll/solvers/rainbow.hpp"

using namespace lll;

namespace {

DependencyGraph from_mask(int m, std::uint32_t mask) {
    DependencyGraph g(m);
    int bit = 0;
    for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b, ++bit)
            if ((mask >> bit) & 1u) g.add_edge(a, b);
    return g;
}

bool independent(const DependencyGraph& g, std::uint32_t set) {
    for (int a = 0; a < g.size(); ++a)
        for (int b = a + 1; b < g.size(); ++b)
            if (((set >> a) & 1u) && ((set >> b) & 1u) && g.adjacent(a, b)) return false;
    return true;
}

// q_S straight from the signed sum over independent supersets
double signed_sum(const DependencyGraph& g, const std::vector<double>& gamma, std::uint32_t s) {
    const int m = g.size();
    double total = 0.0;
    for (std::uint32_t t = 0; t < (1u << m); ++t) {
        if ((t & s) != s || !independent(g, t)) continue;
        double prod = 1.0;
        int extra = 0;
        for (int j = 0; j < m; ++j)
            if ((t >> j) & 1u) {
                prod *= gamma[j];
                if (!((s >> j) & 1u)) ++extra;
            }
        total += (extra % 2 ? -prod : prod);
    }
    return total;
}

std::vector<int> bits(std::uint32_t s) {
    std::vector<int> out;
    for (int j = 0; s; ++j, s >>= 1)
        if (s & 1u) out.push_back(j);
    return out;
}

void shearer_against_oracle(const DependencyGraph& g, const std::vector<double>& gamma) {
    const int m = g.size();
    auto rep = shearer_polynomials(gamma, g);
    bool pass = true;
    std::size_t count = 0;
    for (std::uint32_t s = 0; s < (1u << m); ++s) {
        if (!independent(g, s)) continue;
        ++count;
        double want = signed_sum(g, gamma, s);
        REQUIRE(rep.q_of(bits(s)) == want);
        if (want < 0.0 || (s == 0 && want <= 0.0)) pass = false;
    }
    CHECK(rep.q.size() == count);
    CHECK(rep.pass == pass);
}

}  // namespace

TEST_CASE("general LLL examples") {
    DependencyGraph one(1);
    one.add_edge(0, 0);
    auto fail = general_lll_check({1.0}, one, {3.0});
    CHECK(!fail.pass);
    CHECK(fail.max_ratio == doctest::Approx(4.0 / 3.0));
    auto ok = general_lll_check({0.25}, one, {1.0});
    CHECK(ok.pass);
    CHECK(ok.max_ratio == doctest::Approx(0.5));
    CHECK_THROWS_AS(general_lll_check({0.25, 0.1}, one, {1.0}), LllError);
    CHECK_THROWS_AS(general_lll_check({0.25}, one, {0.0}), LllError);

    // symmetric k-SAT: d+1 flaws forming a clique
    for (int k : {3, 5})
        for (int d : {2, 4, 8}) {
            DependencyGraph g(d + 1);
            for (int a = 0; a <= d; ++a)
                for (int b = a + 1; b <= d; ++b) g.add_edge(a, b);
            const double gamma = std::ldexp(1.0, -k), psi = 1.0 / d;
            auto rep = general_lll_check(std::vector<double>(d + 1, gamma), g, std::vector<double>(d + 1, psi));
            const double expect = gamma * d * std::pow(1.0 + 1.0 / d, d + 1);
            CHECK(rep.max_ratio == doctest::Approx(expect).epsilon(1e-13));
            const double x = psi / (1.0 + psi);
            CHECK(gamma / (x * std::pow(1.0 - x, d)) == doctest::Approx(expect).epsilon(1e-13));
            CHECK(rep.pass == (expect < 1.0));
        }
}

TEST_CASE("general LLL product equals subset enumeration") {
    Rng rng(3);
    const int m = 15;
    DependencyGraph g(m);
    for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b) g.add_edge(a, b);
    std::vector<double> psi;
    for (int j = 0; j < m; ++j) psi.push_back(std::ldexp(static_cast<double>(1 + rng.below(3)), -2));
    double brute = 0.0;
    for (std::uint32_t s = 0; s < (1u << m); ++s) {
        double p = 1.0;
        for (int j : bits(s)) p *= psi[j];
        brute += p;
    }
    auto rep = general_lll_check(std::vector<double>(m, 1.0), g, psi);
    CHECK(rep.lhs[0] == brute);
}

TEST_CASE("cluster expansion examples") {
    DependencyGraph lonely(1);
    auto r = cluster_expansion_check({0.3}, lonely, {0.3});
    CHECK(r.pass);
    CHECK(r.aux[0] == 1.0);
    CHECK(!cluster_expansion_check({0.31}, lonely, {0.3}).pass);

    DependencyGraph k4(4);
    for (int a = 0; a < 4; ++a)
        for (int b = a; b < 4; ++b) k4.add_edge(a, b);
    std::vector<double> psi{0.1, 0.2, 0.3, 0.4};
    auto c = cluster_expansion_check(std::vector<double>(4, 0.01), k4, psi);
    for (int i = 0; i < 4; ++i) CHECK(c.aux[i] == doctest::Approx(2.0));

    DependencyGraph big(30);
    for (int j = 1; j < 30; ++j) big.add_edge(0, j);
    CHECK_THROWS_WITH_AS(cluster_expansion_check(std::vector<double>(30, 0.01), big, std::vector<double>(30, 0.1)),
                         "neighborhood too large; supply closed form", LllError);

    // rainbow matchings: n = 10, lambda = 27/128
    const int n = 10;
    const double lambda = 27.0 / 128.0, psi_r = 3.0 / (4.0 * n * n);
    const double gamma = 1.0 / ((2.0 * n - 1) * (2.0 * n - 3));
    const double zeta = std::pow(1.0 + (2.0 * n - 1) * (lambda * n - 1) * psi_r, 4);
    auto rr = cluster_expansion_from_zeta({gamma}, {zeta}, {psi_r});
    CHECK(rr.pass);
    CHECK(rr.max_ratio == doctest::Approx(0.742).epsilon(0.002));
    CHECK(std::pow(1.0 + 1.5 * lambda, 4) / 3.0 == doctest::Approx(1.0).epsilon(0.005));
}

TEST_CASE("Shearer examples") {
    DependencyGraph one(1);
    auto a = shearer_polynomials({0.3}, one);
    CHECK(a.q_empty == doctest::Approx(0.7));
    CHECK(a.q_of({0}) == doctest::Approx(0.3));

    auto edge = from_mask(2, 1);
    auto b = shearer_polynomials({0.25, 0.5}, edge);
    CHECK(b.q_empty == 0.25);
    CHECK(b.q_of({0}) == 0.25);
    CHECK(b.pass);
    CHECK(b.ratios[1] == 2.0);

    auto none = from_mask(2, 0);
    auto c = shearer_polynomials({0.25, 0.5}, none);
    CHECK(c.q_empty == 0.75 * 0.5);
    CHECK(c.q_of({0, 1}) == 0.125);

    CHECK(!shearer_polynomials({0.5, 0.5}, edge).pass);
    CHECK_THROWS_AS(shearer_polynomials(std::vector<double>(26, 0.01), DependencyGraph(26)), LllError);
    auto single = shearer_polynomials({0.25, 0.5}, none, ShearerFamily::singletons);
    CHECK(single.q.size() == 3);
}

TEST_CASE("Shearer matches signed sums on every graph up to 5 vertices") {
    Rng rng(1);
    for (int m = 1; m <= 5; ++m) {
        const int pairs = m * (m - 1) / 2;
        for (std::uint32_t mask = 0; mask < (1u << pairs); ++mask) {
            auto g = from_mask(m, mask);
            std::vector<double> gamma;
            for (int j = 0; j < m; ++j) gamma.push_back(std::ldexp(static_cast<double>(rng.below(9)), -4));
            shearer_against_oracle(g, gamma);
        }
    }
    for (int m = 6; m <= 8; ++m)
        for (int trial = 0; trial < 150; ++trial) {
            const int pairs = m * (m - 1) / 2;
            auto g = from_mask(m, static_cast<std::uint32_t>(rng.below(std::uint64_t{1} << pairs)));
            std::vector<double> gamma;
            for (int j = 0; j < m; ++j) gamma.push_back(std::ldexp(static_cast<double>(rng.below(7)), -4));
            shearer_against_oracle(g, gamma);
        }
}

TEST_CASE("clique LLL examples") {
    DependencyGraph one(1);
    auto a = clique_lll_check({0.4}, one, {{{0}}, {{0.5}}});
    CHECK(a.pass);
    CHECK(a.aux[0] == 0.5);
    CHECK(!clique_lll_check({0.6}, one, {{{0}}, {{0.5}}}).pass);

    // one clique on all flaws, x_i = gamma_i / (1 - sum gamma)
    DependencyGraph k3(3);
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) k3.add_edge(i, j);
    std::vector<double> gamma{0.1, 0.15, 0.2};
    const double s = 0.45;
    CliqueLllConfig cfg{{{0, 1, 2}}, {{0.1 / (1 - s), 0.15 / (1 - s), 0.2 / (1 - s)}}};
    CHECK(clique_lll_check(gamma, k3, cfg).pass);
    CliqueLllConfig cfg2{{{0, 1, 2}}, {{0.12, 0.18, 0.24}}};
    auto b = clique_lll_check(gamma, k3, cfg2);
    CHECK(b.pass);
    CHECK(b.aux[2] == doctest::Approx(0.24 / (1 - 0.30)));

    CHECK_THROWS_WITH_AS(clique_lll_check(gamma, k3, {{{0, 1}}, {{0.1, 0.1}}}), "clique cover incomplete", LllError);
    CHECK_THROWS_AS(clique_lll_check(gamma, k3, {{{0, 1, 2}}, {{0.1, 1.0, 0.1}}}), LllError);
}

TEST_CASE("clique AEC constants") {
    auto opt = minimize_clique_aec_ratio();
    CHECK(opt.value == doctest::Approx(9.69615).epsilon(1e-5));
    // grid search as an independent check
    double best = 1e9;
    for (double e = 0.5; e < 20; e += 0.01)
        for (double c = 0.01; c < e; c += 0.01) best = std::min(best, clique_aec_ratio(e, c));
    CHECK(opt.value <= best + 1e-9);
    CHECK(best - opt.value < 0.01);
    CHECK(clique_aec_ratio(2.05869, 0.8282) > 12.0);
    CHECK(clique_aec_ratio(1.0, 2.0) == std::numeric_limits<double>::infinity());

    AecCliqueMt p(complete_graph(4), static_cast<int>(std::ceil(opt.value * 2)));
    auto rep = clique_lll_check(p.charges(), p.dependency_graph(), p.clique_config(opt.eps, opt.c));
    CHECK(rep.pass);
}

TEST_CASE("backtracking criterion for k-SAT") {
    for (int k = 3; k <= 7; ++k) {
        const double alpha = k / (2.0 * (k - 1));
        // alpha maximizes (2a - 1) / a^k
        auto [amin, fmin] = golden_minimize([&](double a) { return -(2 * a - 1) / std::pow(a, k); }, 0.5, 2.0);
        CHECK(amin == doctest::Approx(alpha).epsilon(1e-6));
        const double thr = std::ldexp(1.0, k) / k * std::pow(1.0 - 1.0 / k, k - 1);
        CHECK(-fmin == doctest::Approx(thr).epsilon(1e-9));
    }
    CHECK(std::ldexp(1.0, 5) / 5 * std::pow(0.8, 4) == doctest::Approx(8192.0 / 3125.0).epsilon(1e-15));

    for (int delta : {2, 3}) {
        auto f = random_ksat(30, 5, delta, 4);
        KsatBacktrack p(f);
        auto table = p.charge_table();
        auto rep = backtracking_criterion(table, std::vector<double>(30, 5.0 / 8.0));
        const double zeta = 1.6 * (0.5 + delta * 0.5 * std::pow(0.625, 5));
        CHECK(rep.scalars.at("max_zeta") == doctest::Approx(zeta).epsilon(1e-14));
        CHECK(rep.pass == (delta == 2));
        CHECK(rep.scalars.at("T0") == doctest::Approx(std::log2(p.init_ratio()) + 30 * std::log2(1.625)));
    }
}

TEST_CASE("backtracking charges match enumeration on a small formula") {
    CnfInstance f;
    f.variables = 4;
    f.clauses = {{1, 2}, {-2, 3}, {3, 4}};
    KsatBacktrack p(f);
    auto space = enumerate_space(p);
    auto table = p.charge_table();
    for (int v = 0; v < 4; ++v)
        for (const auto& [s, g] : backtrack_charges(p, space, v)) CHECK(g <= table.get(v, s) + 1e-12);
}

TEST_CASE("AEC backtracking criterion") {
    auto good = aec_backtrack_criterion(3, 9, (1 + std::sqrt(5.0)) / 2, default_cycle_bound(3));
    CHECK(good.pass);
    CHECK(good.scalars.at("zeta") == doctest::Approx(2.0 / good.scalars.at("c")).epsilon(1e-9));
    CHECK(!aec_backtrack_criterion(3, 8, (1 + std::sqrt(5.0)) / 2, default_cycle_bound(3)).pass);
}

TEST_CASE("commutative backtracking criterion") {
    // single set with Gamma(S) = {S}
    auto one = commutative_backtracking_criterion({{{0, 1}, 0.2, 0.3}});
    CHECK(one.lhs[0] == doctest::Approx(0.2 * 1.3));
    CHECK(one.pass);
    CHECK(!commutative_backtracking_criterion({{{0, 1}, 0.25, 0.3}}).pass);
    // disjoint sets do not interact
    auto two = commutative_backtracking_criterion({{{0}, 0.2, 0.3}, {{1}, 0.25, 0.3}});
    CHECK(two.lhs[0] == doctest::Approx(0.26));
    CHECK(!two.pass);

    // k-SAT sunflower: clause 0 meets d others, which are pairwise disjoint
    const int k = 5;
    const int d = static_cast<int>(std::floor(32.0 / std::exp(1.0)));
    CnfInstance f;
    f.variables = k + d * (k - 1);
    std::vector<int> center;
    for (int j = 1; j <= k; ++j) center.push_back(j);
    f.clauses.push_back(center);
    int next = k + 1;
    for (int c = 0; c < d; ++c) {
        std::vector<int> cl{1 + c % k};
        for (int j = 1; j < k; ++j) cl.push_back(next++);
        f.clauses.push_back(cl);
    }
    auto table = KsatBacktrack(f).charge_table();
    auto sets = realizable_sets(table);
    CHECK(sets.size() == static_cast<std::size_t>(d + 1));
    for (auto& s : sets) {
        CHECK(s.gamma == std::ldexp(1.0, -k));
        s.psi = std::exp(1.0) / 32.0;
    }
    auto rep = commutative_backtracking_criterion(sets);
    CHECK(rep.pass);
    CHECK(std::ldexp(1.0, -k) * std::pow(1.0 + 1.0 / d, d) <= std::ldexp(1.0, -k) * std::exp(1.0));
}

TEST_CASE("asymmetric k-SAT criterion") {
    // uniform measure with psi = 2 alpha gives the backtracking zeta
    auto f = random_ksat(30, 4, 3, 6);
    KsatBacktrack p(f);
    const double alpha = 4.0 / 6.0;
    auto asym = asymmetric_ksat_criterion(30, f.clause_vars(), p.violation_probabilities(), 2 * alpha);
    auto back = backtracking_criterion(p.charge_table(), std::vector<double>(30, alpha));
    for (int v = 0; v < 30; ++v) CHECK(asym.lhs[v] == doctest::Approx(back.lhs[v]).epsilon(1e-14));

    CHECK(!asymmetric_ksat_criterion(3, {{0, 1, 2}}, {0.125}, 1e9).pass);
    // one clause per variable, Pr = 2^-k, psi = 2: exactly 1, strict fails
    auto edge = asymmetric_ksat_criterion(3, {{0, 1, 2}}, {0.125}, 2.0);
    CHECK(edge.lhs[0] == 1.0);
    CHECK(!edge.pass);
}

TEST_CASE("counting bound") {
    CHECK(counting_bound(1, {{0}}, {0.7}) == doctest::Approx(1.7));
    CHECK(counting_bound(2, {{0}, {1}}, {0.7, 0.2}) == doctest::Approx(1.7 * 1.2));
    CHECK_THROWS_AS(counting_bound(1, {{}}, {0.1}), LllError);
    // Delta = 3 AEC on K_4: every edge constraint ratio below 3 keeps the bound under 4^|E|
    AecCliqueMt p(complete_graph(4), 20);
    auto opt = minimize_clique_aec_ratio();
    auto rep = clique_lll_check(p.charges(), p.dependency_graph(), p.clique_config(opt.eps, opt.c));
    std::vector<std::vector<int>> vars;
    for (int i = 0; i < p.flaw_count(); ++i) vars.push_back(p.flaw_edges(i));
    auto bound = counting_bound(6, vars, rep.aux);
    CHECK(bound < std::pow(4.0, 6));
}

TEST_CASE("criteria are monotone in gamma and cluster is weaker than general") {
    Rng rng(21);
    for (int trial = 0; trial < 300; ++trial) {
        const int m = 2 + static_cast<int>(rng.below(9));
        DependencyGraph g(m);
        for (int a = 0; a < m; ++a) {
            if (rng.bernoulli(0.5)) g.add_edge(a, a);
            for (int b = a + 1; b < m; ++b)
                if (rng.bernoulli(0.4)) g.add_edge(a, b);
        }
        std::vector<double> gamma, psi;
        for (int j = 0; j < m; ++j) {
            gamma.push_back(0.2 * rng.uniform());
            psi.push_back(0.05 + 0.5 * rng.uniform());
        }
        std::vector<double> smaller = gamma;
        for (auto& x : smaller) x *= rng.uniform();

        auto gen = general_lll_check(gamma, g, psi, Inequality::non_strict);
        auto clu = cluster_expansion_check(gamma, g, psi);
        auto sh = shearer_polynomials(gamma, g);
        if (gen.pass) CHECK(clu.pass);
        for (int i = 0; i < m; ++i) {
            double prod = 1.0;
            for (int j : g.neighbors(i)) prod *= 1.0 + psi[j];
            CHECK(clu.aux[i] <= prod + 1e-12);
        }
        if (gen.pass) CHECK(general_lll_check(smaller, g, psi, Inequality::non_strict).pass);
        if (clu.pass) CHECK(cluster_expansion_check(smaller, g, psi).pass);
        if (sh.pass) CHECK(shearer_polynomials(smaller, g).pass);
    }
}

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "lll/criteria.hpp"
#include "lll/dependency_graph.hpp"
#include "lll/engine.hpp"
#include "lll/oracle.hpp"
#include "lll/problem.hpp"
#include "lll/solvers/coloring.hpp"
#include "lll/solvers/rainbow.hpp"

namespace lll {

// A verdict operation declined because its criterion does not hold.
class CriterionRefused : public LllError {
public:
    using LllError::LllError;
};

struct Verdict {
    std::string name;
    double empirical = 0.0;
    double bound = 0.0;
    double se = 0.0;
    bool pass = true;
};

// {op, instance, params, runs, verdicts:[{name, empirical, bound, se, pass}]}
struct AnalysisReport {
    std::string op;
    std::string instance;
    nlohmann::json params = nlohmann::json::object();
    long long runs = 0;
    std::vector<Verdict> verdicts;
    nlohmann::json extra = nlohmann::json::object();

    bool pass() const;
    std::size_t failures() const;
    // empirical <= bound + slack * se
    void add(std::string name, double empirical, double bound, double se, double slack = 4.0);
    nlohmann::json to_json() const;
};

inline constexpr double kSeSlack = 4.0;
inline constexpr long long kBlock = 1024;

// Runs are cut into blocks of kBlock; each block fills its own accumulator
// and blocks are merged in index order, so the result does not depend on
// the thread count. Run r gets seed Rng::stream_seed(master, r).
template <class Acc>
Acc monte_carlo(long long runs, int threads, std::uint64_t master, const Acc& zero,
                const std::function<void(long long run, std::uint64_t seed, Acc& acc)>& body,
                const std::function<void(Acc& into, const Acc& from)>& merge) {
    if (runs <= 0) throw LllError("runs must be positive");
    const long long blocks = (runs + kBlock - 1) / kBlock;
    std::vector<Acc> parts(static_cast<std::size_t>(blocks), zero);
    auto work = [&](long long b) {
        const long long hi = std::min(runs, (b + 1) * kBlock);
        for (long long r = b * kBlock; r < hi; ++r) body(r, Rng::stream_seed(master, static_cast<std::uint64_t>(r)), parts[b]);
    };
    threads = std::max(1, std::min<int>(threads, static_cast<int>(blocks)));
    if (threads == 1) {
        for (long long b = 0; b < blocks; ++b) work(b);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                for (long long b = t; b < blocks; b += threads) work(b);
            });
        for (auto& th : pool) th.join();
    }
    Acc total = zero;
    for (const auto& p : parts) merge(total, p);
    return total;
}

struct McOptions {
    long long runs = 10000;
    std::uint64_t seed = 1;
    int threads = 1;
    long long max_steps = 1'000'000;
};

// Wilson score interval for k successes in n trials.
std::pair<double, double> wilson_interval(long long k, long long n, double z = 1.96);
double proportion_se(long long k, long long n);

struct OracleTables {
    StateSpace space;
    std::vector<char> flawless;
    double mu_flawless = 0.0;
    std::vector<double> mu_lll;  // mu conditioned on flawless, zero elsewhere
    std::vector<double> charges;
    std::optional<ShearerReport> shearer;  // singletons, when m <= 25

    bool has_flawless() const { return mu_flawless > 0.0; }
};

OracleTables build_oracle(const SearchProblem& problem, std::size_t cap = 1'000'000);

// Sum over independent subsets of all flaws of prod psi.
double independence_total(const DependencyGraph& g, const std::vector<double>& psi);
// zeta_i over Ind(Gamma(i)).
std::vector<double> neighborhood_zeta(const DependencyGraph& g, const std::vector<double>& psi);
// Smallest psi with gamma_i zeta_i(psi) <= psi_i, by fixed-point iteration
// from psi = gamma; nullopt when the iteration diverges.
std::optional<std::vector<double>> minimal_cluster_weights(const std::vector<double>& gamma, const DependencyGraph& g,
                                                           int max_iter = 10000);

// Base problem plus one extra flaw E (index m) adjacent to e.neighbors.
class ExtendedProblem : public SearchProblem {
public:
    ExtendedProblem(const SearchProblem& base, EventExtension e);

    std::string name() const override { return base_.name() + "+E"; }
    int flaw_count() const override { return base_.flaw_count() + 1; }
    bool is_present(int i, const State& s) const override;
    State sample_action(int i, const State& s, Rng& rng) const override;
    std::vector<Transition> actions(int i, const State& s) const override;
    bool adjacent(int i, int j) const override;
    double weight(const State& s) const override { return base_.weight(s); }
    State sample_initial(Rng& rng) const override { return base_.sample_initial(rng); }
    std::vector<Transition> initial_distribution() const override { return base_.initial_distribution(); }
    double init_ratio() const override { return base_.init_ratio(); }
    std::optional<std::vector<State>> enumerate_states() const override { return base_.enumerate_states(); }

private:
    const SearchProblem& base_;
    EventExtension e_;
    std::vector<char> near_;
};

// Labelled space Omega x {0,1}^m: flaw i' = f_i and Y_i = 1; addressing it
// addresses f_i and redraws Y_i ~ Bernoulli(p_i). State = base state then m bits.
class LabeledProblem : public SearchProblem {
public:
    LabeledProblem(const SearchProblem& base, std::vector<double> p);

    std::string name() const override { return base_.name() + "-labeled"; }
    int flaw_count() const override { return base_.flaw_count(); }
    bool is_present(int i, const State& s) const override;
    State sample_action(int i, const State& s, Rng& rng) const override;
    std::vector<Transition> actions(int i, const State& s) const override;
    bool adjacent(int i, int j) const override { return base_.adjacent(i, j); }
    std::vector<int> neighbors(int i) const override { return base_.neighbors(i); }
    double weight(const State& s) const override;
    State sample_initial(Rng& rng) const override;
    std::optional<std::vector<State>> enumerate_states() const override;

    State base_state(const State& s) const;
    const std::vector<double>& p() const { return p_; }

private:
    const SearchProblem& base_;
    std::vector<double> p_;
    std::size_t width_ = 0;
};

// Only the flaws in `core` (reindexed 0..|core|-1) are addressed.
class RestrictedProblem : public SearchProblem {
public:
    RestrictedProblem(const SearchProblem& base, std::vector<int> core);

    std::string name() const override { return base_.name() + "-core"; }
    int flaw_count() const override { return static_cast<int>(core_.size()); }
    bool is_present(int i, const State& s) const override { return base_.is_present(core_[i], s); }
    State sample_action(int i, const State& s, Rng& rng) const override {
        return base_.sample_action(core_[i], s, rng);
    }
    std::vector<Transition> actions(int i, const State& s) const override { return base_.actions(core_[i], s); }
    bool adjacent(int i, int j) const override { return base_.adjacent(core_[i], core_[j]); }
    double weight(const State& s) const override { return base_.weight(s); }
    State sample_initial(Rng& rng) const override { return base_.sample_initial(rng); }
    std::vector<Transition> initial_distribution() const override { return base_.initial_distribution(); }
    double init_ratio() const override { return base_.init_ratio(); }
    std::optional<std::vector<State>> enumerate_states() const override { return base_.enumerate_states(); }

    const std::vector<int>& core() const { return core_; }

private:
    const SearchProblem& base_;
    std::vector<int> core_;
};

// Per-tree occurrence frequency against lambda_init * prod gamma. Refuses
// (LllError) when the problem is not commutative.
AnalysisReport check_witness_tree_lemma(const SearchProblem& problem, const FlawChoiceStrategy& strategy,
                                        const std::vector<double>& gamma, int max_tree_nodes, const McOptions& mc,
                                        bool require_commutative = true);

enum class BoundMode { cluster, shearer };

// Mean N_i against lambda_init psi_i (cluster) or lambda_init q_i/q_empty (shearer).
// zeta, when given, replaces the enumerated neighbourhood sums (closed forms).
AnalysisReport check_resample_bounds(const SearchProblem& problem, const FlawChoiceStrategy& strategy,
                                     const std::vector<double>& gamma, BoundMode mode,
                                     const std::vector<double>& psi, const McOptions& mc,
                                     const std::optional<std::vector<double>>& zeta = std::nullopt);

// Pr[E ever visited] against lambda_init gamma(E) sum_{Ind(Gamma(E))} prod psi.
AnalysisReport check_event_probability(const SearchProblem& problem, const FlawChoiceStrategy& strategy,
                                       const EventExtension& e, const std::vector<double>& psi,
                                       const McOptions& mc, bool check_commutative = true);
// Gamma(E) = all flaws, the always-commutative default.
std::vector<int> all_flaws(const SearchProblem& problem);

// Empirical output distribution: pointwise nu <= lambda_init Z mu and Renyi
// entropy (2 and infinity) against the entropy bound.
AnalysisReport output_distribution(const SearchProblem& problem, const FlawChoiceStrategy& strategy,
                                   const std::vector<double>& psi, const McOptions& mc);

struct PartialAvoidanceConfig {
    std::vector<double> psi;
    std::vector<double> gamma;
    std::vector<double> zeta;  // empty: enumerate over Gamma(i)

    // p_i = min{1, psi_i / (zeta_i gamma_i)}
    std::vector<double> probabilities() const;
};

AnalysisReport partial_avoidance(const SearchProblem& problem, const FlawChoiceStrategy& strategy,
                                 PartialAvoidanceConfig cfg, const McOptions& mc);

// Core-truncated run: address only `core`; failure = a non-core flaw present
// at the end. mu_f gives mu(f_i) for every flaw (oracle when omitted).
AnalysisReport run_core_truncated(const SearchProblem& problem, const FlawChoiceStrategy& strategy,
                                  const std::vector<int>& core, const std::vector<double>& gamma,
                                  const std::vector<double>& psi, const McOptions& mc,
                                  const std::optional<std::vector<double>>& mu_f = std::nullopt);

// Matchings: E[W(M)] against (1 + 3 lambda / 2)^2 / (2n - 1) sum W(e).
AnalysisReport weight_analysis(const RainbowMatching& problem, const std::vector<double>& edge_weight,
                               const McOptions& mc);
// Colourings: E[W_v] against r_v a_v E_nu[W_v] for each weight term.
AnalysisReport weight_analysis(const VertexColoringGreedy& problem, const ColoringWeightSpec& spec,
                               const McOptions& mc);

struct RainbowPartialResult {
    double alpha = 0.0;
    double mean_size = 0.0;
    double se = 0.0;
    double finite_bound = 0.0;      // n - |P| max(0, gamma zeta - alpha)
    double asymptotic_bound = 0.0;  // n min(1, 0.94 (2/lambda)^{1/3} - 1)
    AnalysisReport report;
};

// alpha = (1/((2n-1)(lambda n - 1))) ((2n-3)/(4(lambda n - 1)))^{1/3} - 1).
double rainbow_partial_alpha(int n, double lambda);
// Labelled run, then one edge (the lower-indexed) deleted per surviving conflict pair.
std::vector<int> rainbow_partial_once(const RainbowMatching& problem, double alpha, std::uint64_t seed,
                                      long long max_steps = 1'000'000);
RainbowPartialResult rainbow_partial(const RainbowMatching& problem, const McOptions& mc,
                                     std::optional<double> lambda = std::nullopt);

}  // namespace lll

#include "lll/analysis.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "lll/witness.hpp"

namespace lll {

bool AnalysisReport::pass() const { return failures() == 0; }

std::size_t AnalysisReport::failures() const {
    std::size_t n = 0;
    for (const auto& v : verdicts) n += !v.pass;
    return n;
}

void AnalysisReport::add(std::string name, double empirical, double bound, double se, double slack) {
    verdicts.push_back({std::move(name), empirical, bound, se, empirical <= bound + slack * se + kBoundaryTol});
}

nlohmann::json AnalysisReport::to_json() const {
    nlohmann::json j;
    j["op"] = op;
    j["instance"] = instance;
    j["params"] = params;
    j["runs"] = runs;
    j["pass"] = pass();
    auto& arr = j["verdicts"] = nlohmann::json::array();
    for (const auto& v : verdicts)
        arr.push_back({{"name", v.name}, {"empirical", v.empirical}, {"bound", v.bound}, {"se", v.se}, {"pass", v.pass}});
    if (!extra.empty()) j["extra"] = extra;
    return j;
}

std::pair<double, double> wilson_interval(long long k, long long n, double z) {
    if (n <= 0) return {0.0, 1.0};
    const double p = static_cast<double>(k) / n, z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

double proportion_se(long long k, long long n) {
    if (n <= 0) return 0.0;
    const double p = static_cast<double>(k) / n;
    return std::sqrt(p * (1.0 - p) / n);
}

namespace {

struct Moments {
    long double sum = 0.0L;
    long double sq = 0.0L;
    long long n = 0;

    void push(double x) {
        sum += x;
        sq += static_cast<long double>(x) * x;
        ++n;
    }
    void merge(const Moments& o) {
        sum += o.sum;
        sq += o.sq;
        n += o.n;
    }
    double mean() const { return n ? static_cast<double>(sum / n) : 0.0; }
    double se() const {
        if (n < 2) return 0.0;
        long double m = sum / n;
        long double var = (sq / n - m * m) * n / (n - 1);
        return var > 0 ? static_cast<double>(std::sqrt(var / n)) : 0.0;
    }
};

double lambda_init(const SearchProblem& p) {
    auto all = p.enumerate_states();
    if (all && all->size() <= 1'000'000) return enumerate_space(p).init_ratio;
    return p.init_ratio();
}

RunOptions options_for(const McOptions& mc) {
    RunOptions o;
    o.max_steps = mc.max_steps;
    return o;
}

void check_gamma(const SearchProblem& p, const std::vector<double>& gamma) {
    if (static_cast<int>(gamma.size()) != p.flaw_count()) throw LllError("dimension mismatch: gamma");
}

nlohmann::json vec_json(const std::vector<double>& v) { return nlohmann::json(v); }

}  // namespace

OracleTables build_oracle(const SearchProblem& problem, std::size_t cap) {
    OracleTables t;
    t.space = enumerate_space(problem, cap);
    const auto n = t.space.size();
    t.flawless.assign(n, 0);
    t.mu_lll.assign(n, 0.0);
    for (std::size_t k = 0; k < n; ++k)
        if (problem.present_flaws(t.space.states[k]).empty()) {
            t.flawless[k] = 1;
            t.mu_flawless += t.space.mu[k];
        }
    if (t.mu_flawless > 0.0)
        for (std::size_t k = 0; k < n; ++k)
            if (t.flawless[k]) t.mu_lll[k] = t.space.mu[k] / t.mu_flawless;
    for (int i = 0; i < problem.flaw_count(); ++i) t.charges.push_back(charge(problem, t.space, i));
    if (problem.flaw_count() <= 25)
        t.shearer = shearer_polynomials(t.charges, DependencyGraph::from_problem(problem), ShearerFamily::singletons);
    return t;
}

double independence_total(const DependencyGraph& g, const std::vector<double>& psi) {
    std::vector<int> all(static_cast<std::size_t>(g.size()));
    for (int i = 0; i < g.size(); ++i) all[i] = i;
    return independence_sum(g, all, psi);
}

std::vector<double> neighborhood_zeta(const DependencyGraph& g, const std::vector<double>& psi) {
    std::vector<double> z;
    for (int i = 0; i < g.size(); ++i) z.push_back(independence_sum(g, g.neighbors(i), psi));
    return z;
}

std::optional<std::vector<double>> minimal_cluster_weights(const std::vector<double>& gamma, const DependencyGraph& g,
                                                           int max_iter) {
    std::vector<double> psi = gamma;
    for (auto& p : psi) p = std::max(p, 1e-300);
    for (int it = 0; it < max_iter; ++it) {
        auto z = neighborhood_zeta(g, psi);
        double change = 0.0;
        for (std::size_t i = 0; i < psi.size(); ++i) {
            double next = std::max(gamma[i] * z[i], 1e-300);
            change = std::max(change, std::fabs(next - psi[i]) / psi[i]);
            psi[i] = next;
            if (!std::isfinite(next) || next > 1e12) return std::nullopt;
        }
        if (change < 1e-14) {
            // a hair of slack so the non-strict check is not decided by rounding
            for (auto& p : psi) p *= 1.0 + 1e-9;
            return psi;
        }
    }
    return std::nullopt;
}

ExtendedProblem::ExtendedProblem(const SearchProblem& base, EventExtension e) : base_(base), e_(std::move(e)) {
    near_.assign(static_cast<std::size_t>(base_.flaw_count()), 0);
    for (int j : e_.neighbors) {
        if (j < 0 || j >= base_.flaw_count()) throw LllError("event neighbor out of range");
        near_[j] = 1;
    }
}

bool ExtendedProblem::is_present(int i, const State& s) const {
    return i == base_.flaw_count() ? e_.contains(s) : base_.is_present(i, s);
}

State ExtendedProblem::sample_action(int i, const State& s, Rng& rng) const {
    if (i != base_.flaw_count()) return base_.sample_action(i, s, rng);
    if (e_.sample) return e_.sample(s, rng);
    auto tr = e_.actions(s);
    double u = rng.uniform(), acc = 0.0;
    for (const auto& t : tr)
        if ((acc += t.prob) > u) return t.next;
    return tr.back().next;
}

std::vector<Transition> ExtendedProblem::actions(int i, const State& s) const {
    return i == base_.flaw_count() ? e_.actions(s) : base_.actions(i, s);
}

bool ExtendedProblem::adjacent(int i, int j) const {
    const int m = base_.flaw_count();
    if (i == m && j == m) return true;
    if (i == m) return near_[j];
    if (j == m) return near_[i];
    return base_.adjacent(i, j);
}

namespace {

// p in {0, 1} consumes no randomness, so p = 1 replays the base run exactly
int draw_label(double p, Rng& rng) {
    if (p >= 1.0) return 1;
    if (p <= 0.0) return 0;
    return rng.bernoulli(p) ? 1 : 0;
}

}  // namespace

LabeledProblem::LabeledProblem(const SearchProblem& base, std::vector<double> p) : base_(base), p_(std::move(p)) {
    if (static_cast<int>(p_.size()) != base_.flaw_count()) throw LllError("dimension mismatch: label probabilities");
    for (double x : p_)
        if (!(x >= 0.0 && x <= 1.0)) throw LllError("label probability outside [0,1]");
    Rng probe(0);
    width_ = base_.sample_initial(probe).size();
}

State LabeledProblem::base_state(const State& s) const { return State(s.begin(), s.begin() + static_cast<long>(width_)); }

bool LabeledProblem::is_present(int i, const State& s) const {
    return s[width_ + static_cast<std::size_t>(i)] == 1 && base_.is_present(i, base_state(s));
}

State LabeledProblem::sample_action(int i, const State& s, Rng& rng) const {
    State next = base_.sample_action(i, base_state(s), rng);
    next.insert(next.end(), s.begin() + static_cast<long>(width_), s.end());
    next[width_ + static_cast<std::size_t>(i)] = draw_label(p_[i], rng);
    return next;
}

std::vector<Transition> LabeledProblem::actions(int i, const State& s) const {
    std::vector<Transition> out;
    for (const auto& t : base_.actions(i, base_state(s))) {
        State next = t.next;
        next.insert(next.end(), s.begin() + static_cast<long>(width_), s.end());
        for (int y : {1, 0}) {
            double py = y ? p_[i] : 1.0 - p_[i];
            if (py == 0.0) continue;
            next[width_ + static_cast<std::size_t>(i)] = y;
            out.push_back({next, t.prob * py});
        }
    }
    return out;
}

double LabeledProblem::weight(const State& s) const {
    double w = base_.weight(base_state(s));
    for (std::size_t i = 0; i < p_.size(); ++i) w *= s[width_ + i] ? p_[i] : 1.0 - p_[i];
    return w;
}

State LabeledProblem::sample_initial(Rng& rng) const {
    State s = base_.sample_initial(rng);
    for (double p : p_) s.push_back(draw_label(p, rng));
    return s;
}

std::optional<std::vector<State>> LabeledProblem::enumerate_states() const {
    auto base = base_.enumerate_states();
    if (!base || p_.size() > 20 || base->size() * (std::size_t{1} << p_.size()) > 2'000'000) return std::nullopt;
    std::vector<State> out;
    for (const auto& b : *base)
        for (std::uint32_t mask = 0; mask < (1u << p_.size()); ++mask) {
            State s = b;
            for (std::size_t i = 0; i < p_.size(); ++i) s.push_back((mask >> i) & 1u);
            out.push_back(std::move(s));
        }
    return out;
}

RestrictedProblem::RestrictedProblem(const SearchProblem& base, std::vector<int> core)
    : base_(base), core_(std::move(core)) {
    std::sort(core_.begin(), core_.end());
    core_.erase(std::unique(core_.begin(), core_.end()), core_.end());
    for (int i : core_)
        if (i < 0 || i >= base_.flaw_count()) throw LllError("core flaw out of range");
}

std::vector<int> all_flaws(const SearchProblem& problem) {
    std::vector<int> out(static_cast<std::size_t>(problem.flaw_count()));
    for (int i = 0; i < problem.flaw_count(); ++i) out[i] = i;
    return out;
}

AnalysisReport check_witness_tree_lemma(const SearchProblem& problem, const FlawChoiceStrategy& strategy,
                                        const std::vector<double>& gamma, int max_tree_nodes, const McOptions& mc,
                                        bool require_commutative) {
    check_gamma(problem, gamma);
    if (require_commutative && !check_commutativity(problem).commutative)
        throw LllError("problem is not commutative: the witness tree bound does not apply to it");
    const auto g = DependencyGraph::from_problem(problem);
    const double lambda = lambda_init(problem);

    using Counts = std::map<std::string, long long>;
    RunOptions opt = options_for(mc);
    opt.record_trajectory = true;
    std::map<std::string, double> weight;
    auto counts = monte_carlo<Counts>(
        mc.runs, mc.threads, mc.seed, {},
        [&](long long, std::uint64_t seed, Counts& acc) {
            auto r = run(problem, strategy, seed, opt);
            auto w = r.trajectory->witness_sequence();
            for (std::size_t k = 1; k <= w.size(); ++k) {
                auto t = build_witness_tree(w, k, g);
                if (static_cast<int>(t.size()) <= max_tree_nodes) ++acc[t.canonical()];
            }
        },
        [](Counts& into, const Counts& from) {
            for (const auto& [k, v] : from) into[k] += v;
        });

    // universe: every enumerated tree plus everything observed
    std::map<std::string, double> universe;
    std::map<std::string, std::vector<std::vector<int>>> level_of;
    for (int root = 0; root < problem.flaw_count(); ++root)
        enumerate_witness_trees(root, g, gamma, max_tree_nodes, [&](const WeightedTree& t) {
            std::vector<int> w;
            for (const auto& l : t.levels) w.insert(w.end(), l.begin(), l.end());
            std::reverse(w.begin(), w.end());
            auto tree = sequence_to_tree(w, g);
            universe[tree.canonical()] = lambda * t.weight;
        });
    for (const auto& [key, c] : counts) {
        (void)c;
        if (universe.count(key)) continue;
        // labels are the digits between brackets
        double prod = lambda;
        std::string num;
        for (char ch : key) {
            if (std::isdigit(static_cast<unsigned char>(ch))) {
                num += ch;
            } else if (!num.empty()) {
                prod *= gamma.at(static_cast<std::size_t>(std::stoi(num)));
                num.clear();
            }
        }
        universe[key] = prod;
    }

    AnalysisReport rep;
    rep.op = "witness";
    rep.instance = problem.name();
    rep.runs = mc.runs;
    rep.params = {{"max_tree_nodes", max_tree_nodes}, {"seed", mc.seed}, {"lambda_init", lambda},
                  {"strategy", strategy.name()}};
    long long observed = 0;
    for (const auto& [key, bound] : universe) {
        auto it = counts.find(key);
        long long c = it == counts.end() ? 0 : it->second;
        observed += c > 0;
        rep.add(key, static_cast<double>(c) / mc.runs, bound, proportion_se(c, mc.runs));
    }
    rep.extra = {{"trees", universe.size()}, {"observed_trees", observed}};
    return rep;
}

AnalysisReport check_resample_bounds(const SearchProblem& problem, const FlawChoiceStrategy& strategy,
                                     const std::vector<double>& gamma, BoundMode mode,
                                     const std::vector<double>& psi, const McOptions& mc,
                                     const std::optional<std::vector<double>>& zeta) {
    check_gamma(problem, gamma);
    const int m = problem.flaw_count();
    const auto g = DependencyGraph::from_problem(problem);
    const double lambda = lambda_init(problem);
    std::vector<double> bound(static_cast<std::size_t>(m));
    AnalysisReport rep;
    rep.op = "resamples";
    rep.instance = problem.name();
    rep.runs = mc.runs;
    if (mode == BoundMode::cluster) {
        auto z = zeta ? *zeta : neighborhood_zeta(g, psi);
        auto crit = cluster_expansion_from_zeta(gamma, z, psi);
        if (!crit.pass) throw CriterionRefused("cluster expansion condition fails: no resample bound to check");
        for (int i = 0; i < m; ++i) bound[i] = lambda * psi[i];
        rep.params["mode"] = "cluster";
        rep.params["max_ratio"] = crit.max_ratio;
    } else {
        auto sh = shearer_polynomials(gamma, g, ShearerFamily::singletons);
        if (!sh.pass) throw CriterionRefused("Shearer condition fails: no resample bound to check");
        for (int i = 0; i < m; ++i) bound[i] = lambda * sh.ratios[i];
        rep.params["mode"] = "shearer";
        rep.params["q_empty"] = sh.q_empty;
    }
    rep.params["lambda_init"] = lambda;
    rep.params["seed"] = mc.seed;

    struct Acc {
        std::vector<Moments> per;
        Moments total;
        long long censored = 0;
    };
    Acc zero{std::vector<Moments>(static_cast<std::size_t>(m)), {}, 0};
    const auto opt = options_for(mc);
    auto acc = monte_carlo<Acc>(
        mc.runs, mc.threads, mc.seed, zero,
        [&](long long, std::uint64_t seed, Acc& a) {
            auto r = run(problem, strategy, seed, opt);
            for (int i = 0; i < m; ++i) a.per[i].push(static_cast<double>(r.resample_counts[i]));
            a.total.push(static_cast<double>(r.steps));
            a.censored += !r.terminated;
        },
        [](Acc& into, const Acc& from) {
            for (std::size_t i = 0; i < into.per.size(); ++i) into.per[i].merge(from.per[i]);
            into.total.merge(from.total);
            into.censored += from.censored;
        });
    double sum_bound = 0.0;
    for (int i = 0; i < m; ++i) {
        rep.add("N_" + std::to_string(i), acc.per[i].mean(), bound[i], acc.per[i].se());
        sum_bound += bound[i];
    }
    rep.add("total_steps", acc.total.mean(), sum_bound, acc.total.se());
    rep.extra = {{"censored", acc.censored}};
    return rep;
}

AnalysisReport check_event_probability(const SearchProblem& problem, const FlawChoiceStrategy& strategy,
                                       const EventExtension& e, const std::vector<double>& psi,
                                       const McOptions& mc, bool check_commutative) {
    ExtendedProblem ext(problem, e);
    if (check_commutative && !check_commutativity(ext).commutative)
        throw LllError("extension is not commutative: enlarge Gamma(E)");
    const auto space = enumerate_space(problem);
    const double gamma_e = event_charge(problem, space, e);
    const auto g = DependencyGraph::from_problem(problem);
    std::vector<int> nb = e.neighbors;
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    const double z = independence_sum(g, nb, psi);
    const double lambda = space.init_ratio;

    RunOptions base = options_for(mc);
    auto hits = monte_carlo<long long>(
        mc.runs, mc.threads, mc.seed, 0,
        [&](long long, std::uint64_t seed, long long& acc) {
            bool hit = false;
            RunOptions o = base;
            o.on_state = [&](const State& s, long long) {
                if (!hit && e.contains(s)) hit = true;
            };
            run(problem, strategy, seed, o);
            acc += hit;
        },
        [](long long& into, const long long& from) { into += from; });

    AnalysisReport rep;
    rep.op = "event";
    rep.instance = problem.name();
    rep.runs = mc.runs;
    rep.params = {{"gamma_E", gamma_e}, {"zeta_E", z}, {"lambda_init", lambda}, {"seed", mc.seed}};
    auto [lo, hi] = wilson_interval(hits, mc.runs);
    rep.add("Pr[E]", static_cast<double>(hits) / mc.runs, lambda * gamma_e * z, proportion_se(hits, mc.runs));
    rep.extra = {{"wilson", {lo, hi}}};
    return rep;
}

AnalysisReport output_distribution(const SearchProblem& problem, const FlawChoiceStrategy& strategy,
                                   const std::vector<double>& psi, const McOptions& mc) {
    auto oracle = build_oracle(problem);
    const auto& space = oracle.space;
    const auto g = DependencyGraph::from_problem(problem);
    auto crit = cluster_expansion_check(oracle.charges, g, psi);
    if (!crit.pass) throw CriterionRefused("cluster expansion condition fails: no distribution bound to check");
    const double lambda = space.init_ratio;
    const double z = independence_total(g, psi);

    struct Acc {
        std::map<State, long long> counts;
        long long censored = 0;
    };
    const auto opt = options_for(mc);
    auto acc = monte_carlo<Acc>(
        mc.runs, mc.threads, mc.seed, {},
        [&](long long, std::uint64_t seed, Acc& a) {
            auto r = run(problem, strategy, seed, opt);
            if (r.terminated) ++a.counts[r.final_state];
            else ++a.censored;
        },
        [](Acc& into, const Acc& from) {
            for (const auto& [s, c] : from.counts) into.counts[s] += c;
            into.censored += from.censored;
        });

    AnalysisReport rep;
    rep.op = "distribution";
    rep.instance = problem.name();
    rep.runs = mc.runs;
    rep.params = {{"lambda_init", lambda}, {"Z", z}, {"seed", mc.seed}};
    const double n = static_cast<double>(mc.runs);
    for (std::size_t k = 0; k < space.size(); ++k) {
        auto it = acc.counts.find(space.states[k]);
        long long c = it == acc.counts.end() ? 0 : it->second;
        if (!oracle.flawless[k] && c == 0) continue;
        rep.add("nu" + state_to_string(space.states[k]), c / n, lambda * z * space.mu[k], proportion_se(c, mc.runs));
    }

    double mu2 = 0.0, mu_max = 0.0;
    for (double p : space.mu) {
        mu2 += p * p;
        mu_max = std::max(mu_max, p);
    }
    const double h2_mu = -std::log(mu2), hinf_mu = -std::log(mu_max);
    const double b2 = h2_mu - 2.0 * std::log(lambda * z);
    const double binf = hinf_mu - std::log(lambda * z);

    long long cmax = 0;
    double s2 = 0.0, s3 = 0.0, coll = 0.0;
    for (const auto& [s, c] : acc.counts) {
        cmax = std::max(cmax, c);
        double p = c / n;
        s2 += p * p;
        s3 += p * p * p;
        coll += static_cast<double>(c) * (c - 1);
    }
    const double coll_est = n > 1 ? coll / (n * (n - 1)) : s2;
    const double coll_se = 2.0 * std::sqrt(std::max(0.0, s3 - s2 * s2) / n) + 1.0 / n;
    rep.add("H_inf", cmax / n, std::exp(-binf), proportion_se(cmax, mc.runs));
    rep.add("H_2", coll_est, std::exp(-b2), coll_se);
    rep.extra = {{"support", acc.counts.size()},
                 {"censored", acc.censored},
                 {"H_inf_plugin", cmax ? -std::log(cmax / n) : 0.0},
                 {"H_2_plugin", s2 > 0 ? -std::log(s2) : 0.0},
                 {"H_inf_bound", binf},
                 {"H_2_bound", b2},
                 {"support_lower_bound", std::exp(binf)}};
    return rep;
}

std::vector<double> PartialAvoidanceConfig::probabilities() const {
    std::vector<double> p;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        double d = zeta.at(i) * gamma.at(i);
        p.push_back(d <= 0.0 ? 1.0 : std::min(1.0, psi[i] / d));
    }
    return p;
}

AnalysisReport partial_avoidance(const SearchProblem& problem, const FlawChoiceStrategy& strategy,
                                 PartialAvoidanceConfig cfg, const McOptions& mc) {
    const int m = problem.flaw_count();
    check_gamma(problem, cfg.gamma);
    if (static_cast<int>(cfg.psi.size()) != m) throw LllError("dimension mismatch: psi");
    for (double p : cfg.psi)
        if (!(p > 0.0)) throw LllError("weights must be positive");
    if (!problem.initial_distribution().empty() || std::fabs(lambda_init(problem) - 1.0) > 1e-9)
        throw LllError("partial avoidance needs theta = mu (lambda_init = 1)");
    const auto g = DependencyGraph::from_problem(problem);
    if (cfg.zeta.empty()) cfg.zeta = neighborhood_zeta(g, cfg.psi);
    const auto p = cfg.probabilities();
    LabeledProblem labeled(problem, p);

    struct Acc {
        std::vector<long long> present;
        std::vector<Moments> addressed;
        long long censored = 0;
    };
    Acc zero{std::vector<long long>(static_cast<std::size_t>(m), 0), std::vector<Moments>(static_cast<std::size_t>(m)), 0};
    const auto opt = options_for(mc);
    auto acc = monte_carlo<Acc>(
        mc.runs, mc.threads, mc.seed, zero,
        [&](long long, std::uint64_t seed, Acc& a) {
            auto r = run(labeled, strategy, seed, opt);
            a.censored += !r.terminated;
            State out = labeled.base_state(r.final_state);
            for (int i : problem.present_flaws(out)) ++a.present[i];
            for (int i = 0; i < m; ++i) a.addressed[i].push(static_cast<double>(r.resample_counts[i]));
        },
        [](Acc& into, const Acc& from) {
            for (std::size_t i = 0; i < into.present.size(); ++i) {
                into.present[i] += from.present[i];
                into.addressed[i].merge(from.addressed[i]);
            }
            into.censored += from.censored;
        });

    AnalysisReport rep;
    rep.op = "partial";
    rep.instance = problem.name();
    rep.runs = mc.runs;
    rep.params = {{"psi", vec_json(cfg.psi)}, {"p", vec_json(p)}, {"seed", mc.seed}};
    for (int i = 0; i < m; ++i) {
        double b = std::max(0.0, cfg.gamma[i] * cfg.zeta[i] - cfg.psi[i]);
        rep.add("present_" + std::to_string(i), static_cast<double>(acc.present[i]) / mc.runs, b,
                proportion_se(acc.present[i], mc.runs));
    }
    for (int i = 0; i < m; ++i)
        rep.add("addressed_" + std::to_string(i), acc.addressed[i].mean(), cfg.psi[i], acc.addressed[i].se());
    rep.extra = {{"censored", acc.censored}};
    return rep;
}

AnalysisReport run_core_truncated(const SearchProblem& problem, const FlawChoiceStrategy& strategy,
                                  const std::vector<int>& core, const std::vector<double>& gamma,
                                  const std::vector<double>& psi, const McOptions& mc,
                                  const std::optional<std::vector<double>>& mu_f) {
    const int m = problem.flaw_count();
    check_gamma(problem, gamma);
    if (static_cast<int>(psi.size()) != m) throw LllError("dimension mismatch: psi");
    RestrictedProblem restricted(problem, core);
    const auto& in_core_list = restricted.core();
    std::vector<char> in_core(static_cast<std::size_t>(m), 0);
    for (int i : in_core_list) in_core[i] = 1;
    const auto g = DependencyGraph::from_problem(problem);

    for (int i = 0; i < m; ++i) {
        std::vector<int> nb;
        for (int j : g.neighbors(i))
            if (in_core[j]) nb.push_back(j);
        if (gamma[i] * independence_sum(g, nb, psi) > psi[i] + kBoundaryTol)
            throw CriterionRefused("restricted criterion fails for flaw " + std::to_string(i));
    }
    std::vector<double> mu = mu_f ? *mu_f : std::vector<double>{};
    if (mu.empty()) {
        auto space = enumerate_space(problem);
        for (int i = 0; i < m; ++i) mu.push_back(measure(space, [&](const State& s) { return problem.is_present(i, s); }));
    }
    if (static_cast<int>(mu.size()) != m) throw LllError("dimension mismatch: mu");
    double fail_bound = 0.0;
    for (int i = 0; i < m; ++i)
        if (!in_core[i]) fail_bound += mu[i] * independence_sum(g, g.neighbors(i), psi);
    double step_bound = 0.0;
    for (int i : in_core_list) step_bound += psi[i];
    const double lambda = lambda_init(problem);

    struct Acc {
        long long failures = 0;
        long long censored = 0;
        Moments steps;
    };
    const auto opt = options_for(mc);
    auto acc = monte_carlo<Acc>(
        mc.runs, mc.threads, mc.seed, {},
        [&](long long, std::uint64_t seed, Acc& a) {
            auto r = run(restricted, strategy, seed, opt);
            a.steps.push(static_cast<double>(r.steps));
            if (!r.terminated) {
                ++a.censored;
                ++a.failures;
                return;
            }
            if (!problem.present_flaws(r.final_state).empty()) ++a.failures;
        },
        [](Acc& into, const Acc& from) {
            into.failures += from.failures;
            into.censored += from.censored;
            into.steps.merge(from.steps);
        });

    AnalysisReport rep;
    rep.op = "core";
    rep.instance = problem.name();
    rep.runs = mc.runs;
    rep.params = {{"core_size", in_core_list.size()}, {"lambda_init", lambda}, {"seed", mc.seed}};
    rep.add("failure", static_cast<double>(acc.failures) / mc.runs, fail_bound, proportion_se(acc.failures, mc.runs));
    rep.add("steps", acc.steps.mean(), lambda * step_bound, acc.steps.se());
    rep.extra = {{"censored", acc.censored}};
    return rep;
}

AnalysisReport weight_analysis(const RainbowMatching& problem, const std::vector<double>& edge_weight,
                               const McOptions& mc) {
    const auto& k = problem.clique();
    if (static_cast<int>(edge_weight.size()) != k.edge_count()) throw LllError("dimension mismatch: edge weights");
    double total = 0.0;
    for (double w : edge_weight) {
        if (w < 0.0) throw LllError("edge weights must be nonnegative");
        total += w;
    }
    const int n = k.half();
    const double lambda = k.lambda();
    const double psi = problem.default_psi();
    if (problem.flaw_count() > 0) {
        auto crit = cluster_expansion_from_zeta({problem.declared_charge()}, {problem.zeta_closed_form(psi)}, {psi});
        if (!crit.pass) throw CriterionRefused("cluster expansion condition fails: no weight bound to check");
    }
    const double asymptotic = std::pow(1.0 + 1.5 * lambda, 2) / (2.0 * n - 1) * total;
    const double finite =
        std::pow(1.0 + (2.0 * n - 1) * std::max(0.0, lambda * n - 1) * psi, 2) / (2.0 * n - 1) * total;

    struct Acc {
        Moments w;
        long long censored = 0;
    };
    const auto opt = options_for(mc);
    auto acc = monte_carlo<Acc>(
        mc.runs, mc.threads, mc.seed, {},
        [&](long long, std::uint64_t seed, Acc& a) {
            auto r = run(problem, FlawChoiceStrategy::lowest_index(), seed, opt);
            if (!r.terminated) {
                ++a.censored;
                return;
            }
            a.w.push(problem.matching_weight(r.final_state, edge_weight));
        },
        [](Acc& into, const Acc& from) {
            into.w.merge(from.w);
            into.censored += from.censored;
        });

    AnalysisReport rep;
    rep.op = "weight";
    rep.instance = problem.name();
    rep.runs = mc.runs;
    rep.params = {{"lambda", lambda}, {"n", n}, {"psi", psi}, {"seed", mc.seed}};
    rep.add("E[W(M)]", acc.w.mean(), asymptotic, acc.w.se());
    rep.add("E[W(M)] finite-n", acc.w.mean(), finite, acc.w.se());
    rep.extra = {{"censored", acc.censored}, {"uniform_mean", total / (2.0 * n - 1)}};
    return rep;
}

AnalysisReport weight_analysis(const VertexColoringGreedy& problem, const ColoringWeightSpec& spec,
                               const McOptions& mc) {
    const auto& g = problem.graph();
    auto bounds = coloring_weight_bounds(g, problem.colors(), spec);
    auto strategy = problem.priority(spec.priority_edges(g));

    struct Acc {
        std::vector<Moments> w;
        long long max_events = 0;
        long long censored = 0;
    };
    Acc zero{std::vector<Moments>(spec.terms.size()), 0, 0};
    const auto opt = options_for(mc);
    auto acc = monte_carlo<Acc>(
        mc.runs, mc.threads, mc.seed, zero,
        [&](long long, std::uint64_t seed, Acc& a) {
            auto r = run(problem, strategy, seed, opt);
            if (!r.terminated) {
                ++a.censored;
                return;
            }
            a.max_events = std::max(a.max_events, g.n + 2 * r.steps);
            for (std::size_t t = 0; t < spec.terms.size(); ++t) a.w[t].push(spec.terms[t].w(r.final_state));
        },
        [](Acc& into, const Acc& from) {
            for (std::size_t t = 0; t < into.w.size(); ++t) into.w[t].merge(from.w[t]);
            into.max_events = std::max(into.max_events, from.max_events);
            into.censored += from.censored;
        });

    AnalysisReport rep;
    rep.op = "weight";
    rep.instance = problem.name();
    rep.runs = mc.runs;
    rep.params = {{"q", problem.colors()}, {"delta", g.max_degree()}, {"seed", mc.seed}};
    nlohmann::json terms = nlohmann::json::array();
    for (std::size_t t = 0; t < spec.terms.size(); ++t) {
        const auto& b = bounds[t];
        rep.add("E[W_" + std::to_string(b.center) + "]", acc.w[t].mean(), b.bound, acc.w[t].se());
        terms.push_back({{"center", b.center}, {"r", b.r}, {"a", b.a}, {"E_nu", b.e_nu}});
    }
    rep.add("recolor_events", static_cast<double>(acc.max_events), 2.0 * g.n, 0.0);
    rep.extra = {{"terms", terms}, {"censored", acc.censored}};
    return rep;
}

double rainbow_partial_alpha(int n, double lambda) {
    const double ln1 = lambda * n - 1.0;
    if (!(ln1 > 0.0)) return std::numeric_limits<double>::infinity();
    return (std::cbrt((2.0 * n - 3) / (4.0 * ln1)) - 1.0) / ((2.0 * n - 1) * ln1);
}

namespace {

double rainbow_zeta(const RainbowMatching& problem, double alpha, double lambda) {
    const int n = problem.clique().half();
    return std::pow(1.0 + (2.0 * n - 1) * std::max(0.0, lambda * n - 1) * alpha, 4);
}

std::vector<double> rainbow_label_probabilities(const RainbowMatching& problem, double alpha, double lambda) {
    const double gz = problem.declared_charge() * rainbow_zeta(problem, alpha, lambda);
    return std::vector<double>(static_cast<std::size_t>(problem.flaw_count()), gz <= 0.0 ? 1.0 : std::min(1.0, alpha / gz));
}

std::vector<int> prune_conflicts(const RainbowMatching& problem, const State& s) {
    const auto& k = problem.clique();
    auto edges = problem.matching_edges(s);
    std::set<int> removed;
    for (int i : problem.present_flaws(s)) {
        auto [a, b] = k.conflicts()[i];
        if (!removed.count(a) && !removed.count(b)) removed.insert(std::min(a, b));
    }
    std::vector<int> out;
    for (int e : edges)
        if (!removed.count(e)) out.push_back(e);
    return out;
}

}  // namespace

std::vector<int> rainbow_partial_once(const RainbowMatching& problem, double alpha, std::uint64_t seed,
                                      long long max_steps) {
    if (!(alpha > 0.0)) throw LllError("alpha must be positive");
    LabeledProblem labeled(problem, rainbow_label_probabilities(problem, alpha, problem.clique().lambda()));
    auto r = run(labeled, FlawChoiceStrategy::lowest_index(), max_steps, seed);
    return prune_conflicts(problem, labeled.base_state(r.final_state));
}

RainbowPartialResult rainbow_partial(const RainbowMatching& problem, const McOptions& mc, std::optional<double> lambda) {
    const auto& k = problem.clique();
    const int n = k.half();
    const double lam = lambda ? *lambda : k.lambda();
    if (lam < k.lambda() - 1e-12) throw LllError("lambda below the coloring's multiplicity ratio");
    RainbowPartialResult res;
    // lambda n <= 1 means no conflicts at all
    res.alpha = lam * n > 1.0 ? rainbow_partial_alpha(n, lam) : problem.default_psi();
    if (!(res.alpha > 0.0)) throw LllError("alpha <= 0: lambda too large for this n");
    const double gz = problem.declared_charge() * rainbow_zeta(problem, res.alpha, lam);
    const double per_flaw = std::max(0.0, gz - res.alpha);
    res.finite_bound = n - problem.flaw_count() * per_flaw;
    res.asymptotic_bound = n * std::min(1.0, 0.94 * std::cbrt(2.0 / lam) - 1.0);

    LabeledProblem labeled(problem, rainbow_label_probabilities(problem, res.alpha, lam));
    struct Acc {
        Moments size;
        long long censored = 0;
        long long invalid = 0;
    };
    const auto opt = options_for(mc);
    auto acc = monte_carlo<Acc>(
        mc.runs, mc.threads, mc.seed, {},
        [&](long long, std::uint64_t seed, Acc& a) {
            auto r = run(labeled, FlawChoiceStrategy::lowest_index(), seed, opt);
            a.censored += !r.terminated;
            auto kept = prune_conflicts(problem, labeled.base_state(r.final_state));
            std::set<int> colors;
            for (int e : kept) colors.insert(k.color(e));
            a.invalid += colors.size() != kept.size();
            a.size.push(static_cast<double>(kept.size()));
        },
        [](Acc& into, const Acc& from) {
            into.size.merge(from.size);
            into.censored += from.censored;
            into.invalid += from.invalid;
        });
    res.mean_size = acc.size.mean();
    res.se = acc.size.se();
    auto& rep = res.report;
    rep.op = "rainbow_partial";
    rep.instance = problem.name();
    rep.runs = mc.runs;
    rep.params = {{"n", n}, {"lambda", lam}, {"alpha", res.alpha}, {"seed", mc.seed}};
    // expected deletions n - E[S] against |P| max(0, gamma zeta - alpha)
    rep.add("deleted_edges", n - res.mean_size, n - res.finite_bound, res.se);
    rep.add("non_rainbow_outputs", static_cast<double>(acc.invalid), 0.0, 0.0);
    rep.extra = {{"mean_size", res.mean_size},
                 {"finite_bound", res.finite_bound},
                 {"asymptotic_bound", res.asymptotic_bound},
                 {"censored", acc.censored}};
    return res;
}

}  // namespace lll

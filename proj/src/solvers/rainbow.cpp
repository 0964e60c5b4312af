#include "lll/solvers/rainbow.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "lll/rng.hpp"

namespace lll {

EdgeColoredClique::EdgeColoredClique(int vertices, std::vector<int> colors) : v_(vertices), color_(std::move(colors)) {
    if (v_ < 0 || v_ % 2) throw LllError("odd vertex count");
    if (static_cast<long long>(color_.size()) != static_cast<long long>(v_) * (v_ - 1) / 2)
        throw LllError("coloring must cover every edge of the complete graph");
    row_.resize(static_cast<std::size_t>(v_));
    for (int u = 0; u < v_; ++u) {
        row_[u] = static_cast<int>(ends_.size());
        for (int w = u + 1; w < v_; ++w) ends_.push_back({u, w});
    }
    std::map<int, std::vector<int>> by_color;
    for (int e = 0; e < edge_count(); ++e) {
        if (color_[e] < 0) throw LllError("negative color");
        by_color[color_[e]].push_back(e);
    }
    for (const auto& [c, es] : by_color) {
        mult_ = std::max(mult_, static_cast<int>(es.size()));
        for (std::size_t a = 0; a < es.size(); ++a)
            for (std::size_t b = a + 1; b < es.size(); ++b) {
                auto [p, q] = ends_[es[a]];
                auto [r, s] = ends_[es[b]];
                if (p != r && p != s && q != r && q != s) conflicts_.push_back({es[a], es[b]});
            }
    }
    std::sort(conflicts_.begin(), conflicts_.end());
}

int EdgeColoredClique::edge_index(int u, int v) const {
    if (u == v || u < 0 || v < 0 || u >= v_ || v >= v_) return -1;
    if (u > v) std::swap(u, v);
    return row_[u] + (v - u - 1);
}

EdgeColoredClique random_colored_clique(int vertices, int multiplicity, std::uint64_t seed) {
    if (multiplicity < 1) throw LllError("multiplicity must be positive");
    if (vertices < 0 || vertices % 2) throw LllError("odd vertex count");
    const int m = vertices * (vertices - 1) / 2;
    std::vector<int> slots(static_cast<std::size_t>(m));
    for (int e = 0; e < m; ++e) slots[e] = e / multiplicity;
    Rng rng(seed);
    for (std::size_t i = slots.size(); i > 1; --i) std::swap(slots[i - 1], slots[rng.below(i)]);
    return EdgeColoredClique(vertices, slots);
}

EdgeColoredClique rainbow_colored_clique(int vertices) {
    if (vertices < 0 || vertices % 2) throw LllError("odd vertex count");
    std::vector<int> c(static_cast<std::size_t>(vertices * (vertices - 1) / 2));
    for (std::size_t e = 0; e < c.size(); ++e) c[e] = static_cast<int>(e);
    return EdgeColoredClique(vertices, c);
}

EdgeColoredClique parse_colored_clique(std::istream& in) {
    std::vector<std::array<long long, 3>> rows;
    std::string line;
    long long maxv = -1;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::vector<long long> nums;
        long long x;
        while (ls >> x) nums.push_back(x);
        if (!ls.eof()) throw LllError("malformed coloring line: " + line);
        if (nums.empty()) continue;
        if (nums.size() != 3 || nums[0] < 0 || nums[1] < 0 || nums[2] < 0) throw LllError("malformed coloring line: " + line);
        rows.push_back({nums[0], nums[1], nums[2]});
        maxv = std::max({maxv, nums[0], nums[1]});
    }
    const int vertices = static_cast<int>(maxv + 1);
    if (vertices < 0 || vertices % 2) throw LllError("odd vertex count");
    const long long m = static_cast<long long>(vertices) * (vertices - 1) / 2;
    if (static_cast<long long>(rows.size()) != m) throw LllError("coloring must cover every edge of the complete graph");
    std::vector<int> colors(static_cast<std::size_t>(m), -1);
    EdgeColoredClique shape = rainbow_colored_clique(vertices);
    for (const auto& r : rows) {
        int e = shape.edge_index(static_cast<int>(r[0]), static_cast<int>(r[1]));
        if (e < 0 || colors[e] >= 0) throw LllError("self-loop or repeated edge in coloring");
        colors[e] = static_cast<int>(r[2]);
    }
    return EdgeColoredClique(vertices, colors);
}

EdgeColoredClique parse_colored_clique_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw LllError("cannot open " + path);
    return parse_colored_clique(in);
}

std::string to_text(const EdgeColoredClique& k) {
    std::ostringstream os;
    for (int e = 0; e < k.edge_count(); ++e) {
        auto [u, v] = k.endpoints(e);
        os << u << ' ' << v << ' ' << k.color(e) << '\n';
    }
    return os.str();
}

RainbowMatching::RainbowMatching(EdgeColoredClique k) : k_(std::move(k)) {}

std::vector<int> RainbowMatching::vertices_of(int i) const {
    auto [e1, e2] = k_.conflicts()[i];
    auto [a, b] = k_.endpoints(e1);
    auto [c, d] = k_.endpoints(e2);
    return {a, b, c, d};
}

bool RainbowMatching::is_present(int i, const State& s) const {
    auto [e1, e2] = k_.conflicts()[i];
    auto [a, b] = k_.endpoints(e1);
    auto [c, d] = k_.endpoints(e2);
    return s[a] == b && s[c] == d;
}

bool RainbowMatching::adjacent(int i, int j) const {
    auto vi = vertices_of(i);
    auto vj = vertices_of(j);
    for (int x : vi)
        for (int y : vj)
            if (x == y) return true;
    return false;
}

namespace {

// Edges (a, partner[a]) with a < partner[a], skipping those in `skip`.
std::vector<std::pair<int, int>> free_edges(const State& m, const std::vector<std::pair<int, int>>& skip) {
    std::vector<std::pair<int, int>> out;
    for (int a = 0; a < static_cast<int>(m.size()); ++a) {
        int b = m[a];
        if (a > b) continue;
        if (std::find(skip.begin(), skip.end(), std::make_pair(a, b)) != skip.end()) continue;
        out.push_back({a, b});
    }
    return out;
}

void switch_pair(State& m, int u, int v, int x, int y) {
    m[u] = y;
    m[y] = u;
    m[v] = x;
    m[x] = v;
}

}  // namespace

State RainbowMatching::sample_action(int i, const State& s, Rng& rng) const {
    auto [e1, e2] = k_.conflicts()[i];
    std::vector<std::pair<int, int>> rest{k_.endpoints(e1), k_.endpoints(e2)};
    State m = s;
    while (!rest.empty()) {
        auto [u, v] = rest.front();
        auto pool = free_edges(m, rest);
        const std::size_t k = pool.size();
        if (k > 0) {
            auto [a, b] = pool[rng.below(k)];
            int x = a, y = b;
            if (rng.below(2)) std::swap(x, y);
            if (rng.bernoulli(1.0 - 1.0 / (2.0 * k + 1.0))) switch_pair(m, u, v, x, y);
        }
        rest.erase(rest.begin());
    }
    return m;
}

std::vector<Transition> RainbowMatching::actions(int i, const State& s) const {
    auto [e1, e2] = k_.conflicts()[i];
    std::map<State, double> dist;
    std::function<void(State, std::vector<std::pair<int, int>>, double)> rec =
        [&](State m, std::vector<std::pair<int, int>> rest, double p) {
            if (rest.empty()) {
                dist[m] += p;
                return;
            }
            auto [u, v] = rest.front();
            auto pool = free_edges(m, rest);
            std::vector<std::pair<int, int>> tail(rest.begin() + 1, rest.end());
            const double k = static_cast<double>(pool.size());
            const double each = 1.0 / (2.0 * k + 1.0);
            rec(m, tail, p * each);
            for (auto [a, b] : pool)
                for (int o = 0; o < 2; ++o) {
                    State t = m;
                    if (o)
                        switch_pair(t, u, v, b, a);
                    else
                        switch_pair(t, u, v, a, b);
                    rec(t, tail, p * each);
                }
        };
    rec(s, {k_.endpoints(e1), k_.endpoints(e2)}, 1.0);
    std::vector<Transition> out;
    for (auto& [st, p] : dist) out.push_back({st, p});
    return out;
}

State RainbowMatching::sample_initial(Rng& rng) const {
    const int n2 = k_.vertices();
    std::vector<int> perm(static_cast<std::size_t>(n2));
    for (int v = 0; v < n2; ++v) perm[v] = v;
    for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
    State m(static_cast<std::size_t>(n2));
    for (int j = 0; j < n2; j += 2) {
        m[perm[j]] = perm[j + 1];
        m[perm[j + 1]] = perm[j];
    }
    return m;
}

std::optional<std::vector<State>> RainbowMatching::enumerate_states() const {
    const int n2 = k_.vertices();
    if (n2 > 12) return std::nullopt;
    std::vector<State> out;
    State m(static_cast<std::size_t>(n2), -1);
    std::function<void()> rec = [&]() {
        int a = 0;
        while (a < n2 && m[a] >= 0) ++a;
        if (a == n2) {
            out.push_back(m);
            return;
        }
        for (int b = a + 1; b < n2; ++b) {
            if (m[b] >= 0) continue;
            m[a] = b;
            m[b] = a;
            rec();
            m[a] = m[b] = -1;
        }
    };
    rec();
    return out;
}

std::vector<int> RainbowMatching::matching_edges(const State& s) const {
    std::vector<int> out;
    for (int a = 0; a < k_.vertices(); ++a)
        if (a < s[a]) out.push_back(k_.edge_index(a, s[a]));
    std::sort(out.begin(), out.end());
    return out;
}

bool RainbowMatching::is_valid_output(const State& s) const {
    if (static_cast<int>(s.size()) != k_.vertices()) return false;
    for (int a = 0; a < k_.vertices(); ++a)
        if (s[a] < 0 || s[a] >= k_.vertices() || s[a] == a || s[s[a]] != a) return false;
    std::vector<int> cols;
    for (int e : matching_edges(s)) cols.push_back(k_.color(e));
    std::sort(cols.begin(), cols.end());
    return std::adjacent_find(cols.begin(), cols.end()) == cols.end();
}

double RainbowMatching::matching_weight(const State& s, const std::vector<double>& edge_weight) const {
    if (static_cast<int>(edge_weight.size()) != k_.edge_count()) throw LllError("edge weight size mismatch");
    double w = 0.0;
    for (int e : matching_edges(s)) w += edge_weight[e];
    return w;
}

double RainbowMatching::declared_charge() const {
    const double n = k_.half();
    return 1.0 / ((2 * n - 1) * (2 * n - 3));
}

double RainbowMatching::default_psi() const {
    const double n = k_.half();
    return 3.0 / (4.0 * n * n);
}

double RainbowMatching::zeta_closed_form(double psi) const {
    const double n = k_.half();
    return std::pow(1.0 + (2 * n - 1) * (k_.max_multiplicity() - 1) * psi, 4);
}

double double_factorial_odd(int n) {
    double r = 1.0;
    for (int j = 1; j <= 2 * n - 1; j += 2) r *= j;
    return r;
}

}  // namespace lll

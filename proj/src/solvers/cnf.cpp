#include "lll/solvers/cnf.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "lll/problem.hpp"
#include "lll/rng.hpp"

namespace lll {

int CnfInstance::degree() const {
    int d = 0;
    for (const auto& occ : occurrences()) d = std::max(d, static_cast<int>(occ.size()));
    return d;
}

int CnfInstance::uniform_k() const {
    if (clauses.empty()) return -1;
    int k = static_cast<int>(clauses[0].size());
    for (const auto& c : clauses)
        if (static_cast<int>(c.size()) != k) return -1;
    return k;
}

std::vector<std::vector<int>> CnfInstance::clause_vars() const {
    std::vector<std::vector<int>> out;
    for (const auto& c : clauses) {
        std::vector<int> vs;
        for (int lit : c) vs.push_back(var_of(lit));
        std::sort(vs.begin(), vs.end());
        out.push_back(std::move(vs));
    }
    return out;
}

std::vector<std::vector<int>> CnfInstance::occurrences() const {
    std::vector<std::vector<int>> occ(static_cast<std::size_t>(variables));
    for (std::size_t c = 0; c < clauses.size(); ++c)
        for (int lit : clauses[c]) occ.at(var_of(lit)).push_back(static_cast<int>(c));
    return occ;
}

bool CnfInstance::violated(int c, const std::vector<int>& values) const {
    for (int lit : clauses[c]) {
        int v = values[var_of(lit)];
        if (v != falsifying_value(lit)) return false;
    }
    return true;
}

bool CnfInstance::satisfied_by(const std::vector<int>& values) const {
    if (static_cast<int>(values.size()) != variables) return false;
    for (int v : values)
        if (v != 0 && v != 1) return false;
    for (std::size_t c = 0; c < clauses.size(); ++c)
        if (violated(static_cast<int>(c), values)) return false;
    return true;
}

void CnfInstance::validate() const {
    if (variables < 0) throw LllError("negative variable count");
    for (const auto& c : clauses) {
        std::vector<int> vs;
        for (int lit : c) {
            if (lit == 0 || var_of(lit) >= variables) throw LllError("literal out of range");
            vs.push_back(var_of(lit));
        }
        std::sort(vs.begin(), vs.end());
        if (std::adjacent_find(vs.begin(), vs.end()) != vs.end()) throw LllError("clause repeats a variable");
    }
}

CnfInstance parse_dimacs(std::istream& in) {
    CnfInstance f;
    std::string line;
    bool header = false;
    long long declared = 0;
    std::vector<int> cur;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok == "c" || tok[0] == 'c' || tok == "%") continue;
        if (tok == "p") {
            std::string fmt;
            if (header || !(ls >> fmt >> f.variables >> declared) || fmt != "cnf" || f.variables < 0 || declared < 0)
                throw LllError("malformed DIMACS header");
            header = true;
            continue;
        }
        if (!header) throw LllError("DIMACS clause before header");
        std::istringstream all(line);
        long long lit;
        while (all >> lit) {
            if (lit == 0) {
                f.clauses.push_back(cur);
                cur.clear();
            } else {
                if (lit > f.variables || -lit > f.variables) throw LllError("DIMACS literal out of range");
                cur.push_back(static_cast<int>(lit));
            }
        }
        if (!all.eof()) throw LllError("malformed DIMACS clause line");
    }
    if (!header) throw LllError("missing DIMACS header");
    if (!cur.empty()) f.clauses.push_back(cur);
    if (static_cast<long long>(f.clauses.size()) != declared) throw LllError("DIMACS clause count mismatch");
    f.validate();
    return f;
}

CnfInstance parse_dimacs_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw LllError("cannot open " + path);
    return parse_dimacs(in);
}

std::string to_dimacs(const CnfInstance& f) {
    std::ostringstream os;
    os << "p cnf " << f.variables << ' ' << f.clauses.size() << '\n';
    for (const auto& c : f.clauses) {
        for (int lit : c) os << lit << ' ';
        os << "0\n";
    }
    return os.str();
}

CnfInstance random_ksat(int n, int k, int degree, std::uint64_t seed) {
    if (n < 0 || k < 0 || degree < 0) throw LllError("random_ksat: negative parameter");
    CnfInstance f;
    f.variables = n;
    if (k == 0 || n == 0 || degree == 0) return f;
    if (k > n) throw LllError("random_ksat: k exceeds variable count");
    const int m = n * degree / k;
    Rng rng(seed);
    for (int attempt = 0; attempt < 10000; ++attempt) {
        std::vector<int> slots;
        for (int v = 0; v < n; ++v)
            for (int d = 0; d < degree; ++d) slots.push_back(v);
        for (std::size_t i = slots.size(); i > 1; --i) std::swap(slots[i - 1], slots[rng.below(i)]);
        f.clauses.clear();
        bool ok = true;
        for (int c = 0; c < m && ok; ++c) {
            std::vector<int> vs(slots.begin() + c * k, slots.begin() + (c + 1) * k);
            std::vector<int> sorted = vs;
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) ok = false;
            std::vector<int> clause;
            for (int v : sorted) clause.push_back(rng.below(2) ? v + 1 : -(v + 1));
            f.clauses.push_back(clause);
        }
        if (ok) return f;
    }
    throw LllError("random_ksat: could not place clauses");
}

}  // namespace lll

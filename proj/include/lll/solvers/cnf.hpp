#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace lll {

// Clauses hold DIMACS literals: +(v+1) for x_v, -(v+1) for not x_v.
struct CnfInstance {
    int variables = 0;
    std::vector<std::vector<int>> clauses;

    static int var_of(int lit) { return (lit > 0 ? lit : -lit) - 1; }
    // Value of x_v that makes `lit` false.
    static int falsifying_value(int lit) { return lit > 0 ? 0 : 1; }

    int degree() const;     // max clauses per variable
    int uniform_k() const;  // clause width, -1 if mixed or empty
    std::vector<std::vector<int>> clause_vars() const;
    std::vector<std::vector<int>> occurrences() const;  // clauses per variable, ascending

    // Values: 0, 1, or -1 for unassigned. A clause is violated only when all
    // its variables are assigned and every literal is false.
    bool violated(int c, const std::vector<int>& values) const;
    bool satisfied_by(const std::vector<int>& values) const;

    void validate() const;
};

CnfInstance parse_dimacs(std::istream& in);
CnfInstance parse_dimacs_file(const std::string& path);
std::string to_dimacs(const CnfInstance& f);

// Random k-CNF where each variable occurs in at most `degree` clauses and no
// clause repeats a variable. Uses floor(n * degree / k) clauses.
CnfInstance random_ksat(int n, int k, int degree, std::uint64_t seed);

}  // namespace lll

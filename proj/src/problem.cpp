#include "lll/problem.hpp"

#include <cstring>
#include <sstream>

namespace lll {

std::size_t StateHash::operator()(const State& s) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (int v : s) {
        h ^= static_cast<std::uint32_t>(v);
        h *= 0x100000001b3ULL;
        h ^= h >> 29;
    }
    return static_cast<std::size_t>(h);
}

std::string canonical_bytes(const State& s) {
    std::string out(s.size() * sizeof(std::int32_t), '\0');
    for (std::size_t i = 0; i < s.size(); ++i) {
        auto v = static_cast<std::uint32_t>(s[i]);
        // little-endian regardless of host
        for (int b = 0; b < 4; ++b) out[i * 4 + b] = static_cast<char>((v >> (8 * b)) & 0xff);
    }
    return out;
}

std::string state_to_string(const State& s) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) os << ',';
        os << s[i];
    }
    os << ']';
    return os.str();
}

std::vector<int> SearchProblem::present_flaws(const State& s) const {
    std::vector<int> out;
    const int m = flaw_count();
    for (int i = 0; i < m; ++i)
        if (is_present(i, s)) out.push_back(i);
    return out;
}

std::vector<Transition> SearchProblem::actions(int, const State&) const {
    throw LllError("charge requires oracle mode");
}

std::vector<int> SearchProblem::neighbors(int i) const {
    std::vector<int> out;
    const int m = flaw_count();
    for (int j = 0; j < m; ++j)
        if (adjacent(i, j)) out.push_back(j);
    return out;
}

}  // namespace lll

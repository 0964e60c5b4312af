#include "lll/strategy.hpp"

#include <algorithm>
#include <limits>

namespace lll {

FlawChoiceStrategy FlawChoiceStrategy::lowest_index() { return {}; }

FlawChoiceStrategy FlawChoiceStrategy::fixed_priority(std::vector<int> permutation) {
    FlawChoiceStrategy s;
    s.kind_ = Kind::fixed_priority;
    s.name_ = "fixed_priority";
    s.perm_ = std::move(permutation);
    int mx = -1;
    for (int f : s.perm_) mx = std::max(mx, f);
    s.rank_.assign(static_cast<std::size_t>(mx + 1), std::numeric_limits<int>::max());
    for (std::size_t r = 0; r < s.perm_.size(); ++r) {
        int f = s.perm_[r];
        if (f < 0 || s.rank_[f] != std::numeric_limits<int>::max())
            throw LllError("fixed_priority: not a permutation");
        s.rank_[f] = static_cast<int>(r);
    }
    return s;
}

FlawChoiceStrategy FlawChoiceStrategy::recency() {
    FlawChoiceStrategy s;
    s.kind_ = Kind::recency;
    s.name_ = "recency";
    return s;
}

FlawChoiceStrategy FlawChoiceStrategy::custom(std::function<int(const History&)> fn, std::string label) {
    FlawChoiceStrategy s;
    s.kind_ = Kind::custom;
    s.name_ = std::move(label);
    s.fn_ = std::move(fn);
    return s;
}

FlawChoiceStrategy FlawChoiceStrategy::parse(const std::string& name) {
    if (name == "lowest_index" || name == "lowest") return lowest_index();
    if (name == "recency") return recency();
    throw LllError("unknown strategy: " + name);
}

void FlawChoiceStrategy::validate(int flaw_count) const {
    if (kind_ != Kind::fixed_priority) return;
    if (static_cast<int>(perm_.size()) != flaw_count)
        throw LllError("fixed_priority: permutation size does not match flaw count");
}

int FlawChoiceStrategy::choose(const History& h) const {
    const auto& present = *h.present;
    if (present.empty()) throw LllError("invalid strategy");
    switch (kind_) {
    case Kind::lowest_index:
        return present.front();
    case Kind::fixed_priority: {
        int best = -1, best_rank = std::numeric_limits<int>::max();
        for (int f : present) {
            int r = f < static_cast<int>(rank_.size()) ? rank_[f] : std::numeric_limits<int>::max();
            if (best < 0 || r < best_rank) { best = f; best_rank = r; }
        }
        return best;
    }
    case Kind::recency: {
        int best = present.front();
        long long best_t = (*h.introduced_at)[best];
        for (int f : present) {
            long long t = (*h.introduced_at)[f];
            if (t > best_t) { best = f; best_t = t; }
        }
        return best;
    }
    case Kind::custom:
        return fn_(h);
    }
    throw LllError("invalid strategy");
}

}  // namespace lll

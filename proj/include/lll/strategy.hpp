#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lll/problem.hpp"

namespace lll {

// What a strategy may look at before each step.
struct History {
    const State* state = nullptr;
    const std::vector<int>* present = nullptr;       // U(sigma), sorted
    const std::vector<int>* addressed = nullptr;     // w_1..w_t so far
    const std::vector<long long>* introduced_at = nullptr;  // per flaw, -1 if never
    long long step = 0;
};

// lowest_index: declaration order. fixed_priority(perm): perm[0] first.
// recency: flaw that most recently became present, ties to lowest index.
// custom: arbitrary function of the history.
//
// Commutative analyses (witness trees, resample bounds, output distribution)
// hold for any of these. Backtracking runs and the greedy colouring bound
// need lowest_index or a fixed priority.
class FlawChoiceStrategy {
public:
    enum class Kind { lowest_index, fixed_priority, recency, custom };

    static FlawChoiceStrategy lowest_index();
    static FlawChoiceStrategy fixed_priority(std::vector<int> permutation);
    static FlawChoiceStrategy recency();
    static FlawChoiceStrategy custom(std::function<int(const History&)> fn, std::string label = "custom");
    static FlawChoiceStrategy parse(const std::string& name);

    Kind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    const std::vector<int>& permutation() const { return perm_; }

    // Throws LllError("invalid strategy") when nothing sensible can be returned.
    int choose(const History& h) const;
    void validate(int flaw_count) const;

private:
    Kind kind_ = Kind::lowest_index;
    std::string name_ = "lowest_index";
    std::vector<int> perm_;
    std::vector<int> rank_;
    std::function<int(const History&)> fn_;
};

}  // namespace lll

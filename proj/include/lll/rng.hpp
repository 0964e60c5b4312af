#pragma once

#include <cstdint>
#include <random>

namespace lll {

// std::mt19937_64 with hand-rolled range reduction and doubles, so output
// does not depend on the standard library's distribution classes.
// Run r under master seed s uses stream_seed(s, r) =
// splitmix64(s ^ splitmix64(r + 0x9e3779b97f4a7c15)).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n);

    // Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    static std::uint64_t splitmix64(std::uint64_t x);
    static std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index);

private:
    std::mt19937_64 engine_;
};

}  // namespace lll

#pragma once

#include <cstdint>

namespace gapscope {

// Counter-based generator: every draw is a pure function of (key, counter),
// so results do not depend on scheduling order. Keys are built by hashing
// tuples such as (seed, trajectory, gate).
namespace rng {

std::uint64_t mix(std::uint64_t x);
std::uint64_t key(std::uint64_t seed, std::uint64_t a = 0, std::uint64_t b = 0);

} // namespace rng

/// Deterministic stream of draws addressed by an incrementing counter.
class RngStream {
public:
    explicit RngStream(std::uint64_t key) : key_(key) {}

    std::uint64_t next_u64();
    /// Uniform in [0, 1).
    double uniform();
    /// Standard normal (Box-Muller, two counter slots per pair).
    double normal();
    /// Exact binomial draw as a sum of Bernoulli trials.
    std::uint64_t binomial(std::uint64_t trials, double p);

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace gapscope

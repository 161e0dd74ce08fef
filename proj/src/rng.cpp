#include "gapscope/rng.hpp"

#include <cmath>
#include <numbers>

namespace gapscope {
namespace rng {

// splitmix64 finalizer
std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t key(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    std::uint64_t k = mix(seed);
    k = mix(k ^ (a + 0x9e3779b97f4a7c15ULL));
    k = mix(k ^ (b + 0xd1b54a32d192ed03ULL));
    return k;
}

} // namespace rng

std::uint64_t RngStream::next_u64() {
    return rng::mix(key_ ^ rng::mix(counter_++));
}

double RngStream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double phi = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(phi);
    have_spare_ = true;
    return r * std::cos(phi);
}

std::uint64_t RngStream::binomial(std::uint64_t trials, double p) {
    std::uint64_t k = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        if (uniform() < p) ++k;
    }
    return k;
}

} // namespace gapscope

#pragma once

#include <cstdint>

namespace codafin::sim {

/**
 * @brief xoshiro256** generator seeded through splitmix64.
 *
 * Portable and bit-reproducible: the state expansion, the output function,
 * the uniform mapping and the normal transform below are all fixed, so a
 * seed yields the same stream on every platform with IEEE doubles.
 *
 * - uniform(): ((next() >> 11) + 0.5) * 2^-53, strictly inside (0, 1).
 * - normal(): Box-Muller, sqrt(-2 ln u1) * {cos, sin}(2 pi u2); the sine
 *   variate is cached and returned on the following call.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next();
    double uniform();
    double normal();
    double normal(double mean, double sd) { return mean + sd * normal(); }
    bool bernoulli(double p) { return uniform() < p; }

private:
    std::uint64_t s_[4];
    double cached_ = 0.0;
    bool has_cached_ = false;
};

/// One splitmix64 step; used for seeding and for deriving sub-seeds.
std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace codafin::sim

#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace ppcp {

/// xoshiro256++ with splitmix64 seeding.
///
/// `Rng::stream(seed, index)` derives an independent generator per
/// replication, so results do not depend on how replications are scheduled
/// across threads.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed = 0x9e3779b97f4a7c15ULL);

    static Rng stream(std::uint64_t seed, std::uint64_t index);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()();

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();
    /// Uniform double in (0, 1].
    double uniform_pos() { return 1.0 - uniform(); }
    double normal();
    double exponential() ;
    std::uint64_t poisson(double mean);
    bool bernoulli(double p) { return uniform() < p; }

private:
    std::array<std::uint64_t, 4> s_;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace ppcp

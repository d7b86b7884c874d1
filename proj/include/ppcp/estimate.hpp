#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ppcp/random.hpp"

namespace ppcp {

/// Monte Carlo estimate with a normal-approximation confidence interval.
struct EstimateCI {
    double mean = 0.0;
    double std_err = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::int64_t n_effective = 0;
    std::int64_t n_censored = 0;
    std::uint64_t seed = 0;

    bool contains(double value) const { return ci_low <= value && value <= ci_high; }
    bool overlaps(const EstimateCI& other) const {
        return ci_low <= other.ci_high && other.ci_low <= ci_high;
    }
};

/// Running count, sum and sum of squares; merges associatively.
struct Accumulator {
    std::int64_t n = 0;
    std::int64_t censored = 0;
    double sum = 0.0;
    double sum_sq = 0.0;
    double max_sq = 0.0;

    void add(double x) {
        ++n;
        sum += x;
        sum_sq += x * x;
        if (x * x > max_sq) {
            max_sq = x * x;
        }
    }
    void censor() { ++censored; }
    void merge(const Accumulator& other);

    double mean() const { return n > 0 ? sum / static_cast<double>(n) : 0.0; }
    double variance() const;

    /// Estimate of `scale * E[x]` at the given two-sided confidence level.
    /// Normal approximation, except for samples of all zeros or all ones,
    /// which get the Wilson score interval; std_err is then its half-width
    /// divided by the normal quantile.
    EstimateCI estimate(double scale, double confidence_level, std::uint64_t seed) const;
};

/// Two-sided standard normal quantile z with P(|Z| <= z) = level.
double normal_two_sided_quantile(double level);

/// Worker count: PPCP_THREADS if set, else the hardware concurrency.
unsigned thread_count();

/// Runs `body(rep, rng, slot)` for rep in [0, reps) with rng = Rng::stream(seed, rep).
///
/// Replications are grouped into fixed-size blocks; each block owns a fresh
/// slot built by `make_slot`, and block slots are merged in block order with
/// `merge`. The result is therefore identical for any thread count.
template <class Slot>
Slot run_replications(std::int64_t reps, std::uint64_t seed, const std::function<Slot()>& make_slot,
                      const std::function<void(std::int64_t, Rng&, Slot&)>& body,
                      const std::function<void(Slot&, const Slot&)>& merge);

}  // namespace ppcp

#include "ppcp/detail/replications.hpp"

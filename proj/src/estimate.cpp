#include "ppcp/estimate.hpp"

#include <cmath>
#include <utility>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>

#include <boost/math/distributions/normal.hpp>

namespace ppcp {

void Accumulator::merge(const Accumulator& other) {
    n += other.n;
    censored += other.censored;
    sum += other.sum;
    sum_sq += other.sum_sq;
    max_sq = std::max(max_sq, other.max_sq);
}

double Accumulator::variance() const {
    if (n < 2) {
        return 0.0;
    }
    const double m = mean();
    const double v = (sum_sq - static_cast<double>(n) * m * m) / static_cast<double>(n - 1);
    return v > 0.0 ? v : 0.0;
}

EstimateCI Accumulator::estimate(double scale, double confidence_level, std::uint64_t seed) const {
    const double z = normal_two_sided_quantile(confidence_level);
    EstimateCI e;
    e.mean = scale * mean();
    e.std_err = n > 0 ? std::abs(scale) * std::sqrt(variance() / static_cast<double>(n)) : 0.0;
    e.ci_low = e.mean - z * e.std_err;
    e.ci_high = e.mean + z * e.std_err;
    const double dn = static_cast<double>(n);
    if (n > 0 && sum_sq == sum && (sum == 0.0 || sum == dn)) {
        // All-zero or all-one indicators: the normal interval has zero width.
        // Use the Wilson score interval, which at p = 0 is [0, z^2 / (n + z^2)].
        const double tail = z * z / (dn + z * z);
        const double lo = sum == 0.0 ? 0.0 : 1.0 - tail;
        const double hi = sum == 0.0 ? tail : 1.0;
        e.ci_low = scale * lo;
        e.ci_high = scale * hi;
        if (scale < 0.0) {
            std::swap(e.ci_low, e.ci_high);
        }
        e.std_err = 0.5 * (e.ci_high - e.ci_low) / z;
    }
    e.n_effective = n;
    e.n_censored = censored;
    e.seed = seed;
    return e;
}

double normal_two_sided_quantile(double level) {
    if (!(level > 0.0 && level < 1.0)) {
        throw std::domain_error("confidence level must lie in (0, 1)");
    }
    const boost::math::normal_distribution<double> standard;
    return boost::math::quantile(standard, 0.5 + 0.5 * level);
}

unsigned thread_count() {
    if (const char* env = std::getenv("PPCP_THREADS")) {
        try {
            const int v = std::stoi(env);
            if (v > 0) {
                return static_cast<unsigned>(v);
            }
        } catch (const std::exception&) {
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

}  // namespace ppcp

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "ppcp/offspring.hpp"
#include "ppcp/random.hpp"

using namespace ppcp;

namespace {

const std::vector<OffspringKernel>& kernels() {
    static const std::vector<OffspringKernel> ks{OffspringKernel::thomas(0.25), OffspringKernel::thomas(1.0),
                                                 OffspringKernel::thomas(4.0), OffspringKernel::matern(1.0),
                                                 OffspringKernel::matern(2.5)};
    return ks;
}

double ring_mass(const OffspringKernel& k, double r) {
    const QuadPolicy p = oracle::tight(1e-11);
    const Interval sup = k.ring_support(r, p);
    return integrate([&](double s) { return k.ring_kernel(s, r); }, sup.lo, sup.hi, k.ring_breaks(r), p).value;
}

}  // namespace

TEST_CASE("density values") {
    CHECK(OffspringKernel::thomas(1.0).density(0.0) == doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-14));
    CHECK(OffspringKernel::matern(2.0).density(3.0) == 0.0);
    CHECK(OffspringKernel::matern(2.0).density(1.0) == doctest::Approx(1.0 / (4.0 * kPi)));
    CHECK_THROWS_AS(OffspringKernel::thomas(1.0).density(-0.1), std::domain_error);
}

TEST_CASE("density normalises") {
    const OffspringKernel k = OffspringKernel::thomas(1.0);
    const double mass =
        2.0 * kPi * integrate_semi_infinite([&](double s) { return k.density(s) * s; }, 0.0, 1.0, oracle::tight()).value;
    CHECK(std::abs(mass - 1.0) < 1e-10);
}

TEST_CASE("invalid kernel parameters") {
    CHECK_THROWS(OffspringKernel::thomas(0.0));
    CHECK_THROWS(OffspringKernel::thomas(-1.0));
    CHECK_THROWS(OffspringKernel::matern(0.0));
}

TEST_CASE("Thomas ball probability at the parent") {
    const OffspringKernel k = OffspringKernel::thomas(1.0);
    const double value = k.ball_prob(0.0, 1.0);
    CHECK(std::abs(value - (1.0 - std::exp(-0.5))) < 1e-9);

    // Rejection sampling of Q in 2D.
    Rng rng(2024);
    const int n = 1000000;
    int hits = 0;
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal(), y = rng.normal();
        hits += (x * x + y * y <= 1.0) ? 1 : 0;
    }
    const double est = static_cast<double>(hits) / n;
    const double se = std::sqrt(est * (1.0 - est) / n);
    CHECK(oracle::within_se(est, se, value));
}

TEST_CASE("Matern ball probability boundary cases") {
    const OffspringKernel k = OffspringKernel::matern(1.0);
    CHECK(k.ball_prob(3.0, 1.0) == 0.0);
    CHECK(k.ball_prob(2.0, 1.0) == 0.0);  // tangent from outside
    CHECK(k.ball_prob(0.5, 2.0) == 1.0);
    CHECK(k.ball_prob(1.0, 2.0) == 1.0);  // tangent from inside
    CHECK(k.ball_prob(0.0, 0.5) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(k.ball_prob(0.0, 0.0) == 0.0);
}

TEST_CASE("Matern lens area agrees with rejection sampling") {
    const OffspringKernel k = OffspringKernel::matern(1.0);
    const double value = k.ball_prob(1.0, 1.0);
    // Two unit circles at distance 1: lens area 2pi/3 - sqrt(3)/2.
    CHECK(value == doctest::Approx((2.0 * kPi / 3.0 - std::sqrt(3.0) / 2.0) / kPi).epsilon(1e-12));
    Rng rng(5);
    const int n = 400000;
    int hits = 0;
    for (int i = 0; i < n; ++i) {
        const Point z = k.sample_offset(rng);
        hits += ((z.x + 1.0) * (z.x + 1.0) + z.y * z.y <= 1.0) ? 1 : 0;
    }
    const double est = static_cast<double>(hits) / n;
    CHECK(oracle::within_se(est, std::sqrt(est * (1.0 - est) / n), value));
}

TEST_CASE("ball probability rejects negative inputs") {
    for (const auto& k : kernels()) {
        CHECK_THROWS_AS(k.ball_prob(-1.0, 1.0), std::domain_error);
        CHECK_THROWS_AS(k.ball_prob(1.0, -1.0), std::domain_error);
        CHECK_THROWS_AS(k.ring_kernel(-1.0, 1.0), std::domain_error);
        CHECK_THROWS_AS(k.ring_kernel(1.0, -1.0), std::domain_error);
    }
}

TEST_CASE("ball probability monotonicity") {
    for (const auto& k : kernels()) {
        for (double x : {0.0, 0.4, 1.0, 2.0}) {
            double prev = 0.0;
            for (double r = 0.1; r < 6.0; r += 0.3) {
                const double v = k.ball_prob(x, r);
                CHECK(v >= prev - 1e-12);
                CHECK(v <= 1.0);
                prev = v;
            }
        }
        for (double r : {0.3, 1.0, 2.0}) {
            double prev = 1.0;
            for (double x = 0.0; x < 6.0; x += 0.3) {
                const double v = k.ball_prob(x, r);
                CHECK(v <= prev + 1e-12);
                prev = v;
            }
        }
    }
}

TEST_CASE("derivative of the ball probability is the ring kernel") {
    const double h = 1e-4;
    for (const auto& k : kernels()) {
        for (double x : {0.0, 0.5, 1.5}) {
            for (double r : {0.3, 0.8, 1.7}) {
                if (!k.is_thomas() && std::abs(std::abs(r - x) - k.scale()) < 0.05) {
                    continue;  // kink of the Matern kernel
                }
                const double fd = (k.ball_prob(x, r + h) - k.ball_prob(x, r - h)) / (2.0 * h);
                CHECK(std::abs(fd - k.ring_kernel(r, x)) < 1e-5);
            }
        }
    }
}

TEST_CASE("ring kernel at r = 0") {
    for (const auto& k : kernels()) {
        for (double s : {0.1, 0.5, 0.9, 2.0}) {
            CHECK(k.ring_kernel(s, 0.0) == doctest::Approx(2.0 * kPi * s * k.density(s)).epsilon(1e-12));
        }
    }
}

TEST_CASE("ring kernel normalises") {
    for (const auto& k : kernels()) {
        for (double r : {0.0, 0.3, 1.0, 2.0, 5.0, 20.0}) {
            CHECK(std::abs(ring_mass(k, r) - 1.0) < 1e-8);
        }
    }
}

TEST_CASE("Thomas ring kernel matches the angular definition") {
    const double sigma2 = 1.0;
    const OffspringKernel k = OffspringKernel::thomas(sigma2);
    const auto f = [&](double s) { return oracle::thomas_density(sigma2, s); };
    const double v = k.ring_kernel(1.0, 1.0);
    CHECK(std::abs(v - oracle::ring_kernel_by_angle(f, 1.0, 1.0)) <= 1e-10 * v);
}

TEST_CASE("Matern ring kernel matches the angular definition") {
    const double radius = 1.5;
    const OffspringKernel k = OffspringKernel::matern(radius);
    const auto f = [&](double s) { return oracle::matern_density(radius, s); };
    for (double s : {0.2, 0.7, 1.0, 1.9, 2.6}) {
        for (double r : {0.0, 0.5, 1.2, 2.0}) {
            // Jump in the angular integrand: split at its angle.
            const double c = (s * s + r * r - radius * radius) / (2.0 * s * r);
            double expect;
            if (r == 0.0 || c <= -1.0 || c >= 1.0) {
                expect = oracle::ring_kernel_by_angle(f, s, r);
            } else {
                expect = 2.0 * s * std::acos(c) / (kPi * radius * radius);
            }
            CHECK(k.ring_kernel(s, r) == doctest::Approx(expect).epsilon(1e-10));
        }
    }
}

TEST_CASE("ring kernel survives large Bessel arguments") {
    const OffspringKernel k = OffspringKernel::thomas(0.01);
    const double v = k.ring_kernel(10.0, 10.0);  // sr/sigma2 = 1e4
    CHECK(std::isfinite(v));
    // Large-argument limit: normal of variance sigma2 in the radial direction.
    CHECK(v == doctest::Approx(1.0 / std::sqrt(2.0 * kPi * 0.01)).epsilon(1e-3));
}

TEST_CASE("scaled Bessel function") {
    for (double x : {0.0, 0.5, 3.0, 20.0}) {
        CHECK(bessel_i0_scaled(x) == doctest::Approx(std::exp(-x) * std::cyl_bessel_i(0.0, x)).epsilon(1e-12));
    }
    const double big = 1e6;
    CHECK(bessel_i0_scaled(big) == doctest::Approx(1.0 / std::sqrt(2.0 * kPi * big)).epsilon(1e-6));
}

TEST_CASE("truncation radius") {
    CHECK(OffspringKernel::thomas(1.0).truncation_radius(1e-6) == doctest::Approx(std::sqrt(-2.0 * std::log(1e-6))));
    CHECK(OffspringKernel::matern(2.0).truncation_radius(1e-6) == 2.0);
    const OffspringKernel k = OffspringKernel::thomas(4.0);
    const double rho = k.truncation_radius(1e-6);
    CHECK(1.0 - k.ball_prob(0.0, rho) == doctest::Approx(1e-6).epsilon(1e-6));
}

TEST_CASE("sampling moments") {
    const int n = 100000;
    {
        const OffspringKernel k = OffspringKernel::thomas(1.0);
        Rng rng(11);
        double sx = 0.0, sy = 0.0;
        for (int i = 0; i < n; ++i) {
            const Point z = k.sample_offset(rng);
            sx += z.x;
            sy += z.y;
        }
        const double se = 1.0 / std::sqrt(static_cast<double>(n));
        CHECK(std::abs(sx / n) <= 3.0 * se);
        CHECK(std::abs(sy / n) <= 3.0 * se);
    }
    {
        const OffspringKernel k = OffspringKernel::thomas(4.0);
        Rng rng(12);
        double sum = 0.0, sum_sq = 0.0;
        for (int i = 0; i < n; ++i) {
            const double q = k.sample_offset(rng).norm2();
            sum += q;
            sum_sq += q * q;
        }
        const double mean = sum / n;
        const double se = std::sqrt((sum_sq / n - mean * mean) / n);
        CHECK(oracle::within_se(mean, se, 8.0));
    }
    {
        const OffspringKernel k = OffspringKernel::matern(1.0);
        Rng rng(13);
        for (int i = 0; i < n; ++i) {
            REQUIRE(k.sample_offset(rng).norm() <= 1.0);
        }
    }
}

TEST_CASE("shifted sample distances follow the ring kernel") {
    const int n = 100000;
    for (const auto& k : kernels()) {
        for (double r : {0.0, 0.7, 2.0}) {
            Rng rng(99);
            std::vector<double> d(n);
            for (auto& v : d) {
                v = (k.sample_offset(rng) + Point{r, 0.0}).norm();
            }
            std::sort(d.begin(), d.end());
            double worst = 0.0;
            for (int q = 1; q < 100; ++q) {
                const double s = d[static_cast<std::size_t>(q) * n / 100];
                const double cdf = k.ball_prob(r, s);
                worst = std::max(worst, std::abs(cdf - q / 100.0));
            }
            CHECK(worst < 0.01);
        }
    }
}

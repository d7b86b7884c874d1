#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "ppcp/quadrature.hpp"

using namespace ppcp;

TEST_CASE("constant integrand over the unit interval") {
    const QuadResult r = integrate([](double) { return 1.0; }, 0.0, 1.0);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("semi-infinite exponential") {
    const QuadResult r = integrate_semi_infinite([](double x) { return std::exp(-x); }, 0.0, 1.0);
    CHECK(r.converged);
    CHECK(std::abs(r.value - 1.0) < 1e-9);
}

TEST_CASE("semi-infinite rational tail equals pi/4") {
    const QuadResult r = integrate_semi_infinite([](double u) { return 1.0 / (1.0 + u * u); }, 1.0, 1.0,
                                                 oracle::tight(1e-11));
    CHECK(std::abs(r.value - kPi / 4.0) < 1e-9);
}

TEST_CASE("slow algebraic tail") {
    // int_{2^-2/3}^inf du / (1 + u^1.5), reference to 30 digits
    const double a = std::pow(2.0, -2.0 / 3.0);
    for (double scale : {0.63, 1.0, 10.0}) {
        const QuadResult r = integrate_semi_infinite([](double u) { return 1.0 / (1.0 + std::pow(u, 1.5)); }, a,
                                                     scale, oracle::tight(1e-12));
        CHECK(std::abs(r.value - 1.885379673377557) < 1e-9);
    }
}

TEST_CASE("gaussian tail matches erfc") {
    const auto phi = [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi); };
    const QuadResult r = integrate_semi_infinite(phi, 2.0, 1.0, oracle::tight(1e-10));
    CHECK(std::abs(r.value - 0.5 * std::erfc(2.0 / std::sqrt(2.0))) < 1e-9);
}

TEST_CASE("zero integrand") {
    const QuadResult r = integrate([](double) { return 0.0; }, -3.0, 5.0);
    CHECK(r.value == 0.0);
    CHECK(r.converged);
}

TEST_CASE("polynomials exact for both embedded rules take one panel") {
    // The 7-point Gauss rule is exact to degree 13, so the error estimate vanishes.
    const QuadResult r = integrate([](double x) { return std::pow(x, 12) + x; }, -1.0, 1.0);
    CHECK(r.evaluations == 15);
    CHECK(r.value == doctest::Approx(2.0 / 13.0).epsilon(1e-14));
}

TEST_CASE("higher-degree polynomials") {
    const QuadResult r = integrate([](double x) { return std::pow(x, 22); }, -1.0, 1.0);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(2.0 / 23.0).epsilon(1e-13));
}

TEST_CASE("integrable endpoint singularity") {
    const QuadResult r = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
    CHECK(std::abs(r.value - 2.0) < 1e-6);
}

TEST_CASE("breakpoints at a jump") {
    const auto step = [](double x) { return x < 0.3 ? 1.0 : 2.0; };
    const std::vector<double> breaks{0.3, 7.0};
    const QuadResult r = integrate(step, 0.0, 1.0, breaks);
    CHECK(r.value == doctest::Approx(0.3 + 1.4).epsilon(1e-12));
}

TEST_CASE("reversed or empty interval is rejected") {
    CHECK_THROWS(integrate([](double) { return 1.0; }, 1.0, 0.0));
}

TEST_CASE("NaN integrand raises with the abscissa") {
    try {
        integrate([](double x) { return x > 0.5 ? std::numeric_limits<double>::quiet_NaN() : x; }, 0.0, 1.0);
        FAIL("expected QuadratureNaN");
    } catch (const QuadratureNaN& e) {
        CHECK(e.abscissa() > 0.5);
        CHECK(e.abscissa() < 1.0);
    }
}

TEST_CASE("depth cap reports non-convergence") {
    QuadPolicy p;
    p.max_depth = 2;
    p.rel_tol = 1e-14;
    p.abs_tol = 0.0;
    const QuadResult r = integrate([](double x) { return std::sin(1.0 / x); }, 1e-4, 1.0, p);
    CHECK_FALSE(r.converged);
}

TEST_CASE("converged results honour the tolerance") {
    QuadPolicy p;
    p.rel_tol = 1e-8;
    const QuadResult r = integrate([](double x) { return std::exp(std::sin(3.0 * x)); }, 0.0, 10.0, p);
    CHECK(r.converged);
    CHECK(r.abs_err_est <= std::max(p.abs_tol, p.rel_tol * std::abs(r.value)));
}

TEST_CASE("invalid policies are rejected") {
    QuadPolicy p;
    p.rel_tol = -1.0;
    CHECK_THROWS(p.validate());
    p = QuadPolicy{};
    p.max_depth = 0;
    CHECK_THROWS(p.validate());
}

TEST_CASE("additivity and linearity on random smooth integrands") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    const QuadPolicy p = oracle::tight(1e-11);
    for (int trial = 0; trial < 50; ++trial) {
        const double a0 = coef(gen), a1 = coef(gen), w = 1.0 + std::abs(coef(gen));
        const double c = coef(gen);
        const auto f = [&](double x) { return a0 * std::cos(w * x) + a1 * x * x; };
        const auto g = [&](double x) { return std::exp(-x * x) * a1; };
        const double lo = coef(gen) - 3.0;
        const double mid = lo + 1.0 + std::abs(coef(gen));
        const double hi = mid + 1.0 + std::abs(coef(gen));

        const double whole = integrate(f, lo, hi, p).value;
        const double split = integrate(f, lo, mid, p).value + integrate(f, mid, hi, p).value;
        CHECK(std::abs(whole - split) < 1e-9 * (1.0 + std::abs(whole)));

        const double combo = integrate([&](double x) { return f(x) + c * g(x); }, lo, hi, p).value;
        const double parts = whole + c * integrate(g, lo, hi, p).value;
        CHECK(std::abs(combo - parts) < 1e-9 * (1.0 + std::abs(combo)));

        // Antiderivative oracle.
        const double exact = a0 / w * (std::sin(w * hi) - std::sin(w * lo)) + a1 * (hi * hi * hi - lo * lo * lo) / 3.0;
        CHECK(std::abs(whole - exact) < 1e-9 * (1.0 + std::abs(exact)));
    }
}

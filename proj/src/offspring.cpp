#include "ppcp/offspring.hpp"
#include "ppcp/detail/compact.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <gsl/gsl_sf_bessel.h>

namespace ppcp {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_nonnegative(double v, const char* what) {
    if (!(v >= 0.0)) {
        throw std::domain_error(std::string(what) + " must be >= 0");
    }
}

// acos((a^2 + b^2 - c^2) / (2ab)) from factored differences; the direct
// cosine loses everything to cancellation once a, b >> c.
double law_of_cosines_angle(double a, double b, double c) {
    const double d = a - b;
    const double closed = (c - d) * (c + d);          // 2ab (1 - cos)
    const double open = (a + b - c) * (a + b + c);    // 2ab (1 + cos)
    if (closed <= 0.0) {
        return 0.0;
    }
    if (open <= 0.0) {
        return kPi;
    }
    return 2.0 * std::atan2(std::sqrt(closed), std::sqrt(open));
}

// Area of the intersection of the disks b(0, r) and b(x, R) with |x| = d.
double lens_area(double d, double r, double big_r) {
    if (r <= 0.0) {
        return 0.0;
    }
    if (d >= r + big_r) {
        return 0.0;
    }
    if (d + big_r <= r) {
        return kPi * big_r * big_r;
    }
    if (d + r <= big_r) {
        return kPi * r * r;
    }
    const double a1 = law_of_cosines_angle(d, r, big_r);
    const double a2 = law_of_cosines_angle(d, big_r, r);
    const double k = (-d + r + big_r) * (d + r - big_r) * (d - r + big_r) * (d + r + big_r);
    return r * r * a1 + big_r * big_r * a2 - 0.5 * std::sqrt(std::max(k, 0.0));
}

}  // namespace

double bessel_i0_scaled(double x) {
    gsl_sf_result result;
    const int status = gsl_sf_bessel_I0_scaled_e(std::abs(x), &result);
    if (status != 0) {
        throw std::domain_error("bessel_i0_scaled: evaluation failed");
    }
    return result.val;
}

OffspringKernel::OffspringKernel(Thomas t) : kind_(t) {
    if (!(t.sigma2 > 0.0) || !std::isfinite(t.sigma2)) {
        throw std::invalid_argument("Thomas kernel requires sigma2 > 0");
    }
}

OffspringKernel::OffspringKernel(Matern m) : kind_(m) {
    if (!(m.radius > 0.0) || !std::isfinite(m.radius)) {
        throw std::invalid_argument("Matern kernel requires radius > 0");
    }
}

std::string OffspringKernel::name() const {
    return std::visit(Overloaded{[](Thomas t) { return "thomas(sigma2=" + detail::compact(t.sigma2) + ")"; },
                                 [](Matern m) { return "matern(radius=" + detail::compact(m.radius) + ")"; }},
                      kind_);
}

double OffspringKernel::scale() const noexcept {
    return std::visit(Overloaded{[](Thomas t) { return std::sqrt(t.sigma2); },
                                 [](Matern m) { return m.radius; }},
                      kind_);
}

double OffspringKernel::density(double s) const {
    require_nonnegative(s, "density: s");
    return std::visit(
        Overloaded{[s](Thomas t) { return std::exp(-s * s / (2.0 * t.sigma2)) / (2.0 * kPi * t.sigma2); },
                   [s](Matern m) { return s <= m.radius ? 1.0 / (kPi * m.radius * m.radius) : 0.0; }},
        kind_);
}

double OffspringKernel::ring_kernel(double s, double r) const {
    require_nonnegative(s, "ring_kernel: s");
    require_nonnegative(r, "ring_kernel: r");
    return std::visit(Overloaded{[s, r](Thomas t) {
                                     const double d = s - r;
                                     return (s / t.sigma2) * std::exp(-d * d / (2.0 * t.sigma2)) *
                                            bessel_i0_scaled(s * r / t.sigma2);
                                 },
                                 [s, r](Matern m) {
                                     const double area = kPi * m.radius * m.radius;
                                     if (s == 0.0) {
                                         return 0.0;
                                     }
                                     if (r == 0.0) {
                                         return s <= m.radius ? 2.0 * kPi * s / area : 0.0;
                                     }
                                     // Arc of the circle |y| = s lying inside b(x, R).
                                     return 2.0 * s * law_of_cosines_angle(s, r, m.radius) / area;
                                 }},
                      kind_);
}

double OffspringKernel::ball_prob(double x_dist, double r, const QuadPolicy& policy) const {
    require_nonnegative(x_dist, "ball_prob: x_dist");
    require_nonnegative(r, "ball_prob: r");
    if (const auto* m = std::get_if<Matern>(&kind_)) {
        const double p = lens_area(x_dist, r, m->radius) / (kPi * m->radius * m->radius);
        return std::clamp(p, 0.0, 1.0);
    }
    const Interval support = ring_support(x_dist, policy);
    if (r <= support.lo) {
        return 0.0;
    }
    if (r >= support.hi) {
        return 1.0;
    }
    QuadPolicy tight = policy;
    tight.rel_tol = 1e-10;
    tight.abs_tol = 1e-14;
    const auto g = [&](double s) { return ring_kernel(s, x_dist); };
    // Integrate whichever side of r carries less mass to keep relative accuracy.
    if (r <= x_dist) {
        return std::clamp(integrate(g, support.lo, r, tight).value, 0.0, 1.0);
    }
    return std::clamp(1.0 - integrate(g, r, support.hi, tight).value, 0.0, 1.0);
}

double OffspringKernel::truncation_radius(double eps) const {
    if (!(eps > 0.0 && eps < 1.0)) {
        throw std::domain_error("truncation_radius: eps must lie in (0, 1)");
    }
    return std::visit(Overloaded{[eps](Thomas t) { return std::sqrt(t.sigma2 * -2.0 * std::log(eps)); },
                                 [](Matern m) { return m.radius; }},
                      kind_);
}

Interval OffspringKernel::ring_support(double r, const QuadPolicy& policy) const {
    const double reach = density_support(policy);
    return {std::max(0.0, r - reach), r + reach};
}

std::vector<double> OffspringKernel::ring_breaks(double r) const {
    if (const auto* m = std::get_if<Matern>(&kind_)) {
        return {std::abs(r - m->radius)};
    }
    return {};
}

double OffspringKernel::density_support(const QuadPolicy& policy) const {
    return std::visit(Overloaded{[&](Thomas t) { return policy.trunc_factor * std::sqrt(t.sigma2); },
                                 [](Matern m) { return m.radius; }},
                      kind_);
}

Point OffspringKernel::sample_offset(Rng& rng) const {
    return std::visit(Overloaded{[&rng](Thomas t) {
                                     const double sd = std::sqrt(t.sigma2);
                                     const double x = rng.normal();
                                     const double y = rng.normal();
                                     return Point{sd * x, sd * y};
                                 },
                                 [&rng](Matern m) {
                                     const double rad = m.radius * std::sqrt(rng.uniform());
                                     const double ang = 2.0 * kPi * rng.uniform();
                                     return Point{rad * std::cos(ang), rad * std::sin(ang)};
                                 }},
                      kind_);
}

}  // namespace ppcp

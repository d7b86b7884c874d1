#pragma once

#include <string>
#include <variant>
#include <vector>

#include "ppcp/geometry.hpp"
#include "ppcp/quadrature.hpp"
#include "ppcp/random.hpp"

namespace ppcp {

/// Isotropic normal displacement with per-coordinate variance sigma2.
struct Thomas {
    double sigma2;
};

/// Uniform displacement on the disk of the given radius.
struct Matern {
    double radius;
};

/// Offspring displacement law Q of a Poisson cluster process.
///
/// Q is isotropic and diffuse for both variants, so Q(dy) = f(|y|) dy and
/// the reflected law equals Q. All evaluators are pure.
class OffspringKernel {
public:
    using Variant = std::variant<Thomas, Matern>;

    OffspringKernel(Thomas t);
    OffspringKernel(Matern m);

    static OffspringKernel thomas(double sigma2) { return OffspringKernel(Thomas{sigma2}); }
    static OffspringKernel matern(double radius) { return OffspringKernel(Matern{radius}); }

    const Variant& variant() const noexcept { return kind_; }
    bool is_thomas() const noexcept { return std::holds_alternative<Thomas>(kind_); }
    std::string name() const;

    /// Natural length scale: sigma for Thomas, the radius for Matern.
    double scale() const noexcept;

    /// Radial density f(s) of Q, so that Q(dy) = f(|y|) dy.
    double density(double s) const;

    /// Q(b_0(r) - x) for |x| = x_dist: probability that a displacement from a
    /// parent at distance x_dist from the origin lands within r of the origin.
    double ball_prob(double x_dist, double r, const QuadPolicy& policy = {}) const;

    /// g(s | r): radial density of |x + z| for z ~ Q and |x| = r.
    double ring_kernel(double s, double r) const;

    /// Smallest radius with Q(outside b_0(rho)) <= eps.
    double truncation_radius(double eps) const;

    /// Interval [lo, hi] outside which g(. | r) is zero (Matern) or below the
    /// policy's truncation threshold (Thomas).
    Interval ring_support(double r, const QuadPolicy& policy) const;

    /// Points where g(. | r) is not smooth; empty for Thomas.
    std::vector<double> ring_breaks(double r) const;

    /// Radius beyond which f is zero or negligible under the policy.
    double density_support(const QuadPolicy& policy) const;

    /// One draw from Q.
    Point sample_offset(Rng& rng) const;

private:
    Variant kind_;
};

/// e^{-x} I_0(x), finite for every x >= 0.
double bessel_i0_scaled(double x);

}  // namespace ppcp

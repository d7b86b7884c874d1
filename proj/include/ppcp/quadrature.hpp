#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>

namespace ppcp {

/// Tolerances shared by every analytic evaluator.
///
/// `trunc_factor` multiplies a kernel's natural length scale (sigma for
/// Thomas) to give finite integration bounds for kernel-weighted integrals.
/// `max_depth` caps the number of bisection levels of the adaptive engine.
struct QuadPolicy {
    double rel_tol = 1e-6;
    double abs_tol = 1e-10;
    double trunc_factor = 8.0;
    int max_depth = 40;

    void validate() const;
    /// Policy for an integral nested inside one governed by this policy.
    [[nodiscard]] QuadPolicy inner(double tighten = 1e-2) const;
};

struct QuadResult {
    double value = 0.0;
    double abs_err_est = 0.0;
    long evaluations = 0;
    bool converged = true;

    QuadResult& operator+=(const QuadResult& other);
};

/// Raised when the integrand returns NaN.
class QuadratureNaN : public std::domain_error {
public:
    QuadratureNaN(double abscissa);
    double abscissa() const noexcept { return abscissa_; }

private:
    double abscissa_;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive 7/15-point Gauss-Kronrod integration over [a, b].
///
/// The error estimate of each panel is the gap between the Kronrod and the
/// embedded Gauss value. Panels are bisected (worst first) until the summed
/// error meets max(abs_tol, rel_tol*|value|) or a panel would exceed
/// `max_depth` bisections; the latter yields converged == false. Endpoints
/// are never evaluated, so integrable endpoint singularities are allowed.
QuadResult integrate(const Integrand& f, double a, double b, const QuadPolicy& policy = {});

/// As `integrate`, split at the given interior breakpoints (sorted or not;
/// points outside (a, b) are ignored). The tolerance is shared across pieces.
QuadResult integrate(const Integrand& f, double a, double b, std::span<const double> breaks,
                     const QuadPolicy& policy = {});

/// Decay class of a semi-infinite integrand.
enum class Tail {
    /// Exponential or faster. Map s = a + scale*t/(1-t).
    rapid,
    /// Possibly algebraic, down to u^-(1+delta). Map s = a + scale*(e^x - 1)
    /// with x = t/(1-t); abscissae reach far beyond any physical scale.
    algebraic,
};

/// Integral over [a, inf), t in (0,1) under the map chosen by `tail`.
QuadResult integrate_semi_infinite(const Integrand& f, double a, double scale,
                                   const QuadPolicy& policy = {}, Tail tail = Tail::algebraic);

}  // namespace ppcp

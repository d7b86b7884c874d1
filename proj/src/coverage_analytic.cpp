#include "ppcp/coverage_analytic.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace ppcp {

namespace {

// Beyond this many kernel reaches a ring is treated as a point mass.
constexpr double kFarRing = 1e5;

// One evaluation context per (theta, spec, net, mode). Three quadrature
// levels: the outer link-length integral, the middle parent-distance
// integrals and the innermost interferer-distance integral.
class LinkEvaluator {
public:
    LinkEvaluator(double theta, const ClusterSpec& spec, const NetworkSpec& net, LinkMode mode,
                  const QuadPolicy& policy)
        : theta_(theta),
          spec_(spec),
          net_(net),
          mode_(mode),
          outer_(policy),
          middle_(policy.inner(1e-2)),
          innermost_(policy.inner(1e-4)),
          reach_(spec.kernel.density_support(policy)) {
        policy.validate();
        spec.validate();
        net.validate();
        if (!(theta > 0.0) || !std::isfinite(theta)) {
            throw std::domain_error("SINR threshold theta must be > 0");
        }
    }

    // Probability that one interferer of a cluster at distance r does not
    // defeat the link; its complement averaged over the offspring law.
    double bracket(double s, double r) const {
        if (!(s > 0.0)) {
            throw std::domain_error("c_hat: link length s must be > 0");
        }
        const Interval support = spec_.kernel.ring_support(r, outer_);
        const double inv_theta = 1.0 / theta_;
        const double beta = net_.beta;
        const bool nearest = mode_ == LinkMode::nearest;
        const auto integrand = [&](double q) {
            const double g = spec_.kernel.ring_kernel(q, r);
            if (g == 0.0) {
                return 0.0;
            }
            if (nearest && q <= s) {
                return g;
            }
            // 1 - (1 + theta l(q)/l(s))^-1 with l(q)/l(s) = (s/q)^beta
            const double ratio = std::pow(q / s, beta) * inv_theta;
            return g / (1.0 + ratio);
        };
        if (r > kFarRing * reach_) {
            // relative ring width below 1e-5: unit mass at q = r, error ~ (beta sigma / r)^2
            return std::clamp(nearest && r <= s ? 1.0 : 1.0 / (1.0 + std::pow(r / s, beta) * inv_theta), 0.0, 1.0);
        }
        std::vector<double> breaks = spec_.kernel.ring_breaks(r);
        breaks.push_back(s);
        const QuadResult res = integrate(integrand, support.lo, support.hi, breaks, innermost_);
        note(res);
        return std::clamp(res.value, 0.0, 1.0);
    }

    double c_hat(double s, double r) const { return std::exp(-net_.p * spec_.mu * bracket(s, r)); }

    double one_minus_c_hat(double s, double r) const { return -std::expm1(-net_.p * spec_.mu * bracket(s, r)); }

    double e_hat(double s) const {
        const auto integrand = [&](double v) { return one_minus_c_hat(s, v) * v; };
        const double edge = s + reach_;
        const std::vector<double> breaks{std::max(0.0, s - reach_), s};
        QuadResult res = integrate(integrand, 0.0, edge, breaks, middle_);
        res += integrate_semi_infinite(integrand, edge, edge, middle_);
        note(res);
        return std::exp(-2.0 * kPi * spec_.lambda_parent * std::max(res.value, 0.0));
    }

    // Other-cluster partner density at radius s.
    double other_clusters(double s) const {
        const Interval support = spec_.kernel.ring_support(s, outer_);
        const auto integrand = [&](double r) {
            const double g = spec_.kernel.ring_kernel(s, r);
            return g == 0.0 ? 0.0 : c_hat(s, r) * g * r;
        };
        if (s > kFarRing * reach_) {
            // int g(s, r) r dr = s, concentrated at r = s
            return 2.0 * kPi * spec_.lambda_parent * c_hat(s, s) * s;
        }
        const QuadResult res = integrate(integrand, support.lo, support.hi, spec_.kernel.ring_breaks(s), middle_);
        note(res);
        return 2.0 * kPi * spec_.lambda_parent * res.value;
    }

    double i_hat(double s, double u) const { return spec_.kernel.ring_kernel(s, u) + other_clusters(s); }

    // Integrand of the outer link-length integral.
    double link_density(double s) const {
        const double noise = net_.noise > 0.0 ? std::exp(-theta_ * net_.noise * std::pow(s, net_.beta)) : 1.0;
        if (noise == 0.0) {
            return 0.0;
        }
        const double e = e_hat(s);
        if (e == 0.0) {
            return 0.0;
        }
        const double others = other_clusters(s);
        const OffspringKernel& k = spec_.kernel;
        const auto integrand = [&](double u) {
            const double f = k.density(u);
            return f == 0.0 ? 0.0 : c_hat(s, u) * (k.ring_kernel(s, u) + others) * f * u;
        };
        std::vector<double> breaks = k.ring_breaks(s);
        breaks.push_back(s - reach_);
        breaks.push_back(s + reach_);
        const QuadResult res = integrate(integrand, 0.0, reach_, breaks, middle_);
        note(res);
        return noise * e * res.value;
    }

    AnalyticResult evaluate() const {
        const double prefactor = 2.0 * kPi * (1.0 - net_.p) * net_.p * spec_.mu;
        const auto f = [&](double s) { return link_density(s); };
        // Geometric breakpoints resolve the near-origin scale of the
        // same-cluster partner and the farther scale of other clusters.
        const double mean_gap = 1.0 / std::sqrt(net_.p * spec_.lambda_total());
        const double first = std::min(spec_.kernel.scale(), mean_gap) / 8.0;
        const double last = 2.0 * reach_ + 4.0 * mean_gap;
        std::vector<double> breaks;
        for (double b = first; b < last; b *= 2.0) {
            breaks.push_back(b);
        }
        QuadResult res = integrate(f, 0.0, last, breaks, outer_);
        // link density decays like a Gaussian in s
        res += integrate_semi_infinite(f, last, last, outer_, Tail::rapid);
        AnalyticResult out;
        out.value = prefactor * res.value;
        out.achieved_tol = prefactor * res.abs_err_est;
        out.inner_failures = failures_;
        if (!res.converged) {
            throw ConvergenceError("outer quadrature did not converge within max_depth", out);
        }
        return out;
    }

private:
    void note(const QuadResult& r) const {
        if (!r.converged) {
            ++failures_;
        }
    }

    double theta_;
    const ClusterSpec& spec_;
    const NetworkSpec& net_;
    LinkMode mode_;
    QuadPolicy outer_;
    QuadPolicy middle_;
    QuadPolicy innermost_;
    double reach_;
    mutable long failures_ = 0;
};

}  // namespace

ConvergenceError::ConvergenceError(const std::string& what, AnalyticResult partial)
    : std::runtime_error(what), partial_(partial) {}

double c_hat(double s, double r, double theta, const ClusterSpec& spec, const NetworkSpec& net, LinkMode mode,
             const QuadPolicy& policy) {
    if (!(r >= 0.0)) {
        throw std::domain_error("c_hat: r must be >= 0");
    }
    return LinkEvaluator(theta, spec, net, mode, policy).c_hat(s, r);
}

double e_hat(double s, double theta, const ClusterSpec& spec, const NetworkSpec& net, LinkMode mode,
             const QuadPolicy& policy) {
    if (!(s > 0.0)) {
        throw std::domain_error("e_hat: s must be > 0");
    }
    return LinkEvaluator(theta, spec, net, mode, policy).e_hat(s);
}

double i_hat(double s, double u, double theta, const ClusterSpec& spec, const NetworkSpec& net, LinkMode mode,
             const QuadPolicy& policy) {
    if (!(s > 0.0) || !(u >= 0.0)) {
        throw std::domain_error("i_hat: need s > 0 and u >= 0");
    }
    return LinkEvaluator(theta, spec, net, mode, policy).i_hat(s, u);
}

AnalyticResult link_metric(double theta, const ClusterSpec& spec, const NetworkSpec& net, LinkMode mode,
                           const QuadPolicy& policy) {
    return LinkEvaluator(theta, spec, net, mode, policy).evaluate();
}

AnalyticResult coverage(double theta, const ClusterSpec& spec, const NetworkSpec& net, const QuadPolicy& policy) {
    return link_metric(theta, spec, net, LinkMode::nearest, policy);
}

AnalyticResult discovery(double theta, const ClusterSpec& spec, const NetworkSpec& net, const QuadPolicy& policy) {
    return link_metric(theta, spec, net, LinkMode::discovery, policy);
}

double ppp_discovery(double theta, double p, double beta) {
    if (!(theta > 0.0) || !(beta > 2.0) || !(p > 0.0 && p < 1.0)) {
        throw std::domain_error("ppp_discovery: need theta > 0, beta > 2, p in (0,1)");
    }
    return (1.0 - p) * (beta / (2.0 * kPi)) * std::sin(2.0 * kPi / beta) * std::pow(theta, -2.0 / beta);
}

double ppp_coverage(double theta, double p, double lambda_total, double beta, const QuadPolicy& policy) {
    if (!(theta > 0.0) || !(beta > 2.0) || !(p > 0.0 && p < 1.0) || !(lambda_total > 0.0)) {
        throw std::domain_error("ppp_coverage: need theta > 0, beta > 2, p in (0,1), lambda_total > 0");
    }
    const double lower = std::pow(theta, -2.0 / beta);
    QuadPolicy tight = policy;
    tight.rel_tol = std::min(policy.rel_tol, 1e-10);
    tight.abs_tol = std::min(policy.abs_tol, 1e-13);
    const auto f = [beta](double u) { return 1.0 / (1.0 + std::pow(u, 0.5 * beta)); };
    const double rho = std::pow(theta, 2.0 / beta) * integrate_semi_infinite(f, lower, lower, tight).value;
    return (1.0 - p) / (1.0 + rho);
}

}  // namespace ppcp

#pragma once

#include <stdexcept>

#include "ppcp/pointproc.hpp"
#include "ppcp/quadrature.hpp"
#include "ppcp/sinr_mc.hpp"

namespace ppcp {

/// Which transmitters the typical receiver may decode.
///
/// `nearest`: only its nearest transmitter (coverage probability).
/// `discovery`: any transmitter (expected number of discovered devices).
enum class LinkMode { nearest, discovery };

struct AnalyticResult {
    double value = 0.0;
    /// Absolute error estimate of the outermost integral, after scaling.
    double achieved_tol = 0.0;
    /// Nested integrals that stopped at max_depth.
    long inner_failures = 0;
};

class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, AnalyticResult partial);
    const AnalyticResult& partial() const noexcept { return partial_; }

private:
    AnalyticResult partial_;
};

/// Probability that no transmitter of a cluster whose parent is at distance r
/// defeats a link of length s at threshold theta (Laplace functional of the
/// cluster's interference, restricted to |z| > s in nearest mode).
/// Lies in [exp(-p mu), 1]. Throws std::domain_error for s <= 0.
double c_hat(double s, double r, double theta, const ClusterSpec& spec, const NetworkSpec& net, LinkMode mode,
             const QuadPolicy& policy = {});

/// The same quantity over all clusters other than the typical and the
/// partner's: exp(-2 pi lambda_parent int [1 - c_hat(s, v)] v dv).
double e_hat(double s, double theta, const ClusterSpec& spec, const NetworkSpec& net, LinkMode mode,
             const QuadPolicy& policy = {});

/// Density of a partner transmitter at radius s: g(s | u) from the typical
/// device's own cluster (parent at distance u) plus the other clusters'
/// contribution 2 pi lambda_parent int c_hat(s, r) g(s | r) r dr.
double i_hat(double s, double u, double theta, const ClusterSpec& spec, const NetworkSpec& net, LinkMode mode,
             const QuadPolicy& policy = {});

/// Coverage probability of the nearest-transmitter link at SINR threshold theta.
AnalyticResult coverage(double theta, const ClusterSpec& spec, const NetworkSpec& net, const QuadPolicy& policy = {});

/// Expected number of transmitters the typical device decodes.
AnalyticResult discovery(double theta, const ClusterSpec& spec, const NetworkSpec& net,
                         const QuadPolicy& policy = {});

/// Shared pipeline of `coverage` and `discovery`.
AnalyticResult link_metric(double theta, const ClusterSpec& spec, const NetworkSpec& net, LinkMode mode,
                           const QuadPolicy& policy = {});

/// Discovered devices under a homogeneous PPP with N = 0:
/// (1-p) (beta / 2 pi) sin(2 pi / beta) theta^(-2/beta).
double ppp_discovery(double theta, double p, double beta);

/// Nearest-transmitter coverage under a homogeneous PPP with N = 0:
/// (1-p) / (1 + rho), rho = theta^(2/beta) int_{theta^(-2/beta)}^inf du / (1 + u^(beta/2)).
/// Does not depend on lambda_total.
double ppp_coverage(double theta, double p, double lambda_total, double beta, const QuadPolicy& policy = {});

}  // namespace ppcp

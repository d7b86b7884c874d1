#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ppcp/estimate.hpp"
#include "ppcp/pointproc.hpp"
#include "ppcp/quadrature.hpp"

namespace ppcp {

/// Radial test function h: [0, inf) -> [0, 1] with h(s) = 1 for s > support.
///
/// `breaks` lists radii where h jumps or kinks so that quadrature can split
/// there.
struct RadialTestFunction {
    std::function<double(double)> h;
    double support = 0.0;
    std::vector<double> breaks;

    double operator()(double s) const { return s > support ? 1.0 : h(s); }

    static RadialTestFunction one();
    /// h(s) = 0 for s <= r, 1 otherwise: the void indicator of b_0(r).
    static RadialTestFunction ball_complement(double r);
    /// h(s) = 1 - depth * exp(-s^2 / (2 width^2)) on [0, support].
    static RadialTestFunction gaussian_dip(double depth, double width, double support);
};

/// Intensity measure of the reduced Palm version on b_0(r):
/// lambda_total * pi r^2 + mu * int Q(b_0(r) - y) Q(dy).
double palm_intensity_ball(const ClusterSpec& spec, double r, const QuadPolicy& policy = {});

/// Second term of `palm_intensity_ball`: expected number of other points of
/// the cluster that owns the origin falling in b_0(r).
double palm_intensity_cluster_term(const ClusterSpec& spec, double r, const QuadPolicy& policy = {});

/// Generating functional of one cluster whose parent is at distance x_dist:
/// exp(-mu int [1 - h(s)] g(s | x_dist) ds).
double offspring_pgfl(const ClusterSpec& spec, const RadialTestFunction& h, double x_dist,
                      const QuadPolicy& policy = {});

/// E[prod h(|Y_m|)] under the stationary PPCP.
double stationary_pgfl(const ClusterSpec& spec, const RadialTestFunction& h, const QuadPolicy& policy = {});

/// E^0[prod h(|Y_m|)] over the reduced Palm version.
double palm_pgfl(const ClusterSpec& spec, const RadialTestFunction& h, const QuadPolicy& policy = {});

/// P^0(nearest other point farther than r).
double nnd_ccdf(const ClusterSpec& spec, double r, const QuadPolicy& policy = {});

/// Nonnegative functional W of a pattern, evaluated with the pattern shifted
/// so that point `center` is at the origin. W may only look at points within
/// `reach` of the centre.
struct PalmFunctional {
    std::string name;
    std::function<double(const PointPattern&, std::size_t center)> eval;
    double reach = 0.0;

    static PalmFunctional one();
    /// Number of other points within distance r of the centre.
    static PalmFunctional reduced_ball_count(double r);
    /// Product of h(|y - centre|) over the other points.
    static PalmFunctional pgfl_product(RadialTestFunction h);
};

struct ExchangeResult {
    /// lambda_Psi * E^0_Psi[W]
    EstimateCI lhs;
    /// lambda_Phi * E^0_Phi[sum_k W o theta_{Y_0,k}]
    EstimateCI rhs;
    /// Set when a single replication dominates the sample variance or W was
    /// not finite; the CIs are not trustworthy then.
    bool divergent = false;

    bool consistent() const { return !divergent && lhs.overlaps(rhs); }
};

/// Both sides of the exchange formula between the PPCP and its parent PPP,
/// each estimated from cfg.replications independent samples. The right side
/// draws from a seed derived from cfg.seed, independent of the left side.
/// Throws std::domain_error if the window cannot hold every offspring of
/// the origin parent together with its `reach` neighbourhood.
ExchangeResult verify_exchange(const ClusterSpec& spec, const PalmFunctional& w, const SimConfig& cfg);

/// Several functionals on the same samples.
std::vector<ExchangeResult> verify_exchange(const ClusterSpec& spec, const std::vector<PalmFunctional>& ws,
                                            const SimConfig& cfg);

/// Pattern drawn under the Palm distribution of the parent process: a parent
/// at the origin with its Poisson(mu) cluster (cluster_id = -2) plus an
/// independent stationary PPCP.
PointPattern sample_parent_palm(const ClusterSpec& spec, const SimConfig& cfg, Rng& rng);

}  // namespace ppcp

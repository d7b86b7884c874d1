#pragma once

#include <stdexcept>
#include <vector>

#include "ppcp/estimate.hpp"
#include "ppcp/pointproc.hpp"

namespace ppcp {

/// Random-access D2D link parameters with path loss l(r) = r^-beta.
struct NetworkSpec {
    double p = 0.5;
    double beta = 4.0;
    double noise = 0.0;
    /// Mean of the exponential (Rayleigh) fading power.
    double fading_mean = 1.0;

    void validate() const;
    double pathloss(double r) const;
};

/// Raised when more than 0.1% of the replications had no transmitter in the
/// window. Carries the estimates computed so far.
class CensoringError : public std::runtime_error {
public:
    CensoringError(const std::string& what, std::vector<EstimateCI> partial);
    const std::vector<EstimateCI>& partial() const noexcept { return partial_; }

private:
    std::vector<EstimateCI> partial_;
};

inline constexpr double kMaxCensoredFraction = 1e-3;

/// SINR at the origin of transmitter m: H_m l(|y_m|) / (sum_{j != m} H_j l(|y_j|) + N).
/// Requires thinning and fading marks; the origin point never transmits.
double sinr_at_origin(const PointPattern& pat, const NetworkSpec& net, std::size_t m);

/// Draws unit-mean exponential fading (scaled by net.fading_mean) for every
/// transmitter of a thinned pattern.
void draw_fading(PointPattern& pat, const NetworkSpec& net, Rng& rng);

struct SinrGridEstimate {
    std::vector<double> thetas;
    /// (1-p) P^0(SINR of the nearest transmitter > theta)
    std::vector<EstimateCI> coverage;
    /// (1-p) E^0[#transmitters with SINR > theta]
    std::vector<EstimateCI> discovery;
};

/// Coverage and discovery for every theta from the same Palm samples.
///
/// Each replication draws the transmitter sub-process of the Palm PPCP
/// directly (clusters of Poisson(p mu) transmitters, the typical device
/// excluded), observed in the disk of radius cfg.window_radius. Throws
/// CensoringError when the censoring budget is exceeded.
SinrGridEstimate estimate_sinr_grid(const ClusterSpec& spec, const NetworkSpec& net,
                                    const std::vector<double>& thetas, const SimConfig& cfg);

struct WindowDoubling {
    SinrGridEstimate base;
    SinrGridEstimate doubled;
};

/// Edge-effect check: one set of samples drawn in a window of twice
/// cfg.window_radius, scored once with only the transmitters inside
/// cfg.window_radius and once with all of them. The two estimates are paired,
/// so their difference isolates the truncation of far interferers.
WindowDoubling estimate_window_doubling(const ClusterSpec& spec, const NetworkSpec& net,
                                       const std::vector<double>& thetas, const SimConfig& cfg);

EstimateCI estimate_coverage(const ClusterSpec& spec, const NetworkSpec& net, double theta, const SimConfig& cfg);

EstimateCI estimate_discovery(const ClusterSpec& spec, const NetworkSpec& net, double theta, const SimConfig& cfg);

/// Empirical CCDF of the nearest-neighbour distance of the reduced Palm
/// version at each grid radius (no thinning).
std::vector<EstimateCI> estimate_nnd(const ClusterSpec& spec, const std::vector<double>& r_grid,
                                     const SimConfig& cfg);

/// Nearest-transmitter coverage under a homogeneous PPP of all devices with
/// intensity lambda_total, thinned with p; (1-p) factor applied.
EstimateCI estimate_ppp_coverage(double lambda_total, const NetworkSpec& net, double theta, const SimConfig& cfg);

}  // namespace ppcp

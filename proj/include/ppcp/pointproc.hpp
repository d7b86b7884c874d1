#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "ppcp/geometry.hpp"
#include "ppcp/offspring.hpp"
#include "ppcp/random.hpp"

namespace ppcp {

/// Stationary Poisson-Poisson cluster process: PPP parents of intensity
/// `lambda_parent`, each with a Poisson(`mu`) cluster scattered by `kernel`.
struct ClusterSpec {
    double lambda_parent;
    double mu;
    OffspringKernel kernel;

    void validate() const;
    double lambda_total() const { return lambda_parent * mu; }
};

struct Disk {
    Point center{};
    double radius = 0.0;
};

struct Rect {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;
};

using Window = std::variant<Disk, Rect>;

bool window_contains(const Window& w, Point p);
double window_area(const Window& w);

struct Mark {
    std::int64_t cluster_id = -1;
    bool is_transmitter = false;
    /// Rayleigh fading power; 0 means not drawn.
    double fading = 0.0;
};

/// Finite planar pattern. `marks` is either empty or parallel to `points`.
struct PointPattern {
    std::vector<Point> points;
    std::vector<Mark> marks;
    Window window = Disk{};
    std::optional<std::size_t> origin_index;

    std::size_t size() const { return points.size(); }
    bool has_marks() const { return !marks.empty(); }
    /// Copy without the distinguished origin point (the reduced Palm version).
    PointPattern reduced() const;
};

struct SimConfig {
    double window_radius = 30.0;
    double tail_eps = 1e-6;
    std::int64_t replications = 100000;
    std::uint64_t seed = 1;
    double confidence_level = 0.95;

    void validate() const;
};

/// Homogeneous PPP of the given intensity in a disk.
PointPattern sample_parent_ppp(double lambda, const Disk& region, Rng& rng);

/// Poisson(mu) points displaced from `center` by independent draws of `k`.
PointPattern sample_cluster(double mu, const OffspringKernel& k, Point center, Rng& rng);

/// Stationary PPCP observed in the disk of radius cfg.window_radius about the
/// origin. Parents come from the window dilated by the kernel's truncation
/// radius at cfg.tail_eps; marks carry the parent index as cluster_id.
PointPattern sample_ppcp(const ClusterSpec& spec, const SimConfig& cfg, Rng& rng);

/// Palm version of the PPCP: the stationary pattern plus one extra cluster
/// whose parent sits at -z (z ~ Q) with Poisson(mu) further offspring, plus
/// the point at the origin (recorded in origin_index). The extra cluster gets
/// a cluster_id larger than any other in the pattern.
PointPattern sample_palm_ppcp(const ClusterSpec& spec, const SimConfig& cfg, Rng& rng);

/// Independent p-thinning: marks every point's is_transmitter flag.
PointPattern thin(PointPattern pat, double p, Rng& rng);

struct NearestResult {
    std::size_t index;
    double distance;
};

/// Nearest transmitter to the origin other than the origin point itself.
/// Unmarked patterns treat every point as a transmitter. Returns nullopt when
/// there is none (a censored replication).
std::optional<NearestResult> nearest_transmitter(const PointPattern& pat);

/// Nearest point to the origin other than the origin point, ignoring marks.
std::optional<NearestResult> nearest_neighbor(const PointPattern& pat);

/// Default interference window radius: max(30, 10 / sqrt(lambda_total)).
double default_window_radius(const ClusterSpec& spec);

}  // namespace ppcp

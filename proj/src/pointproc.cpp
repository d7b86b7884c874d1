#include "ppcp/pointproc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ppcp {

void ClusterSpec::validate() const {
    if (!(lambda_parent > 0.0) || !std::isfinite(lambda_parent)) {
        throw std::invalid_argument("cluster.lambda_parent must be a positive finite number");
    }
    if (!(mu > 0.0) || !std::isfinite(mu)) {
        throw std::invalid_argument("cluster.mu must be a positive finite number");
    }
}

void SimConfig::validate() const {
    if (!(window_radius > 0.0)) {
        throw std::invalid_argument("sim.window_radius must be > 0");
    }
    if (!(tail_eps > 0.0 && tail_eps < 1.0)) {
        throw std::invalid_argument("sim.tail_eps must lie in (0, 1)");
    }
    if (replications < 1) {
        throw std::invalid_argument("sim.replications must be >= 1");
    }
    if (!(confidence_level > 0.0 && confidence_level < 1.0)) {
        throw std::invalid_argument("sim.confidence_level must lie in (0, 1)");
    }
}

bool window_contains(const Window& w, Point p) {
    if (const auto* d = std::get_if<Disk>(&w)) {
        return (p - d->center).norm2() <= d->radius * d->radius;
    }
    const auto& r = std::get<Rect>(w);
    return p.x >= r.x_min && p.x <= r.x_max && p.y >= r.y_min && p.y <= r.y_max;
}

double window_area(const Window& w) {
    if (const auto* d = std::get_if<Disk>(&w)) {
        return kPi * d->radius * d->radius;
    }
    const auto& r = std::get<Rect>(w);
    return (r.x_max - r.x_min) * (r.y_max - r.y_min);
}

PointPattern PointPattern::reduced() const {
    PointPattern out = *this;
    if (!origin_index) {
        return out;
    }
    const auto idx = static_cast<std::ptrdiff_t>(*origin_index);
    out.points.erase(out.points.begin() + idx);
    if (!out.marks.empty()) {
        out.marks.erase(out.marks.begin() + idx);
    }
    out.origin_index.reset();
    return out;
}

PointPattern sample_parent_ppp(double lambda, const Disk& region, Rng& rng) {
    if (!(lambda > 0.0)) {
        throw std::domain_error("sample_parent_ppp: lambda must be > 0");
    }
    PointPattern out;
    out.window = region;
    const double area = kPi * region.radius * region.radius;
    if (area <= 0.0) {
        return out;
    }
    const auto count = rng.poisson(lambda * area);
    out.points.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        const double rad = region.radius * std::sqrt(rng.uniform());
        const double ang = 2.0 * kPi * rng.uniform();
        out.points.push_back(region.center + Point{rad * std::cos(ang), rad * std::sin(ang)});
    }
    return out;
}

PointPattern sample_cluster(double mu, const OffspringKernel& k, Point center, Rng& rng) {
    if (!(mu > 0.0)) {
        throw std::domain_error("sample_cluster: mu must be > 0");
    }
    PointPattern out;
    out.window = Disk{center, std::numeric_limits<double>::infinity()};
    const auto count = rng.poisson(mu);
    out.points.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        out.points.push_back(center + k.sample_offset(rng));
    }
    return out;
}

namespace {

// Appends the offspring of one parent that fall inside the observation disk.
void add_cluster(PointPattern& out, const ClusterSpec& spec, Point parent, std::int64_t id,
                 double window_r2, Rng& rng) {
    const auto count = rng.poisson(spec.mu);
    for (std::uint64_t i = 0; i < count; ++i) {
        const Point y = parent + spec.kernel.sample_offset(rng);
        if (y.norm2() <= window_r2) {
            out.points.push_back(y);
            out.marks.push_back(Mark{id, false, 0.0});
        }
    }
}

}  // namespace

PointPattern sample_ppcp(const ClusterSpec& spec, const SimConfig& cfg, Rng& rng) {
    spec.validate();
    const double dilation = spec.kernel.truncation_radius(cfg.tail_eps);
    const PointPattern parents = sample_parent_ppp(spec.lambda_parent, Disk{{}, cfg.window_radius + dilation}, rng);
    PointPattern out;
    out.window = Disk{{}, cfg.window_radius};
    const double window_r2 = cfg.window_radius * cfg.window_radius;
    out.points.reserve(static_cast<std::size_t>(static_cast<double>(parents.size()) * spec.mu));
    out.marks.reserve(out.points.capacity());
    for (std::size_t j = 0; j < parents.size(); ++j) {
        add_cluster(out, spec, parents.points[j], static_cast<std::int64_t>(j), window_r2, rng);
    }
    return out;
}

PointPattern sample_palm_ppcp(const ClusterSpec& spec, const SimConfig& cfg, Rng& rng) {
    PointPattern out = sample_ppcp(spec, cfg, rng);
    std::int64_t extra_id = 0;
    for (const Mark& m : out.marks) {
        extra_id = std::max(extra_id, m.cluster_id + 1);
    }
    // Parent of the point at the origin: -z with z ~ Q (Q is symmetric).
    const Point z = spec.kernel.sample_offset(rng);
    const Point parent{-z.x, -z.y};
    add_cluster(out, spec, parent, extra_id, cfg.window_radius * cfg.window_radius, rng);
    out.points.push_back(Point{0.0, 0.0});
    out.marks.push_back(Mark{extra_id, false, 0.0});
    out.origin_index = out.points.size() - 1;
    return out;
}

PointPattern thin(PointPattern pat, double p, Rng& rng) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("thin: p must lie in (0, 1)");
    }
    pat.marks.resize(pat.points.size());
    for (Mark& m : pat.marks) {
        m.is_transmitter = rng.bernoulli(p);
    }
    return pat;
}

namespace {

std::optional<NearestResult> nearest_matching(const PointPattern& pat, bool transmitters_only) {
    std::optional<NearestResult> best;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pat.points.size(); ++i) {
        if (pat.origin_index && *pat.origin_index == i) {
            continue;
        }
        if (transmitters_only && pat.has_marks() && !pat.marks[i].is_transmitter) {
            continue;
        }
        const double d2 = pat.points[i].norm2();
        if (d2 < best_d2) {
            best_d2 = d2;
            best = NearestResult{i, 0.0};
        }
    }
    if (best) {
        best->distance = std::sqrt(best_d2);
    }
    return best;
}

}  // namespace

std::optional<NearestResult> nearest_transmitter(const PointPattern& pat) { return nearest_matching(pat, true); }

std::optional<NearestResult> nearest_neighbor(const PointPattern& pat) { return nearest_matching(pat, false); }

double default_window_radius(const ClusterSpec& spec) {
    return std::max(30.0, 10.0 / std::sqrt(spec.lambda_total()));
}

}  // namespace ppcp

#include "ppcp/palm_analytic.hpp"
#include "ppcp/detail/compact.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ppcp {

namespace {

constexpr std::int64_t kParentPalmCluster = -2;

std::vector<double> merged_breaks(std::vector<double> a, const std::vector<double>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

// int [1 - h(s)] g(s | x) ds over the part of the ring support where h < 1.
double offspring_deficit(const ClusterSpec& spec, const RadialTestFunction& h, double x_dist,
                         const QuadPolicy& policy) {
    const Interval support = spec.kernel.ring_support(x_dist, policy);
    const double hi = std::min(support.hi, h.support);
    if (!(hi > support.lo)) {
        return 0.0;
    }
    const auto integrand = [&](double s) { return (1.0 - h(s)) * spec.kernel.ring_kernel(s, x_dist); };
    const auto breaks = merged_breaks(h.breaks, spec.kernel.ring_breaks(x_dist));
    return integrate(integrand, support.lo, hi, breaks, policy).value;
}

// 1 - h~(u), computed without cancellation.
double one_minus_offspring_pgfl(const ClusterSpec& spec, const RadialTestFunction& h, double u,
                                const QuadPolicy& policy) {
    return -std::expm1(-spec.mu * offspring_deficit(spec, h, u, policy));
}

}  // namespace

RadialTestFunction RadialTestFunction::one() {
    return RadialTestFunction{[](double) { return 1.0; }, 0.0, {}};
}

RadialTestFunction RadialTestFunction::ball_complement(double r) {
    if (!(r >= 0.0)) {
        throw std::domain_error("ball_complement: r must be >= 0");
    }
    return RadialTestFunction{[r](double s) { return s <= r ? 0.0 : 1.0; }, r, {r}};
}

RadialTestFunction RadialTestFunction::gaussian_dip(double depth, double width, double support) {
    if (!(depth >= 0.0 && depth <= 1.0) || !(width > 0.0) || !(support >= 0.0)) {
        throw std::domain_error("gaussian_dip: need depth in [0,1], width > 0, support >= 0");
    }
    return RadialTestFunction{
        [depth, width](double s) { return 1.0 - depth * std::exp(-s * s / (2.0 * width * width)); },
        support,
        {support}};
}

double palm_intensity_cluster_term(const ClusterSpec& spec, double r, const QuadPolicy& policy) {
    if (!(r >= 0.0)) {
        throw std::domain_error("palm_intensity_ball: r must be >= 0");
    }
    if (r == 0.0) {
        return 0.0;
    }
    const OffspringKernel& k = spec.kernel;
    const QuadPolicy inner = policy.inner();
    const auto integrand = [&](double u) { return k.ball_prob(u, r, inner) * k.density(u) * u; };
    std::vector<double> breaks;
    if (const auto* m = std::get_if<Matern>(&k.variant())) {
        breaks = {std::abs(r - m->radius)};
    }
    const double mass = integrate(integrand, 0.0, k.density_support(policy), breaks, policy).value;
    return spec.mu * 2.0 * kPi * mass;
}

double palm_intensity_ball(const ClusterSpec& spec, double r, const QuadPolicy& policy) {
    spec.validate();
    const double cluster = palm_intensity_cluster_term(spec, r, policy);
    return spec.lambda_total() * kPi * r * r + cluster;
}

double offspring_pgfl(const ClusterSpec& spec, const RadialTestFunction& h, double x_dist,
                      const QuadPolicy& policy) {
    if (!(x_dist >= 0.0)) {
        throw std::domain_error("offspring_pgfl: |x| must be >= 0");
    }
    return std::exp(-spec.mu * offspring_deficit(spec, h, x_dist, policy));
}

double stationary_pgfl(const ClusterSpec& spec, const RadialTestFunction& h, const QuadPolicy& policy) {
    spec.validate();
    if (h.support <= 0.0) {
        return 1.0;
    }
    const QuadPolicy inner = policy.inner();
    const auto integrand = [&](double u) { return one_minus_offspring_pgfl(spec, h, u, inner) * u; };
    const double reach = h.support + spec.kernel.density_support(policy);
    const double mass = integrate(integrand, 0.0, reach, h.breaks, policy).value;
    return std::exp(-spec.lambda_parent * 2.0 * kPi * mass);
}

double palm_pgfl(const ClusterSpec& spec, const RadialTestFunction& h, const QuadPolicy& policy) {
    spec.validate();
    if (h.support <= 0.0) {
        return 1.0;
    }
    const QuadPolicy inner = policy.inner();
    const OffspringKernel& k = spec.kernel;
    const auto integrand = [&](double u) { return one_minus_offspring_pgfl(spec, h, u, inner) * k.density(u) * u; };
    const double deficit = 2.0 * kPi * integrate(integrand, 0.0, k.density_support(policy), h.breaks, policy).value;
    const double own_cluster = std::clamp(1.0 - deficit, 0.0, 1.0);
    return stationary_pgfl(spec, h, policy) * own_cluster;
}

double nnd_ccdf(const ClusterSpec& spec, double r, const QuadPolicy& policy) {
    if (!(r >= 0.0)) {
        throw std::domain_error("nnd_ccdf: r must be >= 0");
    }
    return palm_pgfl(spec, RadialTestFunction::ball_complement(r), policy);
}

PalmFunctional PalmFunctional::one() {
    return PalmFunctional{"one", [](const PointPattern&, std::size_t) { return 1.0; }, 0.0};
}

PalmFunctional PalmFunctional::reduced_ball_count(double r) {
    return PalmFunctional{"reduced_ball_count(r=" + detail::compact(r) + ")",
                          [r](const PointPattern& pat, std::size_t center) {
                              const Point c = pat.points[center];
                              const double r2 = r * r;
                              double count = 0.0;
                              for (std::size_t j = 0; j < pat.points.size(); ++j) {
                                  if (j != center && (pat.points[j] - c).norm2() <= r2) {
                                      count += 1.0;
                                  }
                              }
                              return count;
                          },
                          r};
}

PalmFunctional PalmFunctional::pgfl_product(RadialTestFunction h) {
    const double reach = h.support;
    return PalmFunctional{"pgfl_product",
                          [h = std::move(h)](const PointPattern& pat, std::size_t center) {
                              const Point c = pat.points[center];
                              const double r2 = h.support * h.support;
                              double prod = 1.0;
                              for (std::size_t j = 0; j < pat.points.size(); ++j) {
                                  if (j == center) {
                                      continue;
                                  }
                                  const double d2 = (pat.points[j] - c).norm2();
                                  if (d2 <= r2) {
                                      prod *= h(std::sqrt(d2));
                                  }
                              }
                              return prod;
                          },
                          reach};
}

PointPattern sample_parent_palm(const ClusterSpec& spec, const SimConfig& cfg, Rng& rng) {
    PointPattern out = sample_ppcp(spec, cfg, rng);
    const auto count = rng.poisson(spec.mu);
    const double r2 = cfg.window_radius * cfg.window_radius;
    for (std::uint64_t i = 0; i < count; ++i) {
        const Point y = spec.kernel.sample_offset(rng);
        if (y.norm2() <= r2) {
            out.points.push_back(y);
            out.marks.push_back(Mark{kParentPalmCluster, false, 0.0});
        }
    }
    return out;
}

std::vector<ExchangeResult> verify_exchange(const ClusterSpec& spec, const std::vector<PalmFunctional>& ws,
                                            const SimConfig& cfg) {
    spec.validate();
    cfg.validate();
    double reach = 0.0;
    for (const auto& w : ws) {
        reach = std::max(reach, w.reach);
    }
    if (cfg.window_radius < reach + spec.kernel.truncation_radius(cfg.tail_eps)) {
        throw std::domain_error("verify_exchange: window_radius must be >= reach + truncation radius");
    }

    using Slot = std::vector<Accumulator>;
    const std::function<Slot()> make = [&] { return Slot(ws.size()); };
    const std::function<void(Slot&, const Slot&)> merge = [](Slot& into, const Slot& from) {
        for (std::size_t i = 0; i < into.size(); ++i) {
            into[i].merge(from[i]);
        }
    };

    const std::function<void(std::int64_t, Rng&, Slot&)> palm_side = [&](std::int64_t, Rng& rng, Slot& acc) {
        const PointPattern pat = sample_palm_ppcp(spec, cfg, rng);
        for (std::size_t i = 0; i < ws.size(); ++i) {
            acc[i].add(ws[i].eval(pat, *pat.origin_index));
        }
    };
    const std::function<void(std::int64_t, Rng&, Slot&)> parent_side = [&](std::int64_t, Rng& rng, Slot& acc) {
        const PointPattern pat = sample_parent_palm(spec, cfg, rng);
        for (std::size_t i = 0; i < ws.size(); ++i) {
            double total = 0.0;
            for (std::size_t k = 0; k < pat.points.size(); ++k) {
                if (pat.marks[k].cluster_id == kParentPalmCluster) {
                    total += ws[i].eval(pat, k);
                }
            }
            acc[i].add(total);
        }
    };

    std::uint64_t mix = cfg.seed;
    const std::uint64_t rhs_seed = splitmix64(mix);
    const Slot lhs = run_replications<Slot>(cfg.replications, cfg.seed, make, palm_side, merge);
    const Slot rhs = run_replications<Slot>(cfg.replications, rhs_seed, make, parent_side, merge);

    const auto diverges = [](const Accumulator& a) {
        return !std::isfinite(a.sum_sq) || (a.n > 100 && a.max_sq > 0.5 * a.sum_sq);
    };
    std::vector<ExchangeResult> out;
    for (std::size_t i = 0; i < ws.size(); ++i) {
        ExchangeResult r;
        r.lhs = lhs[i].estimate(spec.lambda_total(), cfg.confidence_level, cfg.seed);
        r.rhs = rhs[i].estimate(spec.lambda_parent, cfg.confidence_level, rhs_seed);
        r.divergent = diverges(lhs[i]) || diverges(rhs[i]);
        out.push_back(r);
    }
    return out;
}

ExchangeResult verify_exchange(const ClusterSpec& spec, const PalmFunctional& w, const SimConfig& cfg) {
    return verify_exchange(spec, std::vector<PalmFunctional>{w}, cfg).front();
}

}  // namespace ppcp

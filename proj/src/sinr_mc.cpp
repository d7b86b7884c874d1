#include "ppcp/sinr_mc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ppcp {

void NetworkSpec::validate() const {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("network.p must lie in (0, 1)");
    }
    if (!(beta > 2.0) || !std::isfinite(beta)) {
        throw std::invalid_argument("network.beta must be > 2");
    }
    if (!(noise >= 0.0) || !std::isfinite(noise)) {
        throw std::invalid_argument("network.noise must be >= 0");
    }
    if (!(fading_mean > 0.0)) {
        throw std::invalid_argument("network.fading_mean must be > 0");
    }
}

double NetworkSpec::pathloss(double r) const {
    if (!(r > 0.0)) {
        throw std::domain_error("pathloss: distance must be > 0");
    }
    return std::pow(r, -beta);
}

CensoringError::CensoringError(const std::string& what, std::vector<EstimateCI> partial)
    : std::runtime_error(what), partial_(std::move(partial)) {}

double sinr_at_origin(const PointPattern& pat, const NetworkSpec& net, std::size_t m) {
    if (m >= pat.size() || !pat.has_marks() || !pat.marks[m].is_transmitter) {
        throw std::invalid_argument("sinr_at_origin: m must index a transmitter");
    }
    if (pat.origin_index && *pat.origin_index == m) {
        throw std::invalid_argument("sinr_at_origin: the typical device does not transmit");
    }
    double signal = 0.0;
    double interference = 0.0;
    for (std::size_t j = 0; j < pat.size(); ++j) {
        if (!pat.marks[j].is_transmitter || (pat.origin_index && *pat.origin_index == j)) {
            continue;
        }
        const double fading = pat.marks[j].fading;
        if (!(fading > 0.0)) {
            throw std::invalid_argument("sinr_at_origin: transmitter without fading mark");
        }
        const double d = pat.points[j].norm();
        if (d == 0.0) {
            throw std::domain_error("sinr_at_origin: transmitter at distance 0");
        }
        const double received = fading * net.pathloss(d);
        if (j == m) {
            signal = received;
        } else {
            interference += received;
        }
    }
    return signal / (interference + net.noise);
}

void draw_fading(PointPattern& pat, const NetworkSpec& net, Rng& rng) {
    for (std::size_t j = 0; j < pat.marks.size(); ++j) {
        Mark& m = pat.marks[j];
        if (m.is_transmitter && !(pat.origin_index && *pat.origin_index == j)) {
            m.fading = net.fading_mean * rng.exponential();
        }
    }
}

namespace {

struct TxSample {
    std::vector<double> power;
    std::vector<double> d2;
    std::size_t nearest = 0;
    double nearest_d2 = std::numeric_limits<double>::infinity();
    double total = 0.0;
};

double received_power(double d2, double fading, double beta) {
    if (beta == 4.0) {
        return fading / (d2 * d2);
    }
    return fading * std::pow(d2, -0.5 * beta);
}

// Transmitters of the Palm PPCP within the window, as received powers at the
// origin. p-thinning of a Poisson(mu) cluster is a Poisson(p mu) cluster, so
// transmitters are drawn directly; the typical device is receiving and absent.
// Returns false if a transmitter landed exactly on the origin.
bool sample_transmitters(const ClusterSpec& spec, const NetworkSpec& net, const SimConfig& cfg, double dilation,
                         Rng& rng, TxSample& out) {
    out.power.clear();
    out.d2.clear();
    out.nearest_d2 = std::numeric_limits<double>::infinity();
    out.total = 0.0;
    const double w2 = cfg.window_radius * cfg.window_radius;
    const double tx_mu = net.p * spec.mu;
    bool ok = true;
    const auto add_cluster = [&](Point parent) {
        const auto count = rng.poisson(tx_mu);
        for (std::uint64_t i = 0; i < count; ++i) {
            const Point y = parent + spec.kernel.sample_offset(rng);
            const double d2 = y.norm2();
            if (d2 > w2) {
                continue;
            }
            if (d2 == 0.0) {
                ok = false;
            }
            const double pw = received_power(d2, net.fading_mean * rng.exponential(), net.beta);
            if (d2 < out.nearest_d2) {
                out.nearest_d2 = d2;
                out.nearest = out.power.size();
            }
            out.power.push_back(pw);
            out.d2.push_back(d2);
            out.total += pw;
        }
    };

    const double outer = cfg.window_radius + dilation;
    const auto parents = rng.poisson(spec.lambda_parent * kPi * outer * outer);
    for (std::uint64_t j = 0; j < parents; ++j) {
        const double rad = outer * std::sqrt(rng.uniform());
        const double ang = 2.0 * kPi * rng.uniform();
        add_cluster(Point{rad * std::cos(ang), rad * std::sin(ang)});
    }
    const Point z = spec.kernel.sample_offset(rng);
    add_cluster(Point{-z.x, -z.y});
    return ok;
}

// SINR_j > theta  <=>  P_j (1 + theta) > theta (S + N), with S the total power.
bool decodes(double power, double total, double theta, double noise) {
    return power * (1.0 + theta) > theta * (total + noise);
}

struct GridSlot {
    std::vector<Accumulator> coverage;
    std::vector<Accumulator> discovery;
};

void check_censoring(const Accumulator& acc, const std::vector<EstimateCI>& partial) {
    const double total = static_cast<double>(acc.n + acc.censored);
    if (total > 0.0 && static_cast<double>(acc.censored) / total > kMaxCensoredFraction) {
        throw CensoringError("censored replications " + std::to_string(acc.censored) + " of " +
                                 std::to_string(acc.n + acc.censored) +
                                 " exceed the 0.1% budget; enlarge sim.window_radius",
                             partial);
    }
}

}  // namespace

SinrGridEstimate estimate_sinr_grid(const ClusterSpec& spec, const NetworkSpec& net,
                                    const std::vector<double>& thetas, const SimConfig& cfg) {
    spec.validate();
    net.validate();
    cfg.validate();
    for (double t : thetas) {
        if (!(t > 0.0)) {
            throw std::domain_error("estimate_sinr_grid: theta must be > 0");
        }
    }
    const double dilation = spec.kernel.truncation_radius(cfg.tail_eps);
    const std::function<GridSlot()> make = [&] {
        return GridSlot{std::vector<Accumulator>(thetas.size()), std::vector<Accumulator>(thetas.size())};
    };
    const std::function<void(GridSlot&, const GridSlot&)> merge = [](GridSlot& into, const GridSlot& from) {
        for (std::size_t i = 0; i < into.coverage.size(); ++i) {
            into.coverage[i].merge(from.coverage[i]);
            into.discovery[i].merge(from.discovery[i]);
        }
    };
    const std::function<void(std::int64_t, Rng&, GridSlot&)> body = [&](std::int64_t, Rng& rng, GridSlot& slot) {
        thread_local TxSample tx;
        while (!sample_transmitters(spec, net, cfg, dilation, rng, tx)) {
        }
        if (tx.power.empty()) {
            for (std::size_t i = 0; i < thetas.size(); ++i) {
                slot.coverage[i].censor();
                slot.discovery[i].censor();
            }
            return;
        }
        // Only powers above the smallest decoding threshold can count.
        const double theta_min = *std::min_element(thetas.begin(), thetas.end());
        const double floor = theta_min * (tx.total + net.noise) / (1.0 + theta_min);
        thread_local std::vector<double> strong;
        strong.clear();
        for (double pw : tx.power) {
            if (pw > floor) {
                strong.push_back(pw);
            }
        }
        const double nearest_power = tx.power[tx.nearest];
        for (std::size_t i = 0; i < thetas.size(); ++i) {
            const double theta = thetas[i];
            slot.coverage[i].add(decodes(nearest_power, tx.total, theta, net.noise) ? 1.0 : 0.0);
            double count = 0.0;
            for (double pw : strong) {
                if (decodes(pw, tx.total, theta, net.noise)) {
                    count += 1.0;
                }
            }
            slot.discovery[i].add(count);
        }
    };
    const GridSlot total = run_replications<GridSlot>(cfg.replications, cfg.seed, make, body, merge);

    SinrGridEstimate out;
    out.thetas = thetas;
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        out.coverage.push_back(total.coverage[i].estimate(1.0 - net.p, cfg.confidence_level, cfg.seed));
        out.discovery.push_back(total.discovery[i].estimate(1.0 - net.p, cfg.confidence_level, cfg.seed));
    }
    if (!thetas.empty()) {
        std::vector<EstimateCI> partial = out.coverage;
        partial.insert(partial.end(), out.discovery.begin(), out.discovery.end());
        check_censoring(total.coverage.front(), partial);
    }
    return out;
}

WindowDoubling estimate_window_doubling(const ClusterSpec& spec, const NetworkSpec& net,
                                       const std::vector<double>& thetas, const SimConfig& cfg) {
    spec.validate();
    net.validate();
    cfg.validate();
    SimConfig wide = cfg;
    wide.window_radius = 2.0 * cfg.window_radius;
    const double inner2 = cfg.window_radius * cfg.window_radius;
    const double dilation = spec.kernel.truncation_radius(cfg.tail_eps);
    // Slots 0..n-1 hold the base window, n..2n-1 the doubled one.
    const std::size_t n = thetas.size();
    const std::function<GridSlot()> make = [&] {
        return GridSlot{std::vector<Accumulator>(2 * n), std::vector<Accumulator>(2 * n)};
    };
    const std::function<void(GridSlot&, const GridSlot&)> merge = [](GridSlot& into, const GridSlot& from) {
        for (std::size_t i = 0; i < into.coverage.size(); ++i) {
            into.coverage[i].merge(from.coverage[i]);
            into.discovery[i].merge(from.discovery[i]);
        }
    };
    const auto record = [&](GridSlot& slot, std::size_t offset, const TxSample& tx, double w2) {
        double total = 0.0;
        double nearest_d2 = std::numeric_limits<double>::infinity();
        double nearest_power = 0.0;
        for (std::size_t j = 0; j < tx.power.size(); ++j) {
            if (tx.d2[j] > w2) {
                continue;
            }
            total += tx.power[j];
            if (tx.d2[j] < nearest_d2) {
                nearest_d2 = tx.d2[j];
                nearest_power = tx.power[j];
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (!std::isfinite(nearest_d2)) {
                slot.coverage[offset + i].censor();
                slot.discovery[offset + i].censor();
                continue;
            }
            slot.coverage[offset + i].add(decodes(nearest_power, total, thetas[i], net.noise) ? 1.0 : 0.0);
            double count = 0.0;
            for (std::size_t j = 0; j < tx.power.size(); ++j) {
                if (tx.d2[j] <= w2 && decodes(tx.power[j], total, thetas[i], net.noise)) {
                    count += 1.0;
                }
            }
            slot.discovery[offset + i].add(count);
        }
    };
    const std::function<void(std::int64_t, Rng&, GridSlot&)> body = [&](std::int64_t, Rng& rng, GridSlot& slot) {
        thread_local TxSample tx;
        while (!sample_transmitters(spec, net, wide, dilation, rng, tx)) {
        }
        record(slot, 0, tx, inner2);
        record(slot, n, tx, std::numeric_limits<double>::infinity());
    };
    const GridSlot total = run_replications<GridSlot>(cfg.replications, cfg.seed, make, body, merge);
    WindowDoubling out;
    out.base.thetas = thetas;
    out.doubled.thetas = thetas;
    for (std::size_t i = 0; i < n; ++i) {
        out.base.coverage.push_back(total.coverage[i].estimate(1.0 - net.p, cfg.confidence_level, cfg.seed));
        out.base.discovery.push_back(total.discovery[i].estimate(1.0 - net.p, cfg.confidence_level, cfg.seed));
        out.doubled.coverage.push_back(total.coverage[n + i].estimate(1.0 - net.p, cfg.confidence_level, cfg.seed));
        out.doubled.discovery.push_back(
            total.discovery[n + i].estimate(1.0 - net.p, cfg.confidence_level, cfg.seed));
    }
    if (n > 0) {
        check_censoring(total.coverage.front(), out.base.coverage);
    }
    return out;
}

EstimateCI estimate_coverage(const ClusterSpec& spec, const NetworkSpec& net, double theta, const SimConfig& cfg) {
    return estimate_sinr_grid(spec, net, {theta}, cfg).coverage.front();
}

EstimateCI estimate_discovery(const ClusterSpec& spec, const NetworkSpec& net, double theta, const SimConfig& cfg) {
    return estimate_sinr_grid(spec, net, {theta}, cfg).discovery.front();
}

std::vector<EstimateCI> estimate_nnd(const ClusterSpec& spec, const std::vector<double>& r_grid,
                                     const SimConfig& cfg) {
    spec.validate();
    cfg.validate();
    if (!std::is_sorted(r_grid.begin(), r_grid.end())) {
        throw std::invalid_argument("estimate_nnd: r_grid must be sorted ascending");
    }
    using Slot = std::vector<Accumulator>;
    const double r_max = r_grid.empty() ? 0.0 : r_grid.back();
    const std::function<Slot()> make = [&] { return Slot(r_grid.size()); };
    const std::function<void(Slot&, const Slot&)> merge = [](Slot& into, const Slot& from) {
        for (std::size_t i = 0; i < into.size(); ++i) {
            into[i].merge(from[i]);
        }
    };
    const std::function<void(std::int64_t, Rng&, Slot&)> body = [&](std::int64_t, Rng& rng, Slot& acc) {
        const PointPattern pat = sample_palm_ppcp(spec, cfg, rng);
        const auto nearest = nearest_neighbor(pat);
        if (!nearest && cfg.window_radius < r_max) {
            for (auto& a : acc) {
                a.censor();
            }
            return;
        }
        const double d = nearest ? nearest->distance : std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < r_grid.size(); ++i) {
            acc[i].add(d > r_grid[i] ? 1.0 : 0.0);
        }
    };
    const Slot total = run_replications<Slot>(cfg.replications, cfg.seed, make, body, merge);
    std::vector<EstimateCI> out;
    for (const auto& a : total) {
        out.push_back(a.estimate(1.0, cfg.confidence_level, cfg.seed));
    }
    if (!total.empty()) {
        check_censoring(total.front(), out);
    }
    return out;
}

EstimateCI estimate_ppp_coverage(double lambda_total, const NetworkSpec& net, double theta, const SimConfig& cfg) {
    net.validate();
    cfg.validate();
    if (!(lambda_total > 0.0) || !(theta > 0.0)) {
        throw std::domain_error("estimate_ppp_coverage: need lambda_total > 0 and theta > 0");
    }
    const std::function<Accumulator()> make = [] { return Accumulator{}; };
    const std::function<void(Accumulator&, const Accumulator&)> merge = [](Accumulator& a, const Accumulator& b) {
        a.merge(b);
    };
    const std::function<void(std::int64_t, Rng&, Accumulator&)> body = [&](std::int64_t, Rng& rng, Accumulator& acc) {
        // Slivnyak: the other devices of a Palm PPP form the same PPP.
        const PointPattern tx = sample_parent_ppp(net.p * lambda_total, Disk{{}, cfg.window_radius}, rng);
        if (tx.size() == 0) {
            acc.censor();
            return;
        }
        double total = 0.0;
        double nearest_d2 = std::numeric_limits<double>::infinity();
        double nearest_power = 0.0;
        for (const Point& y : tx.points) {
            const double d2 = y.norm2();
            const double pw = received_power(d2, net.fading_mean * rng.exponential(), net.beta);
            total += pw;
            if (d2 < nearest_d2) {
                nearest_d2 = d2;
                nearest_power = pw;
            }
        }
        acc.add(decodes(nearest_power, total, theta, net.noise) ? 1.0 : 0.0);
    };
    const Accumulator total = run_replications<Accumulator>(cfg.replications, cfg.seed, make, body, merge);
    const EstimateCI e = total.estimate(1.0 - net.p, cfg.confidence_level, cfg.seed);
    check_censoring(total, {e});
    return e;
}

}  // namespace ppcp

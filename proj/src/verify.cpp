#include <cmath>
#include <cstdio>

#include "ppcp/coverage_analytic.hpp"
#include "ppcp/experiment.hpp"
#include "ppcp/palm_analytic.hpp"

namespace ppcp {

namespace {

std::string fmt(const char* pattern, double a, double b, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

// Within k standard errors of the estimate.
bool within(const EstimateCI& e, double value, double k) { return std::abs(e.mean - value) <= k * e.std_err; }

ClusterSpec figure_cluster(double sigma2) { return ClusterSpec{1.0 / kPi, 10.0, OffspringKernel::thomas(sigma2)}; }

std::vector<CheckResult> palm_suite(std::int64_t reps, std::uint64_t seed) {
    std::vector<CheckResult> out;
    const ClusterSpec spec = figure_cluster(1.0);

    const double term = palm_intensity_cluster_term(spec, 2.0);
    const double golden = 10.0 * (1.0 - std::exp(-1.0));
    out.push_back({"palm intensity cluster term at r=2", std::abs(term - golden) < 1e-6,
                   fmt("%.9f vs %.9f", term, golden)});

    double worst = 0.0;
    for (int i = 1; i <= 30; ++i) {
        const double r = 0.1 * i;
        worst = std::max(worst, std::abs(nnd_ccdf(spec, r) - palm_pgfl(spec, RadialTestFunction::ball_complement(r))));
    }
    out.push_back({"nnd_ccdf equals palm_pgfl of the ball void indicator", worst <= 1e-12, fmt("max gap %.3g", worst, 0)});

    SimConfig cfg;
    cfg.window_radius = 6.0;
    cfg.replications = reps;
    cfg.seed = seed;
    const std::vector<PalmFunctional> counts{PalmFunctional::reduced_ball_count(0.5), PalmFunctional::reduced_ball_count(1.0),
                                             PalmFunctional::reduced_ball_count(2.0)};
    const std::vector<double> radii{0.5, 1.0, 2.0};
    std::vector<Accumulator> acc(radii.size());
    const std::function<std::vector<Accumulator>()> make = [&] { return std::vector<Accumulator>(radii.size()); };
    const std::function<void(std::int64_t, Rng&, std::vector<Accumulator>&)> body =
        [&](std::int64_t, Rng& rng, std::vector<Accumulator>& a) {
            const PointPattern pat = sample_palm_ppcp(spec, cfg, rng);
            for (std::size_t i = 0; i < radii.size(); ++i) {
                a[i].add(counts[i].eval(pat, *pat.origin_index));
            }
        };
    const std::function<void(std::vector<Accumulator>&, const std::vector<Accumulator>&)> merge =
        [](std::vector<Accumulator>& a, const std::vector<Accumulator>& b) {
            for (std::size_t i = 0; i < a.size(); ++i) {
                a[i].merge(b[i]);
            }
        };
    acc = run_replications<std::vector<Accumulator>>(reps, seed, make, body, merge);
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const EstimateCI e = acc[i].estimate(1.0, 0.95, seed);
        const double expect = palm_intensity_ball(spec, radii[i]);
        out.push_back({"Palm ball count at r=" + format_number(radii[i]) + " within 3 SE", within(e, expect, 3.0),
                       fmt("mc %.5f se %.5f analytic %.5f", e.mean, e.std_err, expect)});
    }

    SimConfig nnd_cfg = cfg;
    nnd_cfg.window_radius = 3.0;
    const std::vector<double> grid{0.25, 0.5, 1.0, 2.0, 3.0};
    const auto est = estimate_nnd(spec, grid, nnd_cfg);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double expect = nnd_ccdf(spec, grid[i]);
        out.push_back({"nearest-neighbour CCDF at r=" + format_number(grid[i]) + " within 3 SE",
                       within(est[i], expect, 3.0), fmt("mc %.5f se %.5f analytic %.5f", est[i].mean, est[i].std_err, expect)});
    }
    return out;
}

std::vector<CheckResult> exchange_suite(std::int64_t reps, std::uint64_t seed) {
    const ClusterSpec spec = figure_cluster(1.0);
    SimConfig cfg;
    cfg.window_radius = 10.0;
    cfg.replications = reps;
    cfg.seed = seed;
    const RadialTestFunction dip = RadialTestFunction::gaussian_dip(0.3, 0.5, 2.0);
    const std::vector<PalmFunctional> ws{PalmFunctional::one(), PalmFunctional::reduced_ball_count(1.0),
                                         PalmFunctional::pgfl_product(dip)};
    const auto results = verify_exchange(spec, ws, cfg);
    std::vector<CheckResult> out;
    for (std::size_t i = 0; i < ws.size(); ++i) {
        const auto& r = results[i];
        out.push_back({"exchange formula, W = " + ws[i].name, r.consistent(),
                       fmt("lhs %.5f [%.5f, ", r.lhs.mean, r.lhs.ci_low, 0) +
                           fmt("%.5f] rhs %.5f [", r.lhs.ci_high, r.rhs.mean) +
                           fmt("%.5f, %.5f]", r.rhs.ci_low, r.rhs.ci_high)});
    }
    const double target = spec.lambda_total();
    const double rel = std::abs(results[0].rhs.mean - target) / target;
    out.push_back({"exchange formula, W = 1 matches lambda_Phi mu within 1%", rel < 0.01, fmt("relative gap %.4f", rel, 0)});
    return out;
}

std::vector<CheckResult> coverage_suite(std::int64_t reps, std::uint64_t seed) {
    std::vector<CheckResult> out;
    const double disc = ppp_discovery(1.0, 0.5, 4.0);
    out.push_back({"PPP discovery closed form", std::abs(disc - 1.0 / kPi) < 1e-9, fmt("%.12f", disc, 0)});
    const double cov = ppp_coverage(1.0, 0.5, 10.0 / kPi, 4.0);
    const double cov_exact = 0.5 / (1.0 + kPi / 4.0);
    out.push_back({"PPP coverage quadrature", std::abs(cov - cov_exact) < 1e-6, fmt("%.10f vs %.10f", cov, cov_exact)});

    const ClusterSpec spec = figure_cluster(1.0);
    const NetworkSpec net{0.5, 4.0, 0.0};
    SimConfig cfg;
    cfg.window_radius = default_window_radius(spec);
    cfg.replications = reps;
    cfg.seed = seed;
    const auto mc = estimate_sinr_grid(spec, net, {1.0}, cfg);
    const double cp = coverage(1.0, spec, net).value;
    const double nd = discovery(1.0, spec, net).value;
    out.push_back({"coverage at theta=1 within 3 SE of Monte Carlo", within(mc.coverage[0], cp, 3.0),
                   fmt("analytic %.5f mc %.5f se %.5f", cp, mc.coverage[0].mean, mc.coverage[0].std_err)});
    out.push_back({"discovery at theta=1 within 3 SE of Monte Carlo", within(mc.discovery[0], nd, 3.0),
                   fmt("analytic %.5f mc %.5f se %.5f", nd, mc.discovery[0].mean, mc.discovery[0].std_err)});
    return out;
}

}  // namespace

std::vector<CheckResult> run_verify_suite(const std::string& suite, std::int64_t replications, std::uint64_t seed) {
    if (suite == "palm") {
        return palm_suite(replications, seed);
    }
    if (suite == "exchange") {
        return exchange_suite(replications, seed);
    }
    if (suite == "coverage") {
        return coverage_suite(replications, seed);
    }
    throw ConfigError("suite", "expected palm, exchange or coverage");
}

}  // namespace ppcp

#include "ppcp/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "ppcp/palm_analytic.hpp"

namespace ppcp {

namespace {

using nlohmann::json;

constexpr const char* kVersion = "1.0.0";

const json& require(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.contains(key)) {
        throw ConfigError(path + key, "missing required field");
    }
    return obj.at(key);
}

double number(const json& v, const std::string& field) {
    if (!v.is_number()) {
        throw ConfigError(field, "expected a number");
    }
    return v.get<double>();
}

double number_or(const json& obj, const std::string& key, double fallback, const std::string& path) {
    return obj.contains(key) ? number(obj.at(key), path + key) : fallback;
}

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& path) {
    if (!obj.is_object()) {
        throw ConfigError(path.empty() ? "<root>" : path.substr(0, path.size() - 1), "expected an object");
    }
    for (const auto& [key, _] : obj.items()) {
        if (!known.count(key)) {
            throw ConfigError(path + key, "unknown field");
        }
    }
}

std::vector<double> sorted_positive_list(const json& v, const std::string& field, bool allow_zero) {
    if (!v.is_array() || v.empty()) {
        throw ConfigError(field, "expected a nonempty array of numbers");
    }
    std::vector<double> out;
    for (const auto& x : v) {
        const double d = number(x, field);
        if (!(allow_zero ? d >= 0.0 : d > 0.0) || !std::isfinite(d)) {
            throw ConfigError(field, allow_zero ? "values must be >= 0" : "values must be > 0");
        }
        out.push_back(d);
    }
    if (!std::is_sorted(out.begin(), out.end())) {
        throw ConfigError(field, "values must be sorted ascending");
    }
    return out;
}

OffspringKernel parse_kernel(const json& k) {
    reject_unknown(k, {"type", "sigma2", "radius"}, "cluster.kernel.");
    const json& type = require(k, "type", "cluster.kernel.");
    if (type == "thomas") {
        const double s2 = number(require(k, "sigma2", "cluster.kernel."), "cluster.kernel.sigma2");
        if (!(s2 > 0.0)) {
            throw ConfigError("cluster.kernel.sigma2", "must be > 0");
        }
        return OffspringKernel::thomas(s2);
    }
    if (type == "matern") {
        const double r = number(require(k, "radius", "cluster.kernel."), "cluster.kernel.radius");
        if (!(r > 0.0)) {
            throw ConfigError("cluster.kernel.radius", "must be > 0");
        }
        return OffspringKernel::matern(r);
    }
    throw ConfigError("cluster.kernel.type", "expected \"thomas\" or \"matern\"");
}

json kernel_json(const OffspringKernel& k) {
    if (const auto* t = std::get_if<Thomas>(&k.variant())) {
        return {{"type", "thomas"}, {"sigma2", t->sigma2}};
    }
    return {{"type", "matern"}, {"radius", std::get<Matern>(k.variant()).radius}};
}

const char* mode_name(ExperimentMode m) {
    switch (m) {
        case ExperimentMode::coverage:
            return "coverage";
        case ExperimentMode::discovery:
            return "discovery";
        case ExperimentMode::nnd:
            return "nnd";
        case ExperimentMode::palm_verify:
            return "palm-verify";
    }
    return "coverage";
}

// One row per swept kernel.
std::vector<ClusterSpec> swept_clusters(const ExperimentConfig& c) {
    if (c.sigma2_list.empty()) {
        return {c.cluster};
    }
    std::vector<ClusterSpec> out;
    for (double s2 : c.sigma2_list) {
        out.push_back(ClusterSpec{c.cluster.lambda_parent, c.cluster.mu, OffspringKernel::thomas(s2)});
    }
    return out;
}

std::string kernel_param(const ClusterSpec& spec) {
    if (const auto* t = std::get_if<Thomas>(&spec.kernel.variant())) {
        return format_number(t->sigma2);
    }
    return format_number(std::get<Matern>(spec.kernel.variant()).radius);
}

const char* kernel_param_name(const ExperimentConfig& c) {
    return c.cluster.kernel.is_thomas() || !c.sigma2_list.empty() ? "sigma2" : "radius";
}

std::vector<std::string> mc_cells(const EstimateCI& e) {
    return {format_number(e.mean),    format_number(e.std_err),     format_number(e.ci_low),
            format_number(e.ci_high), std::to_string(e.n_effective), std::to_string(e.n_censored)};
}

std::vector<std::string> empty_cells(std::size_t n) { return std::vector<std::string>(n); }

SimConfig sim_for(const ExperimentConfig& c, const ClusterSpec& spec, double window) {
    SimConfig sim = c.sim;
    sim.replications = std::max<std::int64_t>(c.replications, 1);
    sim.window_radius = c.sim_window_default ? window : c.sim.window_radius;
    (void)spec;
    return sim;
}

void run_link_rows(const ExperimentConfig& c, RunReport& report) {
    const LinkMode mode = c.mode == ExperimentMode::coverage ? LinkMode::nearest : LinkMode::discovery;
    report.header = {kernel_param_name(c), "theta", "analytic",   "achieved_tol", "mc_mean", "mc_std_err",
                     "mc_ci_low",          "mc_ci_high", "n", "n_censored", "ppp",     "status"};
    for (const ClusterSpec& spec : swept_clusters(c)) {
        std::vector<std::optional<EstimateCI>> mc(c.theta_grid.size());
        std::string mc_status = "ok";
        if (c.replications > 0) {
            const SimConfig sim = sim_for(c, spec, default_window_radius(spec));
            try {
                const SinrGridEstimate g = estimate_sinr_grid(spec, c.network, c.theta_grid, sim);
                const auto& col = mode == LinkMode::nearest ? g.coverage : g.discovery;
                for (std::size_t i = 0; i < col.size(); ++i) {
                    mc[i] = col[i];
                }
            } catch (const CensoringError& e) {
                report.status.censoring_failed = true;
                report.status.messages.push_back(e.what());
                mc_status = "censored";
                const std::size_t offset = mode == LinkMode::nearest ? 0 : c.theta_grid.size();
                for (std::size_t i = 0; i < c.theta_grid.size() && offset + i < e.partial().size(); ++i) {
                    mc[i] = e.partial()[offset + i];
                }
            }
        }
        for (std::size_t i = 0; i < c.theta_grid.size(); ++i) {
            const double theta = c.theta_grid[i];
            std::string status = mc_status;
            AnalyticResult a;
            try {
                a = link_metric(theta, spec, c.network, mode, c.quad);
            } catch (const ConvergenceError& e) {
                a = e.partial();
                status = "unconverged";
                report.status.convergence_failed = true;
                report.status.messages.push_back(std::string(e.what()) + " at theta=" + format_number(theta));
            }
            std::vector<std::string> row{kernel_param(spec), format_number(theta), format_number(a.value),
                                         format_number(a.achieved_tol)};
            const auto cells = mc[i] ? mc_cells(*mc[i]) : empty_cells(6);
            row.insert(row.end(), cells.begin(), cells.end());
            std::string ppp;
            if (c.network.noise == 0.0) {
                ppp = format_number(mode == LinkMode::nearest
                                        ? ppp_coverage(theta, c.network.p, spec.lambda_total(), c.network.beta)
                                        : ppp_discovery(theta, c.network.p, c.network.beta));
            }
            row.push_back(ppp);
            row.push_back(status);
            report.rows.push_back(std::move(row));
        }
    }
}

void run_nnd_rows(const ExperimentConfig& c, RunReport& report) {
    report.header = {kernel_param_name(c), "r", "analytic", "mc_mean", "mc_std_err", "mc_ci_low",
                     "mc_ci_high",         "n", "n_censored", "status"};
    for (const ClusterSpec& spec : swept_clusters(c)) {
        std::vector<std::optional<EstimateCI>> mc(c.r_grid.size());
        std::string status = "ok";
        if (c.replications > 0) {
            // Points beyond the largest radius never change the CCDF on the grid.
            const SimConfig sim = sim_for(c, spec, std::max(c.r_grid.back(), 1.0));
            try {
                const auto est = estimate_nnd(spec, c.r_grid, sim);
                for (std::size_t i = 0; i < est.size(); ++i) {
                    mc[i] = est[i];
                }
            } catch (const CensoringError& e) {
                report.status.censoring_failed = true;
                report.status.messages.push_back(e.what());
                status = "censored";
                for (std::size_t i = 0; i < e.partial().size() && i < mc.size(); ++i) {
                    mc[i] = e.partial()[i];
                }
            }
        }
        for (std::size_t i = 0; i < c.r_grid.size(); ++i) {
            std::vector<std::string> row{kernel_param(spec), format_number(c.r_grid[i]),
                                         format_number(nnd_ccdf(spec, c.r_grid[i], c.quad))};
            const auto cells = mc[i] ? mc_cells(*mc[i]) : empty_cells(6);
            row.insert(row.end(), cells.begin(), cells.end());
            row.push_back(status);
            report.rows.push_back(std::move(row));
        }
    }
}

void run_palm_verify_rows(const ExperimentConfig& c, RunReport& report) {
    report.header = {kernel_param_name(c), "functional", "analytic", "lhs_mean", "lhs_ci_low", "lhs_ci_high",
                     "rhs_mean",           "rhs_ci_low", "rhs_ci_high", "n",     "overlap",    "divergent"};
    const RadialTestFunction dip = RadialTestFunction::gaussian_dip(0.3, 0.5, 2.0);
    const std::vector<PalmFunctional> ws{PalmFunctional::one(), PalmFunctional::reduced_ball_count(1.0),
                                         PalmFunctional::pgfl_product(dip)};
    for (const ClusterSpec& spec : swept_clusters(c)) {
        const double window = dip.support + spec.kernel.truncation_radius(c.sim.tail_eps) + 1.0;
        const SimConfig sim = sim_for(c, spec, window);
        const std::vector<double> analytic{spec.lambda_total(),
                                           spec.lambda_total() * palm_intensity_ball(spec, 1.0, c.quad),
                                           spec.lambda_total() * palm_pgfl(spec, dip, c.quad)};
        const auto results = verify_exchange(spec, ws, sim);
        for (std::size_t i = 0; i < ws.size(); ++i) {
            const ExchangeResult& r = results[i];
            report.rows.push_back({kernel_param(spec), ws[i].name, format_number(analytic[i]),
                                   format_number(r.lhs.mean), format_number(r.lhs.ci_low),
                                   format_number(r.lhs.ci_high), format_number(r.rhs.mean),
                                   format_number(r.rhs.ci_low), format_number(r.rhs.ci_high),
                                   std::to_string(r.lhs.n_effective), r.lhs.overlaps(r.rhs) ? "1" : "0",
                                   r.divergent ? "1" : "0"});
        }
    }
}

std::string gnuplot_script(const ExperimentConfig& c, const std::filesystem::path& csv) {
    std::ostringstream gp;
    const bool link = c.mode == ExperimentMode::coverage || c.mode == ExperimentMode::discovery;
    gp << "set datafile separator ','\n"
       << "set key autotitle columnhead\n";
    if (link) {
        gp << "set logscale x\n"
           << "set xlabel 'SINR threshold'\n"
           << "set ylabel '" << (c.mode == ExperimentMode::coverage ? "coverage probability" : "discovered devices")
           << "'\n";
    }
    gp << "plot";
    const auto clusters = swept_clusters(c);
    for (std::size_t k = 0; k < clusters.size(); ++k) {
        const std::string param = kernel_param(clusters[k]);
        gp << (k ? "," : "") << " '" << csv.string() << "' using 2:($1==" << param << " ? $3 : 1/0) with lines title '"
           << kernel_param_name(c) << "=" << param << "'";
        if (c.replications > 0) {
            gp << ", '' using 2:($1==" << param << " ? $5 : 1/0):7:8 with yerrorbars notitle";
        }
    }
    if (link && c.network.noise == 0.0) {
        gp << ", '' using 2:11 with lines dashtype 2 title 'PPP'";
    }
    gp << "\n";
    return gp.str();
}

}  // namespace

ConfigError::ConfigError(std::string field, const std::string& message)
    : std::runtime_error("config field '" + field + "': " + message), field_(std::move(field)) {}

ExperimentConfig parse_config(const json& root_in) {
    const json& root = root_in.contains("config") && root_in.contains("manifest_version") ? root_in.at("config")
                                                                                          : root_in;
    reject_unknown(root,
                   {"cluster", "network", "mode", "theta_grid", "sigma2_list", "r_grid", "sim", "quad",
                    "output_path", "gnuplot"},
                   "");
    ExperimentConfig c;

    const json& cl = require(root, "cluster", "");
    reject_unknown(cl, {"lambda_parent", "mu", "kernel"}, "cluster.");
    const double lambda = number(require(cl, "lambda_parent", "cluster."), "cluster.lambda_parent");
    const double mu = number(require(cl, "mu", "cluster."), "cluster.mu");
    if (!(lambda > 0.0)) {
        throw ConfigError("cluster.lambda_parent", "must be > 0");
    }
    if (!(mu > 0.0)) {
        throw ConfigError("cluster.mu", "must be > 0");
    }
    c.cluster = ClusterSpec{lambda, mu, parse_kernel(require(cl, "kernel", "cluster."))};

    if (root.contains("network")) {
        const json& net = root.at("network");
        reject_unknown(net, {"p", "beta", "noise"}, "network.");
        c.network.p = number_or(net, "p", c.network.p, "network.");
        c.network.beta = number_or(net, "beta", c.network.beta, "network.");
        c.network.noise = number_or(net, "noise", c.network.noise, "network.");
    }
    if (!(c.network.p > 0.0 && c.network.p < 1.0)) {
        throw ConfigError("network.p", "must lie in (0, 1)");
    }
    if (!(c.network.beta > 2.0)) {
        throw ConfigError("network.beta", "must be > 2");
    }
    if (!(c.network.noise >= 0.0)) {
        throw ConfigError("network.noise", "must be >= 0");
    }

    const std::string mode = root.contains("mode") ? root.at("mode").get<std::string>() : "coverage";
    if (mode == "coverage") {
        c.mode = ExperimentMode::coverage;
    } else if (mode == "discovery") {
        c.mode = ExperimentMode::discovery;
    } else if (mode == "nnd") {
        c.mode = ExperimentMode::nnd;
    } else if (mode == "palm-verify") {
        c.mode = ExperimentMode::palm_verify;
    } else {
        throw ConfigError("mode", "expected coverage, discovery, nnd or palm-verify");
    }

    if (c.mode == ExperimentMode::coverage || c.mode == ExperimentMode::discovery) {
        c.theta_grid = sorted_positive_list(require(root, "theta_grid", ""), "theta_grid", false);
    } else if (root.contains("theta_grid")) {
        c.theta_grid = sorted_positive_list(root.at("theta_grid"), "theta_grid", false);
    }
    if (c.mode == ExperimentMode::nnd) {
        c.r_grid = sorted_positive_list(require(root, "r_grid", ""), "r_grid", true);
    } else if (root.contains("r_grid")) {
        c.r_grid = sorted_positive_list(root.at("r_grid"), "r_grid", true);
    }
    if (root.contains("sigma2_list")) {
        c.sigma2_list = sorted_positive_list(root.at("sigma2_list"), "sigma2_list", false);
        if (!c.cluster.kernel.is_thomas()) {
            throw ConfigError("sigma2_list", "only valid with a thomas kernel");
        }
    }

    if (root.contains("sim")) {
        const json& sim = root.at("sim");
        reject_unknown(sim, {"window_radius", "tail_eps", "replications", "seed", "confidence_level"}, "sim.");
        if (sim.contains("window_radius") && !sim.at("window_radius").is_null()) {
            c.sim.window_radius = number(sim.at("window_radius"), "sim.window_radius");
            c.sim_window_default = false;
            if (!(c.sim.window_radius > 0.0)) {
                throw ConfigError("sim.window_radius", "must be > 0");
            }
        }
        c.sim.tail_eps = number_or(sim, "tail_eps", c.sim.tail_eps, "sim.");
        if (!(c.sim.tail_eps > 0.0 && c.sim.tail_eps < 1.0)) {
            throw ConfigError("sim.tail_eps", "must lie in (0, 1)");
        }
        if (sim.contains("replications")) {
            if (!sim.at("replications").is_number_integer() || sim.at("replications").get<std::int64_t>() < 0) {
                throw ConfigError("sim.replications", "expected an integer >= 0");
            }
            c.replications = sim.at("replications").get<std::int64_t>();
        }
        if (sim.contains("seed")) {
            if (!sim.at("seed").is_number_integer()) {
                throw ConfigError("sim.seed", "expected an integer");
            }
            c.sim.seed = sim.at("seed").get<std::uint64_t>();
        }
        c.sim.confidence_level = number_or(sim, "confidence_level", c.sim.confidence_level, "sim.");
        if (!(c.sim.confidence_level > 0.0 && c.sim.confidence_level < 1.0)) {
            throw ConfigError("sim.confidence_level", "must lie in (0, 1)");
        }
    }
    c.sim.replications = std::max<std::int64_t>(c.replications, 1);

    if (root.contains("quad")) {
        const json& q = root.at("quad");
        reject_unknown(q, {"rel_tol", "abs_tol", "trunc_factor", "max_depth"}, "quad.");
        c.quad.rel_tol = number_or(q, "rel_tol", c.quad.rel_tol, "quad.");
        c.quad.abs_tol = number_or(q, "abs_tol", c.quad.abs_tol, "quad.");
        c.quad.trunc_factor = number_or(q, "trunc_factor", c.quad.trunc_factor, "quad.");
        c.quad.max_depth = static_cast<int>(number_or(q, "max_depth", c.quad.max_depth, "quad."));
        try {
            c.quad.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError("quad", e.what());
        }
    }

    if (root.contains("output_path")) {
        if (!root.at("output_path").is_string() || root.at("output_path").get<std::string>().empty()) {
            throw ConfigError("output_path", "expected a nonempty string");
        }
        c.output_path = root.at("output_path").get<std::string>();
    }
    if (root.contains("gnuplot")) {
        if (!root.at("gnuplot").is_boolean()) {
            throw ConfigError("gnuplot", "expected true or false");
        }
        c.gnuplot = root.at("gnuplot").get<bool>();
    }
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("<file>", "cannot open " + path.string());
    }
    json j;
    try {
        j = json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError("<file>", std::string("parse error: ") + e.what());
    }
    try {
        return parse_config(j);
    } catch (const json::exception& e) {
        throw ConfigError("<file>", std::string("type error: ") + e.what());
    }
}

json to_json(const ExperimentConfig& c) {
    json j;
    j["cluster"] = {{"lambda_parent", c.cluster.lambda_parent},
                    {"mu", c.cluster.mu},
                    {"kernel", kernel_json(c.cluster.kernel)}};
    j["network"] = {{"p", c.network.p}, {"beta", c.network.beta}, {"noise", c.network.noise}};
    j["mode"] = mode_name(c.mode);
    if (!c.theta_grid.empty()) {
        j["theta_grid"] = c.theta_grid;
    }
    if (!c.sigma2_list.empty()) {
        j["sigma2_list"] = c.sigma2_list;
    }
    if (!c.r_grid.empty()) {
        j["r_grid"] = c.r_grid;
    }
    j["sim"] = {{"window_radius", c.sim_window_default ? json(nullptr) : json(c.sim.window_radius)},
                {"tail_eps", c.sim.tail_eps},
                {"replications", c.replications},
                {"seed", c.sim.seed},
                {"confidence_level", c.sim.confidence_level}};
    j["quad"] = {{"rel_tol", c.quad.rel_tol},
                 {"abs_tol", c.quad.abs_tol},
                 {"trunc_factor", c.quad.trunc_factor},
                 {"max_depth", c.quad.max_depth}};
    j["output_path"] = c.output_path;
    j["gnuplot"] = c.gnuplot;
    return j;
}

std::vector<double> log_grid(double lo, double hi, int n) {
    if (n < 1 || !(lo > 0.0) || !(hi >= lo)) {
        throw std::invalid_argument("log_grid: need n >= 1 and 0 < lo <= hi");
    }
    std::vector<double> out;
    const double a = std::log10(lo);
    const double b = std::log10(hi);
    for (int i = 0; i < n; ++i) {
        out.push_back(n == 1 ? lo : std::pow(10.0, a + (b - a) * i / (n - 1)));
    }
    return out;
}

ExperimentConfig figure_config(const std::string& figure) {
    ExperimentConfig c;
    c.cluster = ClusterSpec{1.0 / kPi, 10.0, OffspringKernel::thomas(1.0)};
    c.network = NetworkSpec{0.5, 4.0, 0.0};
    c.theta_grid = log_grid(0.01, 100.0, 13);
    c.sigma2_list = {0.25, 1.0, 4.0};
    if (figure == "fig2") {
        c.mode = ExperimentMode::coverage;
        c.output_path = "results/fig2.csv";
    } else if (figure == "fig3") {
        c.mode = ExperimentMode::discovery;
        c.output_path = "results/fig3.csv";
    } else {
        throw ConfigError("figure", "expected fig2 or fig3");
    }
    return c;
}

RunReport run_experiment(const ExperimentConfig& c) {
    RunReport report;
    switch (c.mode) {
        case ExperimentMode::coverage:
        case ExperimentMode::discovery:
            run_link_rows(c, report);
            break;
        case ExperimentMode::nnd:
            run_nnd_rows(c, report);
            break;
        case ExperimentMode::palm_verify:
            run_palm_verify_rows(c, report);
            break;
    }
    return report;
}

std::string format_number(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string to_csv(const RunReport& report) {
    std::string out;
    const auto line = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            out += (i ? "," : "") + cells[i];
        }
        out += '\n';
    };
    line(report.header);
    for (const auto& row : report.rows) {
        line(row);
    }
    return out;
}

std::filesystem::path manifest_path(const std::filesystem::path& csv_path) {
    std::filesystem::path p = csv_path;
    p.replace_extension(".manifest.json");
    return p;
}

RunReport run_and_write(const ExperimentConfig& c) {
    const auto start = std::chrono::steady_clock::now();
    RunReport report = run_experiment(c);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const std::filesystem::path csv = c.output_path;
    if (csv.has_parent_path()) {
        std::filesystem::create_directories(csv.parent_path());
    }
    std::ofstream(csv, std::ios::binary) << to_csv(report);

    json manifest;
    manifest["manifest_version"] = 1;
    manifest["config"] = to_json(c);
    manifest["seed"] = c.sim.seed;
    manifest["versions"] = {{"ppcp", kVersion}, {"compiler", __VERSION__}, {"cxx_standard", __cplusplus}};
    manifest["wall_time_s"] = wall;
    manifest["threads"] = thread_count();
    manifest["outputs"] = {csv.filename().string()};
    manifest["status"] = report.status.ok() ? "ok" : "failed";
    manifest["messages"] = report.status.messages;
    if (c.gnuplot) {
        std::filesystem::path gp = csv;
        gp.replace_extension(".gp");
        std::ofstream(gp) << gnuplot_script(c, csv.filename());
        manifest["outputs"].push_back(gp.filename().string());
    }
    std::ofstream(manifest_path(csv)) << manifest.dump(2) << '\n';
    return report;
}

}  // namespace ppcp

#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ppcp/coverage_analytic.hpp"
#include "ppcp/estimate.hpp"
#include "ppcp/pointproc.hpp"
#include "ppcp/quadrature.hpp"
#include "ppcp/sinr_mc.hpp"

namespace ppcp {

enum class ExperimentMode { coverage, discovery, nnd, palm_verify };

/// Invalid configuration; `field` names the offending key path.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message);
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

struct ExperimentConfig {
    ClusterSpec cluster{1.0 / kPi, 10.0, OffspringKernel::thomas(1.0)};
    NetworkSpec network{};
    ExperimentMode mode = ExperimentMode::coverage;
    std::vector<double> theta_grid;
    /// Thomas variance sweep; empty means just the configured kernel.
    std::vector<double> sigma2_list;
    /// Radii for mode nnd.
    std::vector<double> r_grid;
    SimConfig sim{};
    /// Unset: default_window_radius of each swept cluster.
    bool sim_window_default = true;
    /// 0 skips the Monte Carlo columns.
    std::int64_t replications = 100000;
    QuadPolicy quad{};
    std::string output_path = "results/run.csv";
    bool gnuplot = false;
};

ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Normalized form; parse_config(to_json(c)) reproduces c.
nlohmann::json to_json(const ExperimentConfig& c);

/// Log-spaced grid of n points from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, int n);

/// Parameters of the coverage (fig2) or discovery (fig3) figure.
ExperimentConfig figure_config(const std::string& figure);

struct RunStatus {
    bool censoring_failed = false;
    bool convergence_failed = false;
    std::vector<std::string> messages;

    bool ok() const { return !censoring_failed && !convergence_failed; }
    int exit_code() const { return ok() ? 0 : 3; }
};

struct RunReport {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    RunStatus status;
};

/// Evaluates the experiment and returns the CSV table.
RunReport run_experiment(const ExperimentConfig& c);

/// Runs, writes the CSV, the manifest (and the gnuplot script if requested).
/// Returns the report; the files are written even when the status is not ok.
RunReport run_and_write(const ExperimentConfig& c);

std::string format_number(double v);
std::string to_csv(const RunReport& report);
std::filesystem::path manifest_path(const std::filesystem::path& csv_path);

/// Pass/fail line produced by the verification suites.
struct CheckResult {
    std::string name;
    bool passed;
    std::string detail;
};

/// Verification suites behind `ppcp verify`: "palm", "exchange", "coverage".
std::vector<CheckResult> run_verify_suite(const std::string& suite, std::int64_t replications, std::uint64_t seed);

}  // namespace ppcp

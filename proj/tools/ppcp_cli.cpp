// ppcp: Palm calculus for Poisson cluster processes.
//
//   ppcp run <config.json>
//   ppcp reproduce fig2|fig3 [--out DIR] [--seed S] [--reps N] [--gnuplot]
//   ppcp verify [--suite palm|exchange|coverage] [--reps N] [--seed S]
//
// Set PPCP_THREADS to bound the worker threads.

#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "ppcp/experiment.hpp"

namespace {

constexpr int kConfigError = 2;

int report_run(const ppcp::RunReport& report, const ppcp::ExperimentConfig& cfg) {
    std::cout << "wrote " << cfg.output_path << " (" << report.rows.size() << " rows)\n";
    for (const auto& msg : report.status.messages) {
        std::cerr << "warning: " << msg << '\n';
    }
    if (!report.status.ok()) {
        std::cerr << "run finished with flagged rows; see the status column\n";
    }
    return report.status.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Palm calculus evaluators and Monte Carlo for Poisson-Poisson cluster processes"};
    app.require_subcommand(1);

    std::string config_path;
    auto* run = app.add_subcommand("run", "Run an experiment described by a JSON config or manifest");
    run->add_option("config", config_path, "Config file")->required();

    std::string figure;
    std::string out_dir = "results";
    std::uint64_t seed = 1;
    std::int64_t reps = 100000;
    bool gnuplot = false;
    auto* reproduce = app.add_subcommand("reproduce", "Regenerate the coverage (fig2) or discovery (fig3) curves");
    reproduce->add_option("figure", figure, "fig2 or fig3")->required()->check(CLI::IsMember({"fig2", "fig3"}));
    reproduce->add_option("--out", out_dir, "Output directory");
    reproduce->add_option("--seed", seed, "Monte Carlo seed");
    reproduce->add_option("--reps", reps, "Monte Carlo replications per kernel (0 = analytic only)");
    reproduce->add_flag("--gnuplot", gnuplot, "Also write a gnuplot script");

    std::vector<std::string> suites;
    std::int64_t verify_reps = 10000;
    std::uint64_t verify_seed = 1;
    auto* verify = app.add_subcommand("verify", "Run the analytic-vs-Monte-Carlo verification suites");
    verify->add_option("--suite", suites, "palm, exchange or coverage (default: all)")
        ->check(CLI::IsMember({"palm", "exchange", "coverage"}));
    verify->add_option("--reps", verify_reps, "Monte Carlo replications");
    verify->add_option("--seed", verify_seed, "Monte Carlo seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kConfigError;
    }

    try {
        if (*run) {
            const ppcp::ExperimentConfig cfg = ppcp::load_config(config_path);
            return report_run(ppcp::run_and_write(cfg), cfg);
        }
        if (*reproduce) {
            ppcp::ExperimentConfig cfg = ppcp::figure_config(figure);
            cfg.output_path = (std::filesystem::path(out_dir) / (figure + ".csv")).string();
            cfg.sim.seed = seed;
            if (reps < 0) {
                throw ppcp::ConfigError("--reps", "must be >= 0");
            }
            cfg.replications = reps;
            cfg.sim.replications = std::max<std::int64_t>(reps, 1);
            cfg.gnuplot = gnuplot;
            return report_run(ppcp::run_and_write(cfg), cfg);
        }
        if (*verify) {
            if (suites.empty()) {
                suites = {"palm", "exchange", "coverage"};
            }
            bool all = true;
            for (const auto& suite : suites) {
                for (const auto& check : ppcp::run_verify_suite(suite, verify_reps, verify_seed)) {
                    std::printf("[%s] %s: %s (%s)\n", check.passed ? "PASS" : "FAIL", suite.c_str(), check.name.c_str(),
                                check.detail.c_str());
                    all = all && check.passed;
                }
            }
            return all ? 0 : 1;
        }
    } catch (const ppcp::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

// specsim command line front-end.
//
// Subcommands map to the built-in scenarios:
//   simulate       Monte Carlo verification of the spectral machinery
//   check-scaling  deterministic scaling-limit hypothesis sweeps
//   hermite-limit  non-Gaussian (Hermite chaos) rescaled limit
//   residual       weak-solution residual ladder
//   lemma-check    constructive convolution-monotonicity lemma
//
// Exit codes: 0 all configured assertions pass, 1 an assertion failed,
// 2 configuration error.

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "specsim/harness.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::uint64_t replicates = 0;
    bool replicates_set = false;
    int workers = 0;
    double tolerance_scale = 0.0;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "JSON scenario configuration file");
    cmd->add_option("--out", flags.out_dir, "output directory for results.csv and summary.json");
    cmd->add_option("--seed", flags.seed, "base seed for all counter-derived streams")
        ->each([&flags](const std::string&) { flags.seed_set = true; });
    cmd->add_option("--replicates", flags.replicates, "Monte Carlo replicates")
        ->each([&flags](const std::string&) { flags.replicates_set = true; });
    cmd->add_option("--workers", flags.workers, "worker threads for replicate fan-out");
    cmd->add_option("--tolerance-scale", flags.tolerance_scale,
                    "multiplies every pass/fail threshold");
}

int run_scenario(specsim::Scenario scenario, bool mc_mode, const CommonFlags& flags) {
    using namespace specsim;
    ExperimentConfig cfg = default_config(scenario, mc_mode);
    try {
        if (!flags.config_path.empty()) cfg = load_config_file(flags.config_path, std::move(cfg));
        if (flags.seed_set) cfg.seed = flags.seed;
        if (flags.replicates_set) cfg.replicates = flags.replicates;
        if (flags.workers > 0) cfg.workers = flags.workers;
        if (flags.tolerance_scale > 0.0) cfg.tolerance_scale = flags.tolerance_scale;
        if (!flags.out_dir.empty()) cfg.out_dir = flags.out_dir;

        const RunReport report = run(cfg);
        export_results(report, cfg.out_dir);
        for (const auto& c : report.criteria)
            std::printf("[%s] %s: %.6g %s %.6g\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                        c.value, c.relation.c_str(), c.threshold);
        std::printf("%s: %s (results in %s)\n", report.scenario.c_str(),
                    report.pass ? "PASS" : "FAIL", cfg.out_dir.c_str());
        return report.pass ? 0 : 1;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "spectral simulation and scaling-limit verification for linear evolution equations "
        "with stationary random initial data"};
    app.require_subcommand(1);

    CommonFlags flags;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo spectral verification");
    auto* scaling = app.add_subcommand("check-scaling", "scaling-limit hypothesis sweeps");
    std::string scaling_scenario = "heat-gaussian";
    scaling->add_option("--scenario", scaling_scenario,
                        "heat-gaussian or pseudodiff (config file may override)");
    auto* hermite = app.add_subcommand("hermite-limit", "non-Gaussian Hermite-chaos limit");
    auto* residual = app.add_subcommand("residual", "weak-solution residual ladder");
    auto* lemma = app.add_subcommand("lemma-check", "convolution-monotonicity lemma");
    for (auto* cmd : {simulate, scaling, hermite, residual, lemma}) add_common_flags(cmd, flags);

    CLI11_PARSE(app, argc, argv);

    using specsim::Scenario;
    if (simulate->parsed()) return run_scenario(Scenario::heat_gaussian, true, flags);
    if (scaling->parsed()) {
        try {
            return run_scenario(specsim::scenario_from_name(scaling_scenario), false, flags);
        } catch (const specsim::ConfigError& e) {
            std::fprintf(stderr, "config error: %s\n", e.what());
            return 2;
        }
    }
    if (hermite->parsed()) return run_scenario(Scenario::heat_nongaussian, false, flags);
    if (residual->parsed()) return run_scenario(Scenario::residual, false, flags);
    if (lemma->parsed()) return run_scenario(Scenario::lemma_check, false, flags);
    return 2;
}

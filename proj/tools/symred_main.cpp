// symred: config-driven experiment runner for symmetric stochastic
// differential equations on SO(3).

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "symred/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Symmetry reduction and reconstruction of Stratonovich SDEs on SO(3)"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run an experiment from a config file");
    std::string config_path;
    run->add_option("config", config_path, "experiment config file")->required();
    std::string out_override;
    run->add_option("--out", out_override, "override output.dir");
    std::int64_t seed_override = -1;
    run->add_option("--seed", seed_override, "override model.seed");
    int workers_override = 0;
    run->add_option("--workers", workers_override, "override run.workers");
    bool svg = false;
    run->add_flag("--svg", svg, "emit SVG plots");

    CLI11_PARSE(app, argc, argv);

    std::ifstream is(config_path);
    if (!is) {
        std::cerr << "cannot open config file: " << config_path << "\n";
        return symred::exit_code::config_error;
    }
    symred::ExperimentConfig cfg;
    try {
        cfg = symred::parse_experiment(is);
    } catch (const symred::BadConfig& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return symred::exit_code::config_error;
    }
    if (!out_override.empty()) cfg.out_dir = out_override;
    if (seed_override >= 0) cfg.model.seed = static_cast<std::uint64_t>(seed_override);
    if (workers_override > 0) {
        cfg.workers = workers_override;
    } else if (cfg.workers == 0) {
        const char* env = std::getenv("SYMRED_WORKERS");
        cfg.workers = env ? std::max(1, std::atoi(env)) : 1;
    }
    if (svg) cfg.emit_svg = true;

    try {
        return symred::run_experiment(cfg);
    } catch (const symred::BadConfig& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return symred::exit_code::config_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

// Command-line front end: runs experiment configurations and writes result tables.

#include "iab/harness.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

struct RunOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::optional<std::string> out;
    std::optional<unsigned> parallelism;
    std::optional<double> value;
};

void add_run_flags(CLI::App* cmd, RunOptions& o) {
    cmd->add_option("--config", o.config, "experiment configuration file (JSON)")->required();
    cmd->add_option("--seed", o.seed, "master seed (overrides the config)");
    cmd->add_option("--trials", o.trials, "Monte-Carlo trials per point (overrides the config)");
    cmd->add_option("--out", o.out, "output directory (overrides the config)");
    cmd->add_option("--parallelism", o.parallelism, "worker threads, 0 = hardware concurrency");
}

iab::ExperimentConfig resolve(const RunOptions& o) {
    iab::ExperimentConfig c = iab::load_config(o.config);
    if (o.seed) c.seed = *o.seed;
    if (o.trials) c.trials = *o.trials;
    if (o.out) c.output = *o.out;
    if (o.parallelism) c.parallelism = *o.parallelism;
    if (o.value) c.sweep_values = {*o.value};
    c.validate();
    return c;
}

int execute(const iab::ExperimentConfig& c) {
    const iab::ResultTable table = iab::run_experiment(c);
    iab::write_outputs(table, c, c.output);
    std::cout << "wrote " << table.rows.size() << " rows to " << (std::filesystem::path(c.output) / "results.csv").string()
              << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deployment planner and Monte-Carlo coverage simulator for two-hop IAB networks"};
    app.require_subcommand(1);

    RunOptions run_opts;
    auto* run = app.add_subcommand("run", "evaluate a single sweep point (--value, default: first grid value)");
    add_run_flags(run, run_opts);
    run->add_option("--value", run_opts.value, "sweep value to evaluate");

    RunOptions sweep_opts;
    auto* sweep = app.add_subcommand("sweep", "evaluate every point of the configured sweep grid");
    add_run_flags(sweep, sweep_opts);

    std::string validate_path;
    auto* validate = app.add_subcommand("validate-config", "check a configuration file and exit");
    validate->add_option("--config", validate_path, "experiment configuration file (JSON)")->required();

    app.add_subcommand("list-scenarios", "print the available scenarios");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            iab::ExperimentConfig c = resolve(run_opts);
            if (!run_opts.value) c.sweep_values.resize(1);
            return execute(c);
        }
        if (*sweep) {
            return execute(resolve(sweep_opts));
        }
        if (*validate) {
            const iab::ExperimentConfig c = iab::load_config(validate_path);
            std::cout << validate_path << ": ok (" << iab::to_string(c.scenario) << ", "
                      << c.sweep_values.size() << " grid points, " << iab::strategy_labels(c).size()
                      << " strategies)\n";
            return 0;
        }
        for (const auto& [name, description] : iab::scenario_catalog()) {
            std::cout << name << "\t" << description << '\n';
        }
        return 0;
    } catch (const iab::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const iab::InfeasibleError& e) {
        std::cerr << "infeasible placement: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

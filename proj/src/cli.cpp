#include "smtj/experiments.hpp"

#include <functional>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

namespace smtj {

int cli_dispatch(int argc, const char* const* argv) {
    CLI::App app{"Temporal sampling with stochastic delay cells"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "results";
    std::string format;
    std::uint64_t seed = 0;
    bool seed_given = false;

    const std::map<std::string, std::function<void(const ExperimentConfig&,
                                                   const std::filesystem::path&)>>
        runners = {
            {"pdc-histogram", run_pdc_histogram_experiment},
            {"cdf", run_cdf_experiment},
            {"mean-vs-current", run_sweep_experiment},
            {"weighted-sample", run_weighted_experiment},
            {"mh-ising", run_ising_experiment},
            {"drift", run_drift_experiment},
        };
    const std::map<std::string, std::string> descriptions = {
        {"pdc-histogram", "Switching-time histogram and exponential fit at one current"},
        {"cdf", "Empirical CDFs and fits for a list of currents"},
        {"mean-vs-current", "Mean switching time vs current sweep and law fit"},
        {"weighted-sample", "Exponential-clocks weighted die frequencies"},
        {"mh-ising", "Metropolis-Hastings Ising chain vs enumerated Boltzmann"},
        {"drift", "Dwell-time stability analysis in successive bins"},
    };

    for (const auto& [name, desc] : descriptions) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--seed", seed, "Root seed (overrides config)")
            ->each([&seed_given](const std::string&) { seed_given = true; });
        sub->add_option("--out", out_dir, "Output directory");
        sub->add_option("--format", format, "Table format")
            ->check(CLI::IsMember({"csv", "json"}));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    ExperimentConfig cfg;
    try {
        if (!config_path.empty()) cfg = ExperimentConfig::load(config_path);
        if (seed_given) cfg.seed = seed;
        if (!format.empty()) cfg.format = format;
        cfg.validate();
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }

    const std::string sub = app.get_subcommands().front()->get_name();
    try {
        runners.at(sub)(cfg, out_dir);
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

} // namespace smtj

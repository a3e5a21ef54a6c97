// opmech: optimal-prediction experiments for stiff oscillator chains.
//
//   opmech <fig1|fig2|sigma-demo|coeffs|bench> [--config FILE] [--N int] ...
//
// Exit codes: 0 success, 2 configuration error, 3 numerical blow-up.

#include "opmech/config.hpp"
#include "opmech/error.hpp"
#include "opmech/harness.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <optional>
#include <string>

namespace {

constexpr int exit_config = 2;
constexpr int exit_blow_up = 3;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal prediction for stiff Hamiltonian oscillator chains"};
    app.set_help_all_flag("--help-all");

    std::string experiment_name;
    std::string config_file;
    app.add_option("experiment", experiment_name, "fig1 | fig2 | sigma-demo | coeffs | bench")
        ->required();
    app.add_option("--config", config_file, "key=value file; flags override its values");

    // Every setting is collected as text and applied through the same parser as
    // the config file, after it.
    std::map<std::string, std::optional<std::string>> flags;
    for (const auto& key : opmech::setting_keys()) {
        flags[key];
        app.add_option("--" + key, flags[key]);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : exit_config;
    }

    const auto experiment = opmech::parse_experiment(experiment_name);
    if (!experiment) {
        std::cerr << "unknown experiment '" << experiment_name << "'\n";
        return exit_config;
    }

    opmech::ExperimentConfig config;
    try {
        config = opmech::default_config(*experiment);
        if (!config_file.empty()) opmech::load_config_file(config, config_file);
        for (const auto& [key, value] : flags)
            if (value) opmech::apply_setting(config, key, *value);
        opmech::validate(config);
    } catch (const opmech::Error& e) {
        std::cerr << e.what() << '\n';
        return exit_config;
    }

    try {
        const auto result = opmech::run_experiment(config);
        for (const auto& [k, v] : result.metrics) std::cout << k << '=' << v << '\n';
        if (result.blew_up) {
            std::cerr << "numerical blow-up\n";
            return exit_blow_up;
        }
    } catch (const opmech::Error& e) {
        std::cerr << e.what() << '\n';
        if (e.code() == opmech::ErrorCode::NonFiniteState) return exit_blow_up;
        if (e.code() == opmech::ErrorCode::Config) return exit_config;
        return 1;
    }
    return 0;
}

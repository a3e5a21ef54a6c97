#pragma once

#include "opmech/models.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace opmech {

enum class Experiment { fig1, fig2, sigma_demo, coeffs, bench };

std::optional<Experiment> parse_experiment(std::string_view name);
std::string_view to_string(Experiment e);

struct ExperimentConfig {
    Experiment experiment = Experiment::fig1;
    std::size_t N = 1000;
    std::size_t n = 50;
    double k = 1.0;     // Stuart–Warren spring constant
    double k2 = 1.0;    // quartic chain
    double k4 = 0.1;
    double T = 5.0;
    std::optional<double> dt_full;     // default 1e-2/N
    std::optional<double> dt_reduced;  // default 1e-2/n
    double output_dt = 1e-2;
    std::size_t ensemble = 1;
    std::uint64_t seed = 1;
    unsigned threads = 0;  // 0: hardware concurrency
    double Q0 = 1.5;
    double mass_exponent = 2.0;  // quartic chain masses m_j = j^-p
    CoefficientSource coefficients = CoefficientSource::closed_form;
    std::string out;

    double full_step() const { return dt_full.value_or(1e-2 / double(N)); }
    double reduced_step() const { return dt_reduced.value_or(1e-2 / double(n)); }
    unsigned thread_count() const;
};

/// Desk-scale defaults for each experiment.
ExperimentConfig default_config(Experiment e);

/// Sets one field from its key (the long CLI flag without dashes). Throws Config
/// on unknown keys or unparsable values.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);

/// Flat UTF-8 key=value lines; blank lines and lines starting with '#' are skipped.
void load_config_file(ExperimentConfig& config, const std::string& path);

void validate(const ExperimentConfig& config);

/// Keys accepted by apply_setting, in CLI order.
const std::vector<std::string>& setting_keys();

}  // namespace opmech

#pragma once

#include "opmech/config.hpp"
#include "opmech/integrators.hpp"
#include "opmech/models.hpp"
#include "opmech/sampling.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace opmech {

struct EnsembleSummary {
    std::vector<double> times;
    std::vector<std::string> names;
    std::vector<std::vector<double>> mean;
    std::vector<std::vector<double>> stderr_;  // sample std / sqrt(M)
    std::size_t members = 0;

    const std::vector<double>& mean_of(const std::string& name) const;
    const std::vector<double>& stderr_of(const std::string& name) const;
};

struct EnsembleRun {
    EnsembleSummary summary;
    double sampling_s = 0.0;     // summed over members
    double integration_s = 0.0;  // summed over members (serial-equivalent)
    double elapsed_s = 0.0;
    std::uint64_t force_pairs = 0;
};

/// Draws M conditioned tails for the retained head, integrates every member and
/// averages the observables. The head is slots 0..n of a Stuart–Warren state
/// ((Q,P) and bath 1..n) or slots 0..n-1 of a quartic chain. Members run on
/// `threads` workers; member i always uses member_seed(sampler.seed, i) and the
/// reduction runs in member order, so the result does not depend on `threads`.
EnsembleRun ensemble_mean(const ModelSpec& model, const PhaseState& head, std::size_t M,
                          const SamplerConfig& sampler, const SchemeSpec& scheme, double T,
                          std::uint64_t output_every,
                          const std::vector<std::string>& observables, unsigned threads = 1);

/// ‖x - ref‖₂ / ‖ref‖₂ over paired columns (all columns pooled).
double relative_l2(const std::vector<std::vector<double>>& x,
                   const std::vector<std::vector<double>>& ref);

using Metrics = std::vector<std::pair<std::string, std::string>>;

std::string format_number(double x);  // 17 significant digits
void write_metrics(const std::string& path, const Metrics& metrics);
Metrics read_metrics(const std::string& path);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;
};

void write_csv(const std::string& path, const Table& table);
std::string csv_text(const Table& table);
Table read_csv(const std::string& path);

/// Metrics sidecar path: the output path with its extension replaced by ".metrics".
std::string metrics_path(const std::string& out);

/// Analytic work ratio of the full pipeline to one reduced run:
/// M · pairs_full/pairs_reduced · dt_reduced/dt_full.
double predicted_speedup(std::size_t members, std::uint64_t pairs_full,
                         std::uint64_t pairs_reduced, double dt_full, double dt_reduced);

struct SpeedupInputs {
    double wall_full_s = 0.0;
    double wall_reduced_s = 0.0;
    std::uint64_t force_pairs_full = 0;
    std::uint64_t force_pairs_reduced = 0;
    double predicted_ratio = 0.0;
};

/// wall_clock_*, force_pairs_*, predicted_ratio, measured_ratio.
Metrics speedup_report(const SpeedupInputs& in);

struct PipelineResult {
    Table table;
    Metrics metrics;
    bool blew_up = false;  // fatal blow-up in a run that should be stable

    double metric(const std::string& key) const;
};

PipelineResult run_fig1(const ExperimentConfig& config);
PipelineResult run_fig2(const ExperimentConfig& config);
PipelineResult run_sigma_demo(const ExperimentConfig& config);
PipelineResult run_coeffs(const ExperimentConfig& config);
/// Runs the desk-scale fig1 and fig2 pipelines (seed, threads and ensemble taken
/// from `config`) and merges their speedup metrics under fig1_/fig2_ prefixes.
PipelineResult run_bench(const ExperimentConfig& config);

/// Dispatches on config.experiment and writes the CSV (if any) and metrics sidecar
/// when config.out is set.
PipelineResult run_experiment(const ExperimentConfig& config);

/// Conditioned canonical initial state for the Stuart–Warren model: Q = Q0,
/// P = 0, bath drawn from e^{-H} given (Q, P).
PhaseState stuart_warren_initial_state(const StuartWarren& model, double Q0, Rng& rng);

}  // namespace opmech

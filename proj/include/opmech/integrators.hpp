#pragma once

#include "opmech/models.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace opmech {

/// Semi-implicit scheme for the Stuart–Warren family. sigma = 0 kicks both
/// momenta from the old coordinates and is symplectic; sigma = 1 advances the
/// bath first and feeds the new bath coordinates into the P update.
struct SigmaScheme {
    int sigma = 0;
};

struct VelocityVerlet {};

struct SchemeSpec {
    std::variant<SigmaScheme, VelocityVerlet> variant = VelocityVerlet{};
    double dt = 1e-3;
};

void validate(const SchemeSpec& scheme);
std::string describe(const SchemeSpec& scheme);

PhaseState step_sigma(const ModelSpec& model, const PhaseState& state, double dt, int sigma);
PhaseState step_verlet(const ModelSpec& model, const PhaseState& state, double dt);

struct TrajectoryRecord {
    std::vector<double> times;
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;
    SchemeSpec scheme;
    std::string model_digest;
    double stiffness_ratio = 0.0;  // max ω · dt
    bool under_resolved = false;   // stiffness_ratio >= 1
    bool blew_up = false;          // partial record, stopped at the first bad state
    std::uint64_t steps = 0;
    std::uint64_t force_pairs = 0;

    const std::vector<double>& column(std::string_view name) const;
};

/// Observables: "Q", "P" (Stuart–Warren family), "q<j>", "p<j>" for 1-based
/// particle j, "energy", "momentum" (Σp).
TrajectoryRecord integrate(const ModelSpec& model, const SchemeSpec& scheme,
                           const PhaseState& state0, double T, std::uint64_t output_every,
                           const std::vector<std::string>& observables);

/// Number of steps of size dt in T; rejects T that is not a whole number of steps.
std::uint64_t step_count(double T, double dt);

inline constexpr double blow_up_threshold = 1e12;

}  // namespace opmech

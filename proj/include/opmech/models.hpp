#pragma once

#include "opmech/gaussian_stats.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>

namespace opmech {

/// Phase point. For the Stuart–Warren family slot 0 holds the distinguished
/// pair (Q, P) and slots 1..N the bath; quartic chains store particle j at j-1.
struct PhaseState {
    Vector q;
    Vector p;
};

/// Distinguished unit-mass particle with V(Q) = kQ·Q²/2, tied by springs of
/// constant k to N bath particles of mass k/j².
struct StuartWarren {
    std::size_t N = 1;
    double k = 1.0;
    double kQ = 1.0;
};

/// All-to-all chain with pair potential k2/2·d² + k4/4·d⁴.
struct QuarticChain {
    std::size_t N = 1;
    double k2 = 1.0;
    double k4 = 0.0;
    Vector masses;
};

/// Same equations as StuartWarren with the bath cut to n particles.
struct ReducedLinear {
    std::size_t n = 1;
    double k = 1.0;
    double kQ = 1.0;
};

enum class CoefficientSource { closed_form, numeric_oracle };

struct ReducedCoefficients {
    double C2 = 0.0;
    double C4 = 0.0;
    double D4 = 0.0;
    CoefficientSource source = CoefficientSource::closed_form;
    std::size_t N = 0;
    std::size_t n = 0;
    double k2 = 0.0;
    double k4 = 0.0;
};

/// Effective first-order dynamics of the first n quartic-chain particles.
struct ReducedQuartic {
    std::size_t n = 1;
    ReducedCoefficients coefficients;
    Vector masses;
};

using ModelSpec = std::variant<StuartWarren, QuarticChain, ReducedLinear, ReducedQuartic>;

/// m_j = j^-exponent, j = 1..N (default 1/j²).
Vector stiff_masses(std::size_t N, double exponent = 2.0);
QuarticChain quartic_chain(std::size_t N, double k2, double k4, double mass_exponent = 2.0);

void validate(const ModelSpec& model);
std::size_t dimension(const ModelSpec& model);
Vector masses(const ModelSpec& model);
bool is_reduced(const ModelSpec& model);

/// Human-readable parameter summary, e.g. "StuartWarren(N=100,k=1,kQ=1)".
std::string describe(const ModelSpec& model);

/// Slot of 1-based particle j in a PhaseState for this model.
std::size_t particle_slot(const ModelSpec& model, std::size_t j);

struct Derivative {
    Vector dq;
    Vector dp;
};

/// `pairwise` is the literal O(N²) loop and the only path used for timing.
/// `mean_field` expands Σ_l (q_j - q_l)^k in power sums (O(N)); value checks only.
enum class ForcePath { pairwise, mean_field };

double energy(const ModelSpec& model, const PhaseState& state);
Derivative force(const ModelSpec& model, const PhaseState& state,
                 ForcePath path = ForcePath::pairwise);

/// ṗ = -∂H/∂q written into `dp` (resized as needed).
void momentum_rate(const ModelSpec& model, const Vector& q, Vector& dp,
                   ForcePath path = ForcePath::pairwise);

/// Hessian of the quadratic part of the potential. Exact for the linear models;
/// for the quartic variants it is the k2 (or C2) pair structure only.
Matrix coordinate_precision(const ModelSpec& model);

/// Pair interactions evaluated per force call (springs for the linear models).
std::uint64_t force_pairs(const ModelSpec& model);

/// Drops particles n+1..N and every interaction that touches them.
QuarticChain naive_truncation(const QuarticChain& model, std::size_t n);

/// ω_j = sqrt(k/m_j) = j of the bath with Q held fixed.
Vector mode_frequencies(const ModelSpec& model);

/// Upper estimate of the fastest linear frequency, max_j sqrt(K_jj/m_j).
double max_frequency(const ModelSpec& model);

}  // namespace opmech

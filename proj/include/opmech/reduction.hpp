#pragma once

#include "opmech/gaussian_stats.hpp"
#include "opmech/models.hpp"

#include <cstddef>

namespace opmech {

/// Coordinate precision k2·(N·I - J) of the quadratic part of the quartic chain.
/// Singular along the uniform translation.
Matrix chain_precision(std::size_t N, double k2);

/// Couplings of the first-order effective Hamiltonian, as printed in closed form:
///   C2 = (N/n)·k2 + 3(N-n)(n+1)/(N·n)·k4/k2,  C4 = k4,  D4 = k4·(N-n).
ReducedCoefficients reduced_coefficients(std::size_t N, std::size_t n, double k2, double k4);

/// Marginalizes exp(-H0) over particles n+1..N by a Schur complement of the
/// chain precision and reads the pair coupling a from the result a·(n·I - J).
/// Needs n >= 2 (a single retained coordinate has no pair structure).
double effective_quadratic_coupling_oracle(std::size_t N, std::size_t n, double k2);

/// ⟨H1⟩ under the Gaussian measure of H0 conditioned on the first n
/// coordinates, with the head-independent constant removed (value at head = 0
/// is subtracted). Factors the tail precision once; evaluate many heads.
class FirstCumulant {
public:
    FirstCumulant(std::size_t N, std::size_t n, double k2, double k4);

    double operator()(const Vector& head_q) const;

    /// Conditioned tail mean for the given head coordinates.
    Vector tail_mean(const Vector& head_q) const;
    const Matrix& tail_covariance() const { return tail_cov_; }

private:
    double raw(const Vector& head_q) const;

    std::size_t N_, n_;
    double k2_, k4_;
    GaussianConditioner conditioner_;
    Matrix tail_cov_;
    double reference_ = 0.0;
};

double first_cumulant_h1(const Vector& head_q, std::size_t N, std::size_t n, double k2, double k4);

/// Couplings re-derived numerically: C2 from the Schur-complement oracle plus the
/// quadratic part of ⟨H1⟩, and C4, D4 from a least-squares fit of ⟨H1⟩ on probe
/// heads against the three invariant polynomials of the reduced Hamiltonian.
/// Needs n >= 4: for three coordinates the two quartic invariants are proportional.
ReducedCoefficients cumulant_coefficients(std::size_t N, std::size_t n, double k2, double k4);

/// Optimal-prediction model for the first n degrees of freedom.
ModelSpec reduce(const ModelSpec& model, std::size_t n,
                 CoefficientSource source = CoefficientSource::closed_form);

}  // namespace opmech

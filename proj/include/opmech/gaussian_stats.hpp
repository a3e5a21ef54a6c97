#pragma once

// Conditioned Gaussian statistics for densities written in precision form,
//   p(x) ∝ exp(-1/2 xᵀ A x + bᵀ x),
// with a subset of the coordinates held at fixed values.

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <vector>

namespace opmech {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

struct Condition {
    std::size_t index;
    double value;
};

struct GaussianSpec {
    Matrix precision;
    Vector linear;
    std::vector<Condition> condition;
};

struct ConditionedMoments {
    std::vector<std::size_t> free_indices;  // ascending
    Vector mean;
    Matrix covariance;
};

/// Two algebraically equivalent routes. `precision` solves the unconditioned
/// block of A directly and tolerates a singular full A (the translation mode
/// of an all-to-all spring chain). `covariance` goes through A⁻¹ and the
/// regression formula, so it needs A itself to be nonsingular.
enum class ConditioningForm { precision, covariance };

Vector conditional_mean(const GaussianSpec& spec,
                        ConditioningForm form = ConditioningForm::precision);
Matrix conditional_covariance(const GaussianSpec& spec,
                              ConditioningForm form = ConditioningForm::precision);
ConditionedMoments condition(const GaussianSpec& spec,
                             ConditioningForm form = ConditioningForm::precision);

/// Indices not named in `condition`, ascending. Validates range and distinctness.
std::vector<std::size_t> free_indices(std::size_t dim, const std::vector<Condition>& condition);

/// Returns (A + Aᵀ)/2, rejecting asymmetry beyond 1e-8 relative.
Matrix symmetrized(const Matrix& precision);

/// Precision-form conditioner that factors the free block once and is then
/// reused for many conditioning values or samples.
class GaussianConditioner {
public:
    GaussianConditioner(const Matrix& precision, std::vector<std::size_t> conditioned);

    std::size_t dim() const { return dim_; }
    const std::vector<std::size_t>& free() const { return free_; }
    const std::vector<std::size_t>& conditioned() const { return conditioned_; }

    /// `linear` has full length; `values` follow the order of `conditioned()`.
    Vector mean(const Vector& linear, const Vector& values) const;
    Matrix covariance() const;
    /// Maps a standard-normal vector z to L⁻ᵀ z, whose covariance is A_ff⁻¹.
    Vector correlate(const Vector& white) const;

private:
    std::size_t dim_;
    std::vector<std::size_t> conditioned_;
    std::vector<std::size_t> free_;
    Matrix coupling_;  // A_fc
    Eigen::LLT<Matrix> factor_;
};

/// ⟨x_a x_b x_c x_d⟩ for a Gaussian with the given mean and covariance (Isserlis).
double wick_fourth_moment(const Vector& mean, const Matrix& cov,
                          const std::array<std::size_t, 4>& idx);

/// ⟨(x_j - x_l)⁴⟩ for jointly Gaussian x_j, x_l.
double expected_quartic_pair(double mu_j, double mu_l, double var_j, double var_l,
                             double cov_jl);

}  // namespace opmech

#include "opmech/gaussian_stats.hpp"

#include "opmech/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace opmech {

namespace {

Matrix gather(const Matrix& m, const std::vector<std::size_t>& rows,
              const std::vector<std::size_t>& cols) {
    Matrix out(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = m(rows[i], cols[j]);
    return out;
}

Vector gather(const Vector& v, const std::vector<std::size_t>& idx) {
    Vector out(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) out(i) = v(idx[i]);
    return out;
}

void check_shape(const GaussianSpec& spec) {
    const auto n = spec.precision.rows();
    require(spec.precision.cols() == n, ErrorCode::DimensionMismatch, "precision is not square");
    require(spec.linear.size() == n, ErrorCode::DimensionMismatch,
            "linear term has length " + std::to_string(spec.linear.size()) +
                ", precision is " + std::to_string(n) + "x" + std::to_string(n));
}

// Conditioning values in the order of the (sorted) conditioned index list.
Vector conditioned_values(const GaussianSpec& spec, const std::vector<std::size_t>& cond) {
    Vector values(cond.size());
    for (std::size_t i = 0; i < cond.size(); ++i) {
        auto it = std::find_if(spec.condition.begin(), spec.condition.end(),
                               [&](const Condition& c) { return c.index == cond[i]; });
        values(i) = it->value;
    }
    return values;
}

std::vector<std::size_t> sorted_conditioned(const GaussianSpec& spec) {
    std::vector<std::size_t> cond;
    for (const auto& c : spec.condition) cond.push_back(c.index);
    std::sort(cond.begin(), cond.end());
    return cond;
}

ConditionedMoments condition_covariance_form(const GaussianSpec& spec) {
    const Matrix a = symmetrized(spec.precision);
    const auto n = static_cast<std::size_t>(a.rows());
    auto freeIdx = free_indices(n, spec.condition);
    auto cond = sorted_conditioned(spec);

    Eigen::LLT<Matrix> full(a);
    require(full.info() == Eigen::Success, ErrorCode::SingularConditionedBlock,
            "covariance form needs a nonsingular precision");
    const Matrix sigma = full.solve(Matrix::Identity(a.rows(), a.cols()));
    const Vector m = sigma * spec.linear;

    ConditionedMoments out;
    out.free_indices = freeIdx;
    out.mean = gather(m, freeIdx);
    out.covariance = gather(sigma, freeIdx, freeIdx);
    if (cond.empty()) return out;

    const Matrix sigmaFc = gather(sigma, freeIdx, cond);
    Eigen::LLT<Matrix> mBlock(gather(sigma, cond, cond));
    require(mBlock.info() == Eigen::Success, ErrorCode::SingularConditionedBlock,
            "conditioned covariance block is singular");
    const Vector shift = conditioned_values(spec, cond) - gather(m, cond);
    out.mean += sigmaFc * mBlock.solve(shift);
    out.covariance -= sigmaFc * mBlock.solve(sigmaFc.transpose());
    out.covariance = 0.5 * (out.covariance + out.covariance.transpose()).eval();
    return out;
}

}  // namespace

Matrix symmetrized(const Matrix& precision) {
    require(precision.rows() == precision.cols(), ErrorCode::DimensionMismatch,
            "precision is not square");
    if (precision.size() == 0) return precision;
    const double scale = precision.cwiseAbs().maxCoeff();
    const double asym = (precision - precision.transpose()).cwiseAbs().maxCoeff();
    require(asym <= 1e-8 * std::max(scale, 1e-300), ErrorCode::DimensionMismatch,
            "precision is not symmetric (max |A - Aᵀ| = " + std::to_string(asym) + ")");
    return 0.5 * (precision + precision.transpose());
}

std::vector<std::size_t> free_indices(std::size_t dim, const std::vector<Condition>& condition) {
    std::vector<char> taken(dim, 0);
    for (const auto& c : condition) {
        require(c.index < dim, ErrorCode::IndexOutOfRange,
                "condition index " + std::to_string(c.index) + " out of range for dimension " +
                    std::to_string(dim));
        require(!taken[c.index], ErrorCode::DimensionMismatch,
                "condition index " + std::to_string(c.index) + " repeated");
        taken[c.index] = 1;
    }
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < dim; ++i)
        if (!taken[i]) out.push_back(i);
    return out;
}

GaussianConditioner::GaussianConditioner(const Matrix& precision,
                                         std::vector<std::size_t> conditioned)
    : dim_(static_cast<std::size_t>(precision.rows())), conditioned_(std::move(conditioned)) {
    const Matrix a = symmetrized(precision);
    std::vector<Condition> cond;
    for (auto i : conditioned_) cond.push_back({i, 0.0});
    free_ = free_indices(dim_, cond);
    coupling_ = gather(a, free_, conditioned_);
    factor_.compute(gather(a, free_, free_));
    require(factor_.info() == Eigen::Success, ErrorCode::SingularConditionedBlock,
            "free block of the precision is not positive definite");
}

Vector GaussianConditioner::mean(const Vector& linear, const Vector& values) const {
    require(static_cast<std::size_t>(linear.size()) == dim_, ErrorCode::DimensionMismatch,
            "linear term length");
    require(static_cast<std::size_t>(values.size()) == conditioned_.size(),
            ErrorCode::DimensionMismatch, "conditioning values length");
    Vector rhs = gather(linear, free_);
    if (!conditioned_.empty()) rhs -= coupling_ * values;
    return factor_.solve(rhs);
}

Matrix GaussianConditioner::covariance() const {
    const auto n = static_cast<Eigen::Index>(free_.size());
    Matrix cov = factor_.solve(Matrix::Identity(n, n));
    return 0.5 * (cov + cov.transpose());
}

Vector GaussianConditioner::correlate(const Vector& white) const {
    require(static_cast<std::size_t>(white.size()) == free_.size(), ErrorCode::DimensionMismatch,
            "white-noise length");
    return factor_.matrixU().solve(white);
}

ConditionedMoments condition(const GaussianSpec& spec, ConditioningForm form) {
    check_shape(spec);
    if (form == ConditioningForm::covariance) return condition_covariance_form(spec);

    auto cond = sorted_conditioned(spec);
    free_indices(static_cast<std::size_t>(spec.precision.rows()), spec.condition);
    GaussianConditioner conditioner(spec.precision, cond);
    ConditionedMoments out;
    out.free_indices = conditioner.free();
    out.mean = conditioner.mean(spec.linear, conditioned_values(spec, cond));
    out.covariance = conditioner.covariance();
    return out;
}

Vector conditional_mean(const GaussianSpec& spec, ConditioningForm form) {
    return condition(spec, form).mean;
}

Matrix conditional_covariance(const GaussianSpec& spec, ConditioningForm form) {
    return condition(spec, form).covariance;
}

double wick_fourth_moment(const Vector& mean, const Matrix& cov,
                          const std::array<std::size_t, 4>& idx) {
    const auto n = static_cast<std::size_t>(mean.size());
    require(cov.rows() == mean.size() && cov.cols() == mean.size(), ErrorCode::DimensionMismatch,
            "mean and covariance sizes differ");
    for (auto i : idx)
        require(i < n, ErrorCode::IndexOutOfRange,
                "moment index " + std::to_string(i) + " out of range");
    const auto [a, b, c, d] = idx;
    const double ma = mean(a), mb = mean(b), mc = mean(c), md = mean(d);
    double m4 = ma * mb * mc * md;
    m4 += cov(a, b) * mc * md + cov(a, c) * mb * md + cov(a, d) * mb * mc +
          cov(b, c) * ma * md + cov(b, d) * ma * mc + cov(c, d) * ma * mb;
    m4 += cov(a, b) * cov(c, d) + cov(a, c) * cov(b, d) + cov(a, d) * cov(b, c);
    return m4;
}

double expected_quartic_pair(double mu_j, double mu_l, double var_j, double var_l,
                             double cov_jl) {
    const double mu = mu_j - mu_l;
    double var = var_j + var_l - 2.0 * cov_jl;
    // Roundoff can push a zero variance slightly negative.
    const double scale = std::max({std::abs(var_j), std::abs(var_l), std::abs(cov_jl)});
    if (var < 0.0 && var > -1e-12 * scale) var = 0.0;
    require(var >= 0.0, ErrorCode::NegativeVariance,
            "variance of the difference is " + std::to_string(var));
    const double mu2 = mu * mu;
    return mu2 * mu2 + 6.0 * mu2 * var + 3.0 * var * var;
}

}  // namespace opmech

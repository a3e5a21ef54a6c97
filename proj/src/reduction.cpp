#include "opmech/reduction.hpp"

#include "opmech/error.hpp"

#include <Eigen/QR>

#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace opmech {

namespace {

void check_sizes(std::size_t N, std::size_t n) {
    require(n >= 1 && n <= N, ErrorCode::BadRange,
            "need 1 <= n <= N, got n=" + std::to_string(n) + ", N=" + std::to_string(N));
}

std::vector<std::size_t> head_indices(std::size_t n) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    return idx;
}

// Invariant polynomials of the reduced Hamiltonian:
// ½Σ_{μ<ν}(q_μ-q_ν)², ¼Σ_{μ<ν}(q_μ-q_ν)⁴, ¼Σ_μ(q_μ-q̄)⁴.
Eigen::Vector3d reduced_basis(const Vector& q) {
    const auto n = q.size();
    double s2 = 0.0, s4 = 0.0;
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = a + 1; b < n; ++b) {
            const double d2 = (q(a) - q(b)) * (q(a) - q(b));
            s2 += d2;
            s4 += d2 * d2;
        }
    const double c = q.mean();
    const double m4 = (q.array() - c).pow(4).sum();
    return {0.5 * s2, 0.25 * s4, 0.25 * m4};
}

}  // namespace

Matrix chain_precision(std::size_t N, double k2) {
    const auto d = static_cast<Eigen::Index>(N);
    Matrix a = Matrix::Constant(d, d, -k2);
    a.diagonal().array() += k2 * double(N);
    return a;
}

ReducedCoefficients reduced_coefficients(std::size_t N, std::size_t n, double k2, double k4) {
    check_sizes(N, n);
    require(k2 > 0 && k4 >= 0, ErrorCode::BadRange, "need k2 > 0 and k4 >= 0");
    const double Nd = double(N), nd = double(n);
    ReducedCoefficients c;
    c.C2 = Nd / nd * k2 + 3.0 * (Nd - nd) * (nd + 1.0) / (Nd * nd) * k4 / k2;
    c.C4 = k4;
    c.D4 = k4 * (Nd - nd);
    c.source = CoefficientSource::closed_form;
    c.N = N;
    c.n = n;
    c.k2 = k2;
    c.k4 = k4;
    return c;
}

double effective_quadratic_coupling_oracle(std::size_t N, std::size_t n, double k2) {
    check_sizes(N, n);
    require(n >= 2, ErrorCode::BadRange, "pair coupling is undefined for a single coordinate");
    require(k2 > 0, ErrorCode::BadRange, "need k2 > 0");
    const Matrix a = chain_precision(N, k2);
    const auto h = static_cast<Eigen::Index>(n);
    const auto t = static_cast<Eigen::Index>(N - n);
    Matrix marginal = a.topLeftCorner(h, h);
    if (t > 0) {
        Eigen::LLT<Matrix> tail(a.bottomRightCorner(t, t));
        require(tail.info() == Eigen::Success, ErrorCode::SingularConditionedBlock,
                "tail block of the chain precision");
        const Matrix cross = a.bottomLeftCorner(t, h);
        marginal -= cross.transpose() * tail.solve(cross);
    }
    Matrix shape = -Matrix::Ones(h, h);
    shape.diagonal().array() += double(n);
    const double coupling = (marginal.cwiseProduct(shape)).sum() / shape.squaredNorm();
    const double residual = (marginal - coupling * shape).norm() / marginal.norm();
    require(residual <= 1e-8, ErrorCode::ProjectionResidual,
            "marginal precision is not a multiple of (nI - J); residual " +
                std::to_string(residual));
    return coupling;
}

FirstCumulant::FirstCumulant(std::size_t N, std::size_t n, double k2, double k4)
    : N_(N), n_(n), k2_(k2), k4_(k4),
      conditioner_((check_sizes(N, n), chain_precision(N, k2)), head_indices(n)) {
    tail_cov_ = conditioner_.covariance();
    reference_ = raw(Vector::Zero(static_cast<Eigen::Index>(n)));
}

Vector FirstCumulant::tail_mean(const Vector& head_q) const {
    require(static_cast<std::size_t>(head_q.size()) == n_, ErrorCode::DimensionMismatch,
            "head has " + std::to_string(head_q.size()) + " coordinates, expected " +
                std::to_string(n_));
    return conditioner_.mean(Vector::Zero(static_cast<Eigen::Index>(N_)), head_q);
}

double FirstCumulant::raw(const Vector& head_q) const {
    const Vector mean = tail_mean(head_q);
    const auto h = static_cast<Eigen::Index>(n_);
    const auto t = static_cast<Eigen::Index>(N_ - n_);
    double sum = 0.0;
    for (Eigen::Index a = 0; a < h; ++a)
        for (Eigen::Index b = a + 1; b < h; ++b)
            sum += expected_quartic_pair(head_q(a), head_q(b), 0.0, 0.0, 0.0);
    for (Eigen::Index a = 0; a < h; ++a)
        for (Eigen::Index l = 0; l < t; ++l)
            sum += expected_quartic_pair(head_q(a), mean(l), 0.0, tail_cov_(l, l), 0.0);
    for (Eigen::Index j = 0; j < t; ++j)
        for (Eigen::Index l = j + 1; l < t; ++l)
            sum += expected_quartic_pair(mean(j), mean(l), tail_cov_(j, j), tail_cov_(l, l),
                                         tail_cov_(j, l));
    return 0.25 * k4_ * sum;
}

double FirstCumulant::operator()(const Vector& head_q) const { return raw(head_q) - reference_; }

double first_cumulant_h1(const Vector& head_q, std::size_t N, std::size_t n, double k2,
                         double k4) {
    return FirstCumulant(N, n, k2, k4)(head_q);
}

ReducedCoefficients cumulant_coefficients(std::size_t N, std::size_t n, double k2, double k4) {
    check_sizes(N, n);
    require(n >= 4, ErrorCode::BadRange, "coefficient fit needs n >= 4");
    const FirstCumulant h1(N, n, k2, k4);

    constexpr int probes = 12;
    std::mt19937_64 rng(0x5eedULL);
    std::uniform_real_distribution<double> unit(-0.5, 0.5);
    Eigen::MatrixXd design(probes, 3);
    Eigen::VectorXd values(probes);
    for (int r = 0; r < probes; ++r) {
        Vector q(static_cast<Eigen::Index>(n));
        for (auto& x : q) x = unit(rng);
        design.row(r) = reduced_basis(q).transpose();
        values(r) = h1(q);
    }
    const Eigen::Vector3d fit = design.colPivHouseholderQr().solve(values);
    const double scale = std::max(values.norm(), 1e-300);
    const double residual = (design * fit - values).norm() / scale;
    require(k4 == 0.0 || residual <= 1e-8, ErrorCode::ProjectionResidual,
            "first cumulant is not spanned by the reduced invariants; residual " +
                std::to_string(residual));

    ReducedCoefficients c;
    c.C2 = effective_quadratic_coupling_oracle(N, n, k2) + fit(0);
    c.C4 = fit(1);
    c.D4 = fit(2);
    c.source = CoefficientSource::numeric_oracle;
    c.N = N;
    c.n = n;
    c.k2 = k2;
    c.k4 = k4;
    return c;
}

ModelSpec reduce(const ModelSpec& model, std::size_t n, CoefficientSource source) {
    validate(model);
    if (const auto* sw = std::get_if<StuartWarren>(&model)) {
        check_sizes(sw->N, n);
        return ReducedLinear{n, sw->k, sw->kQ};
    }
    if (const auto* chain = std::get_if<QuarticChain>(&model)) {
        check_sizes(chain->N, n);
        const auto coeffs = source == CoefficientSource::closed_form
                                ? reduced_coefficients(chain->N, n, chain->k2, chain->k4)
                                : cumulant_coefficients(chain->N, n, chain->k2, chain->k4);
        return ReducedQuartic{n, coeffs, chain->masses.head(static_cast<Eigen::Index>(n))};
    }
    fail(ErrorCode::UnsupportedVariant, "model is already reduced");
}

}  // namespace opmech

#include "opmech/models.hpp"

#include "opmech/error.hpp"

#include <cmath>
#include <cstdio>
#include <string>
#include <type_traits>

namespace opmech {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_state(const ModelSpec& model, const Vector& q) {
    const auto d = dimension(model);
    require(static_cast<std::size_t>(q.size()) == d, ErrorCode::DimensionMismatch,
            "state has " + std::to_string(q.size()) + " coordinates, model expects " +
                std::to_string(d));
}

// Stuart–Warren right-hand side with `bath` particles; shared by the full and
// reduced linear models so that equal sizes give identical arithmetic.
void bath_rate(std::size_t bath, double k, double kQ, const double* q, double* dp) {
    const double Q = q[0];
    double pull = 0.0;
    for (std::size_t j = 1; j <= bath; ++j) {
        pull += q[j] - Q;
        dp[j] = k * (Q - q[j]);
    }
    dp[0] = -kQ * Q + k * pull;
}

double bath_potential(std::size_t bath, double k, double kQ, const double* q) {
    const double Q = q[0];
    double u = 0.5 * kQ * Q * Q;
    for (std::size_t j = 1; j <= bath; ++j) {
        const double d = Q - q[j];
        u += 0.5 * k * d * d;
    }
    return u;
}

Vector bath_masses(std::size_t bath, double k) {
    Vector m(bath + 1);
    m(0) = 1.0;
    for (std::size_t j = 1; j <= bath; ++j) m(j) = k / (double(j) * double(j));
    return m;
}

// dp_j -= Σ_{l≠j} [k2 (q_j - q_l) + k4 (q_j - q_l)³], one evaluation per unordered pair.
void pair_rate(std::size_t n, double k2, double k4, const double* q, double* dp) {
    for (std::size_t j = 0; j < n; ++j) dp[j] = 0.0;
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const double qj = q[j];
        double acc = 0.0;
#pragma omp simd reduction(+ : acc)
        for (std::size_t l = j + 1; l < n; ++l) {
            const double d = qj - q[l];
            const double f = d * (k2 + k4 * d * d);
            acc += f;
            dp[l] += f;
        }
        dp[j] -= acc;
    }
}

void mean_field_rate(std::size_t n, double k2, double k4, const double* q, double* dp) {
    double s1 = 0.0, s2 = 0.0, s3 = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
        s1 += q[l];
        s2 += q[l] * q[l];
        s3 += q[l] * q[l] * q[l];
    }
    const double N = double(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double x = q[j];
        const double lin = N * x - s1;
        const double cub = N * x * x * x - 3.0 * x * x * s1 + 3.0 * x * s2 - s3;
        dp[j] = -k2 * lin - k4 * cub;
    }
}

double pair_potential(std::size_t n, double k2, double k4, const double* q) {
    double u2 = 0.0, u4 = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t l = j + 1; l < n; ++l) {
            const double d2 = (q[j] - q[l]) * (q[j] - q[l]);
            u2 += d2;
            u4 += d2 * d2;
        }
    return 0.5 * k2 * u2 + 0.25 * k4 * u4;
}

// D4/4 Σ_μ (q_μ - q̄)⁴ and its force D4 [d_μ³ - (1/n) Σ_ν d_ν³].
double centroid_potential(std::size_t n, double d4, const double* q) {
    double c = 0.0;
    for (std::size_t j = 0; j < n; ++j) c += q[j];
    c /= double(n);
    double u = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double d = q[j] - c;
        u += d * d * d * d;
    }
    return 0.25 * d4 * u;
}

void add_centroid_rate(std::size_t n, double d4, const double* q, double* dp) {
    if (d4 == 0.0) return;
    double c = 0.0;
    for (std::size_t j = 0; j < n; ++j) c += q[j];
    c /= double(n);
    double s3 = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double d = q[j] - c;
        s3 += d * d * d;
    }
    const double mean3 = s3 / double(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double d = q[j] - c;
        dp[j] -= d4 * (d * d * d - mean3);
    }
}

double kinetic(const Vector& p, const Vector& m) {
    return 0.5 * (p.array().square() / m.array()).sum();
}

}  // namespace

Vector stiff_masses(std::size_t N, double exponent) {
    Vector m(N);
    for (std::size_t j = 1; j <= N; ++j)
        m(j - 1) = exponent == 2.0 ? 1.0 / (double(j) * double(j)) : std::pow(double(j), -exponent);
    return m;
}

QuarticChain quartic_chain(std::size_t N, double k2, double k4, double mass_exponent) {
    return QuarticChain{N, k2, k4, stiff_masses(N, mass_exponent)};
}

void validate(const ModelSpec& model) {
    std::visit(overloaded{
                   [](const StuartWarren& m) {
                       require(m.N >= 1, ErrorCode::BadRange, "StuartWarren needs N >= 1");
                       require(m.k > 0 && m.kQ > 0, ErrorCode::BadRange,
                               "StuartWarren spring constants must be positive");
                   },
                   [](const ReducedLinear& m) {
                       require(m.n >= 1, ErrorCode::BadRange, "ReducedLinear needs n >= 1");
                       require(m.k > 0 && m.kQ > 0, ErrorCode::BadRange,
                               "ReducedLinear spring constants must be positive");
                   },
                   [](const QuarticChain& m) {
                       require(m.N >= 1, ErrorCode::BadRange, "QuarticChain needs N >= 1");
                       require(m.k2 > 0 && m.k4 >= 0, ErrorCode::BadRange,
                               "QuarticChain needs k2 > 0 and k4 >= 0");
                       require(static_cast<std::size_t>(m.masses.size()) == m.N,
                               ErrorCode::DimensionMismatch, "QuarticChain mass vector length");
                       require((m.masses.array() > 0).all(), ErrorCode::BadRange,
                               "masses must be positive");
                   },
                   [](const ReducedQuartic& m) {
                       require(m.n >= 1, ErrorCode::BadRange, "ReducedQuartic needs n >= 1");
                       const auto& c = m.coefficients;
                       require(c.C2 > 0 && c.C4 >= 0 && c.D4 >= 0, ErrorCode::BadRange,
                               "ReducedQuartic needs C2 > 0, C4 >= 0, D4 >= 0");
                       require(static_cast<std::size_t>(m.masses.size()) == m.n,
                               ErrorCode::DimensionMismatch, "ReducedQuartic mass vector length");
                       require((m.masses.array() > 0).all(), ErrorCode::BadRange,
                               "masses must be positive");
                   },
               },
               model);
}

std::size_t dimension(const ModelSpec& model) {
    return std::visit(overloaded{
                          [](const StuartWarren& m) { return m.N + 1; },
                          [](const ReducedLinear& m) { return m.n + 1; },
                          [](const QuarticChain& m) { return m.N; },
                          [](const ReducedQuartic& m) { return m.n; },
                      },
                      model);
}

Vector masses(const ModelSpec& model) {
    return std::visit(overloaded{
                          [](const StuartWarren& m) { return bath_masses(m.N, m.k); },
                          [](const ReducedLinear& m) { return bath_masses(m.n, m.k); },
                          [](const QuarticChain& m) { return Vector(m.masses); },
                          [](const ReducedQuartic& m) { return Vector(m.masses); },
                      },
                      model);
}

bool is_reduced(const ModelSpec& model) {
    return std::holds_alternative<ReducedLinear>(model) ||
           std::holds_alternative<ReducedQuartic>(model);
}

std::string describe(const ModelSpec& model) {
    auto num = [](double x) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", x);
        return std::string(buf);
    };
    return std::visit(
        overloaded{
            [&](const StuartWarren& m) {
                return "StuartWarren(N=" + std::to_string(m.N) + ",k=" + num(m.k) +
                       ",kQ=" + num(m.kQ) + ")";
            },
            [&](const ReducedLinear& m) {
                return "ReducedLinear(n=" + std::to_string(m.n) + ",k=" + num(m.k) +
                       ",kQ=" + num(m.kQ) + ")";
            },
            [&](const QuarticChain& m) {
                return "QuarticChain(N=" + std::to_string(m.N) + ",k2=" + num(m.k2) +
                       ",k4=" + num(m.k4) + ")";
            },
            [&](const ReducedQuartic& m) {
                const auto& c = m.coefficients;
                return "ReducedQuartic(n=" + std::to_string(m.n) + ",C2=" + num(c.C2) +
                       ",C4=" + num(c.C4) + ",D4=" + num(c.D4) + ")";
            },
        },
        model);
}

std::size_t particle_slot(const ModelSpec& model, std::size_t j) {
    const bool bath = std::holds_alternative<StuartWarren>(model) ||
                      std::holds_alternative<ReducedLinear>(model);
    const std::size_t slot = bath ? j : j - 1;
    require(j >= 1 && slot < dimension(model), ErrorCode::IndexOutOfRange,
            "particle " + std::to_string(j) + " not in model");
    return slot;
}

void momentum_rate(const ModelSpec& model, const Vector& q, Vector& dp, ForcePath path) {
    check_state(model, q);
    dp.resize(q.size());
    const double* x = q.data();
    double* out = dp.data();
    std::visit(overloaded{
                   [&](const StuartWarren& m) { bath_rate(m.N, m.k, m.kQ, x, out); },
                   [&](const ReducedLinear& m) { bath_rate(m.n, m.k, m.kQ, x, out); },
                   [&](const QuarticChain& m) {
                       if (path == ForcePath::mean_field)
                           mean_field_rate(m.N, m.k2, m.k4, x, out);
                       else
                           pair_rate(m.N, m.k2, m.k4, x, out);
                   },
                   [&](const ReducedQuartic& m) {
                       const auto& c = m.coefficients;
                       if (path == ForcePath::mean_field)
                           mean_field_rate(m.n, c.C2, c.C4, x, out);
                       else
                           pair_rate(m.n, c.C2, c.C4, x, out);
                       add_centroid_rate(m.n, c.D4, x, out);
                   },
               },
               model);
}

Derivative force(const ModelSpec& model, const PhaseState& state, ForcePath path) {
    check_state(model, state.q);
    require(state.p.size() == state.q.size(), ErrorCode::DimensionMismatch,
            "q and p lengths differ");
    Derivative d;
    d.dq = (state.p.array() / masses(model).array()).matrix();
    momentum_rate(model, state.q, d.dp, path);
    return d;
}

double energy(const ModelSpec& model, const PhaseState& state) {
    check_state(model, state.q);
    require(state.p.size() == state.q.size(), ErrorCode::DimensionMismatch,
            "q and p lengths differ");
    const double* x = state.q.data();
    const double u = std::visit(
        overloaded{
            [&](const StuartWarren& m) { return bath_potential(m.N, m.k, m.kQ, x); },
            [&](const ReducedLinear& m) { return bath_potential(m.n, m.k, m.kQ, x); },
            [&](const QuarticChain& m) { return pair_potential(m.N, m.k2, m.k4, x); },
            [&](const ReducedQuartic& m) {
                const auto& c = m.coefficients;
                return pair_potential(m.n, c.C2, c.C4, x) + centroid_potential(m.n, c.D4, x);
            },
        },
        model);
    return kinetic(state.p, masses(model)) + u;
}

Matrix coordinate_precision(const ModelSpec& model) {
    auto bath = [](std::size_t b, double k, double kQ) {
        const auto d = static_cast<Eigen::Index>(b + 1);
        Matrix a = Matrix::Zero(d, d);
        a(0, 0) = kQ + k * double(b);
        for (Eigen::Index j = 1; j < d; ++j) {
            a(0, j) = a(j, 0) = -k;
            a(j, j) = k;
        }
        return a;
    };
    auto pairs = [](std::size_t n, double c) {
        const auto d = static_cast<Eigen::Index>(n);
        Matrix a = Matrix::Constant(d, d, -c);
        a.diagonal().array() += c * double(n);
        return a;
    };
    return std::visit(overloaded{
                          [&](const StuartWarren& m) { return bath(m.N, m.k, m.kQ); },
                          [&](const ReducedLinear& m) { return bath(m.n, m.k, m.kQ); },
                          [&](const QuarticChain& m) { return pairs(m.N, m.k2); },
                          [&](const ReducedQuartic& m) { return pairs(m.n, m.coefficients.C2); },
                      },
                      model);
}

std::uint64_t force_pairs(const ModelSpec& model) {
    auto pairs = [](std::uint64_t n) { return n * (n - 1) / 2; };
    return std::visit(overloaded{
                          [](const StuartWarren& m) { return std::uint64_t(m.N); },
                          [](const ReducedLinear& m) { return std::uint64_t(m.n); },
                          [&](const QuarticChain& m) { return pairs(m.N); },
                          [&](const ReducedQuartic& m) { return pairs(m.n); },
                      },
                      model);
}

QuarticChain naive_truncation(const QuarticChain& model, std::size_t n) {
    require(n >= 1 && n <= model.N, ErrorCode::BadRange,
            "truncation size " + std::to_string(n) + " outside [1, " + std::to_string(model.N) +
                "]");
    return QuarticChain{n, model.k2, model.k4, model.masses.head(n)};
}

Vector mode_frequencies(const ModelSpec& model) {
    const StuartWarren* sw = std::get_if<StuartWarren>(&model);
    require(sw != nullptr, ErrorCode::WrongVariant, "mode frequencies need a StuartWarren model");
    const Vector m = bath_masses(sw->N, sw->k);
    Vector w(sw->N);
    for (std::size_t j = 1; j <= sw->N; ++j) w(j - 1) = std::sqrt(sw->k / m(j));
    return w;
}

double max_frequency(const ModelSpec& model) {
    const Vector m = masses(model);
    Vector stiffness(m.size());
    std::visit(overloaded{
                   [&](const StuartWarren& s) {
                       stiffness.setConstant(s.k);
                       stiffness(0) = s.kQ + s.k * double(s.N);
                   },
                   [&](const ReducedLinear& s) {
                       stiffness.setConstant(s.k);
                       stiffness(0) = s.kQ + s.k * double(s.n);
                   },
                   [&](const QuarticChain& s) { stiffness.setConstant(s.k2 * double(s.N - 1)); },
                   [&](const ReducedQuartic& s) {
                       stiffness.setConstant(s.coefficients.C2 * double(s.n - 1));
                   },
               },
               model);
    return (stiffness.array() / m.array()).sqrt().maxCoeff();
}

}  // namespace opmech

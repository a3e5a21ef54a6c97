#include <doctest.h>

#include "opmech/error.hpp"
#include "opmech/models.hpp"
#include "opmech/reduction.hpp"
#include "opmech/sampling.hpp"

#include <cmath>
#include <cstring>

using namespace opmech;

namespace {

PhaseState random_state(const ModelSpec& m, Rng& rng, double scale = 0.5) {
    const auto d = Eigen::Index(dimension(m));
    return {scale * standard_normal(d, rng), standard_normal(d, rng)};
}

std::vector<ModelSpec> every_variant() {
    return {StuartWarren{6, 1.3, 0.7}, quartic_chain(7, 1.0, 0.4), ReducedLinear{4, 0.8, 1.2},
            ReducedQuartic{5, reduced_coefficients(40, 5, 1.0, 0.2), stiff_masses(5)}};
}

}  // namespace

TEST_CASE("energy examples") {
    const ModelSpec sw = StuartWarren{5, 1.0, 1.0};
    PhaseState s{Vector::Constant(6, 1.5), Vector::Zero(6)};
    CHECK(energy(sw, s) == doctest::Approx(1.125).epsilon(1e-15));

    const ModelSpec chain = QuarticChain{2, 1.0, 1.0, Vector::Ones(2)};
    CHECK(energy(chain, {Vector{{1.0, 0.0}}, Vector::Zero(2)}) == 0.75);

    Rng rng(1);
    for (const auto& m : every_variant()) {
        PhaseState x = random_state(m, rng);
        PhaseState rest = x;
        rest.p.setZero();
        const double kinetic = (x.p.array().square() / masses(m).array()).sum() / 2;
        CHECK(energy(m, x) - energy(m, rest) == doctest::Approx(kinetic).epsilon(1e-12));
    }
}

TEST_CASE("force examples") {
    const ModelSpec sw = StuartWarren{1, 1.0, 1.0};
    const auto f = force(sw, {Vector{{0.0, 1.0}}, Vector::Zero(2)});
    CHECK(f.dp(0) == 1.0);
    CHECK(f.dp(1) == -1.0);

    ReducedCoefficients c;
    c.C2 = c.C4 = c.D4 = 1.0;
    const ModelSpec rq = ReducedQuartic{2, c, Vector::Ones(2)};
    const auto g = force(rq, {Vector{{1.0, -1.0}}, Vector::Zero(2)});
    CHECK(g.dp(0) == doctest::Approx(-11.0));
    CHECK(g.dp(1) == doctest::Approx(11.0));

    const ModelSpec chain = quartic_chain(9, 1.0, 0.3);
    const auto h = force(chain, {Vector::Constant(9, 0.37), Vector::Zero(9)});
    CHECK(h.dp.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("dimension mismatch is rejected") {
    const ModelSpec chain = quartic_chain(4, 1.0, 0.1);
    PhaseState bad{Vector::Zero(3), Vector::Zero(3)};
    try {
        energy(chain, bad);
        FAIL("expected DimensionMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DimensionMismatch);
    }
    CHECK_THROWS_AS(force(chain, bad), Error);
}

TEST_CASE("force is minus the gradient of the energy") {
    Rng rng(2);
    for (const auto& m : every_variant()) {
        CAPTURE(describe(m));
        for (int trial = 0; trial < 20; ++trial) {
            const PhaseState x = random_state(m, rng);
            const auto f = force(m, x);
            const auto d = x.q.size();
            Vector gq(d), gp(d);
            const double h = 1e-5;
            for (Eigen::Index i = 0; i < d; ++i) {
                PhaseState a = x, b = x;
                a.q(i) += h;
                b.q(i) -= h;
                gq(i) = (energy(m, a) - energy(m, b)) / (2 * h);
                a = x;
                b = x;
                a.p(i) += h;
                b.p(i) -= h;
                gp(i) = (energy(m, a) - energy(m, b)) / (2 * h);
            }
            const double scale = std::max(f.dp.cwiseAbs().maxCoeff(), f.dq.cwiseAbs().maxCoeff());
            CHECK((f.dp + gq).cwiseAbs().maxCoeff() / scale < 1e-6);
            CHECK((f.dq - gp).cwiseAbs().maxCoeff() / scale < 1e-6);
        }
    }
}

TEST_CASE("Hamiltonian flow is tangent to energy surfaces") {
    Rng rng(3);
    for (const auto& m : every_variant()) {
        for (int trial = 0; trial < 20; ++trial) {
            const PhaseState x = random_state(m, rng);
            const auto f = force(m, x);
            // Directional derivative of H along the flow, by a central difference.
            const double h = 1e-6;
            PhaseState a = x, b = x;
            a.q += h * f.dq;
            a.p += h * f.dp;
            b.q -= h * f.dq;
            b.p -= h * f.dp;
            const double rate = (energy(m, a) - energy(m, b)) / (2 * h);
            const double scale = f.dq.squaredNorm() + f.dp.squaredNorm();
            CHECK(std::abs(rate) <= 1e-8 * scale);
        }
    }
}

TEST_CASE("pair forces cancel in the momentum sum") {
    Rng rng(4);
    const std::vector<ModelSpec> chains = {
        quartic_chain(30, 1.0, 0.5),
        ReducedQuartic{8, reduced_coefficients(200, 8, 1.0, 0.1), stiff_masses(8)}};
    for (const auto& m : chains) {
        for (int trial = 0; trial < 20; ++trial) {
            const PhaseState x = random_state(m, rng, 2.0);
            const Vector dp = force(m, x).dp;
            CHECK(std::abs(dp.sum()) <= 1e-12 * dp.cwiseAbs().sum());
        }
    }
}

TEST_CASE("pairwise and power-sum force paths agree") {
    Rng rng(5);
    for (const auto& m : every_variant()) {
        const PhaseState x = random_state(m, rng);
        const Vector a = force(m, x, ForcePath::pairwise).dp;
        const Vector b = force(m, x, ForcePath::mean_field).dp;
        CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-10 * (1 + a.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("cut bath has the same right-hand side as a small bath") {
    Rng rng(6);
    const ModelSpec sw = StuartWarren{12, 0.9, 1.4};
    const ModelSpec cut = ReducedLinear{12, 0.9, 1.4};
    const PhaseState x = random_state(sw, rng);
    const auto a = force(sw, x), b = force(cut, x);
    CHECK(std::memcmp(a.dq.data(), b.dq.data(), sizeof(double) * a.dq.size()) == 0);
    CHECK(std::memcmp(a.dp.data(), b.dp.data(), sizeof(double) * a.dp.size()) == 0);
    CHECK(energy(sw, x) == energy(cut, x));
}

TEST_CASE("naive truncation") {
    const QuarticChain full = quartic_chain(1000, 1.0, 0.1);
    const QuarticChain same = naive_truncation(full, 1000);
    CHECK(same.N == 1000);
    CHECK(same.masses == full.masses);

    const QuarticChain ten = naive_truncation(full, 10);
    CHECK(ten.N == 10);
    CHECK(ten.k2 == 1.0);
    CHECK(ten.k4 == 0.1);
    CHECK(ten.masses == full.masses.head(10));

    const QuarticChain one = naive_truncation(full, 1);
    const auto f = force(ModelSpec(one), {Vector{{3.0}}, Vector{{1.0}}});
    CHECK(f.dp(0) == 0.0);

    CHECK_THROWS_AS(naive_truncation(full, 0), Error);
    CHECK_THROWS_AS(naive_truncation(full, 1001), Error);
}

TEST_CASE("bath mode frequencies") {
    CHECK(mode_frequencies(StuartWarren{3, 1.0, 1.0}) == Vector{{1.0, 2.0, 3.0}});
    const Vector k5 = mode_frequencies(StuartWarren{3, 5.0, 1.0});
    for (int j = 0; j < 3; ++j) CHECK(k5(j) == doctest::Approx(j + 1.0).epsilon(1e-15));
    CHECK(mode_frequencies(StuartWarren{1, 1.0, 1.0}) == Vector{{1.0}});
    try {
        mode_frequencies(quartic_chain(3, 1.0, 0.0));
        FAIL("expected WrongVariant");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::WrongVariant);
    }
}

TEST_CASE("model validation") {
    CHECK_THROWS_AS(validate(StuartWarren{0, 1.0, 1.0}), Error);
    CHECK_THROWS_AS(validate(StuartWarren{3, -1.0, 1.0}), Error);
    CHECK_THROWS_AS(validate(QuarticChain{3, 1.0, -0.1, Vector::Ones(3)}), Error);
    CHECK_THROWS_AS(validate(QuarticChain{3, 1.0, 0.1, Vector::Ones(2)}), Error);
    CHECK_THROWS_AS(validate(QuarticChain{2, 1.0, 0.1, Vector{{1.0, 0.0}}}), Error);
    CHECK_NOTHROW(validate(quartic_chain(3, 1.0, 0.0)));
}

TEST_CASE("layout and bookkeeping") {
    const ModelSpec sw = StuartWarren{4, 2.0, 1.0};
    CHECK(dimension(sw) == 5);
    CHECK(particle_slot(sw, 1) == 1);
    const Vector m = masses(sw);
    CHECK(m(0) == 1.0);
    CHECK(m(2) == doctest::Approx(0.5));
    CHECK(force_pairs(sw) == 4);

    const ModelSpec chain = quartic_chain(10, 1.0, 0.1);
    CHECK(dimension(chain) == 10);
    CHECK(particle_slot(chain, 1) == 0);
    CHECK(force_pairs(chain) == 45);
    CHECK(masses(chain)(2) == doctest::Approx(1.0 / 9));
    CHECK(max_frequency(StuartWarren{100, 1.0, 1.0}) >= 100.0);
}

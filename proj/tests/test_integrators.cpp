#include <doctest.h>

#include "opmech/error.hpp"
#include "opmech/integrators.hpp"
#include "opmech/models.hpp"
#include "opmech/sampling.hpp"

#include <Eigen/LU>

#include <cmath>
#include <cstring>

using namespace opmech;

namespace {

// Two unit masses on a k2 = 1/2 spring: the separation oscillates with unit frequency.
const ModelSpec unit_oscillator = QuarticChain{2, 0.5, 0.0, Vector::Ones(2)};

double max_energy_error(const ModelSpec& m, PhaseState s, double dt, int steps) {
    const double h0 = energy(m, s);
    double worst = 0.0;
    for (int i = 0; i < steps; ++i) {
        s = step_verlet(m, s, dt);
        worst = std::max(worst, std::abs(energy(m, s) - h0));
    }
    return worst;
}

}  // namespace

TEST_CASE("sigma step by hand") {
    const ModelSpec sw = StuartWarren{1, 1.0, 1.0};
    const PhaseState s = step_sigma(sw, {Vector{{1.0, 0.0}}, Vector{{0.0, 0.0}}}, 0.1, 0);
    CHECK(s.p(0) == doctest::Approx(-0.2).epsilon(1e-15));
    CHECK(s.q(0) == doctest::Approx(0.98).epsilon(1e-15));
    CHECK(s.p(1) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(s.q(1) == doctest::Approx(0.01).epsilon(1e-15));

    // sigma = 1 feeds the new bath coordinate (0.01) into the pull on P.
    const PhaseState t = step_sigma(sw, {Vector{{1.0, 0.0}}, Vector{{0.0, 0.0}}}, 0.1, 1);
    CHECK(t.p(0) == doctest::Approx(0.1 * (-1.0 + (0.01 - 1.0))).epsilon(1e-15));
}

TEST_CASE("sigma schemes are first-order consistent") {
    const ModelSpec sw = StuartWarren{5, 1.0, 1.0};
    Rng rng(1);
    const PhaseState x{standard_normal(6, rng), standard_normal(6, rng)};
    const auto f = force(sw, x);
    for (int sigma : {0, 1}) {
        std::vector<double> gaps;
        for (double dt = 1e-2; dt > 1e-4; dt /= 2) {
            const PhaseState y = step_sigma(sw, x, dt, sigma);
            const double gap = std::hypot((y.q - x.q - dt * f.dq).norm(),
                                          (y.p - x.p - dt * f.dp).norm());
            gaps.push_back(gap);
        }
        for (std::size_t i = 1; i < gaps.size(); ++i)
            CHECK(std::log2(gaps[i - 1] / gaps[i]) >= 1.9);
    }
}

TEST_CASE("sigma = 0 is symplectic and sigma = 1 is not") {
    Rng rng(2);
    std::uniform_real_distribution<double> u(0.2, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        const ModelSpec sw = StuartWarren{std::size_t(1 + trial % 6), u(rng), u(rng)};
        const double dt = 0.05 * u(rng);
        const auto d = Eigen::Index(dimension(sw));
        auto jacobian = [&](int sigma) {
            Matrix J(2 * d, 2 * d);
            for (Eigen::Index c = 0; c < 2 * d; ++c) {
                PhaseState e{Vector::Zero(d), Vector::Zero(d)};
                (c < d ? e.q(c) : e.p(c - d)) = 1.0;
                const PhaseState o = step_sigma(sw, e, dt, sigma);
                J.col(c) << o.q, o.p;
            }
            return J;
        };
        Matrix omega = Matrix::Zero(2 * d, 2 * d);
        omega.topRightCorner(d, d).setIdentity();
        omega.bottomLeftCorner(d, d) = -Matrix::Identity(d, d);
        const Matrix J0 = jacobian(0), J1 = jacobian(1);
        CHECK(std::abs(J0.determinant() - 1.0) < 1e-12);
        CHECK((J0.transpose() * omega * J0 - omega).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((J1.transpose() * omega * J1 - omega).cwiseAbs().maxCoeff() > 1e-6);
    }
}

TEST_CASE("sigma = 0 keeps energy bounded and sigma = 1 drifts") {
    const ModelSpec sw = StuartWarren{1, 1.0, 1.0};
    const PhaseState x0{Vector{{1.0, 0.0}}, Vector{{0.0, 0.0}}};
    const double h0 = energy(sw, x0);
    const double dt = 1e-3;
    double drift0 = 0.0;
    PhaseState a = x0, b = x0;
    std::vector<double> h1;
    for (int i = 1; i <= 1000000; ++i) {
        a = step_sigma(sw, a, dt, 0);
        b = step_sigma(sw, b, dt, 1);
        drift0 = std::max(drift0, std::abs(energy(sw, a) - h0) / h0);
        if (i % 100000 == 0) h1.push_back(energy(sw, b));
    }
    CHECK(drift0 < 1e-3);
    CHECK(std::abs(h1.back() - h0) / h0 > 1e-2);
    // Sampled at coarse intervals the change is one-signed and growing.
    for (std::size_t i = 1; i < h1.size(); ++i)
        CHECK(std::abs(h1[i] - h0) > std::abs(h1[i - 1] - h0));
}

TEST_CASE("Verlet examples") {
    SUBCASE("free particles drift") {
        // k2 must be positive; at 1e-300 the spring force underflows against the momenta.
        const ModelSpec free = QuarticChain{3, 1e-300, 0.0, Vector{{1.0, 2.0, 4.0}}};
        const PhaseState x{Vector{{0.0, 1.0, 2.0}}, Vector{{1.0, 1.0, 1.0}}};
        const PhaseState y = step_verlet(free, x, 0.5);
        CHECK(y.q(0) == doctest::Approx(0.5));
        CHECK(y.q(1) == doctest::Approx(1.25));
        CHECK(y.q(2) == doctest::Approx(2.125));
        CHECK(y.p == x.p);
    }
    SUBCASE("one period of a unit oscillator") {
        // 628 steps of about 0.01 span exactly one period.
        const int steps = 628;
        const double dt = 2 * M_PI / steps;
        PhaseState s{Vector{{1.0, 0.0}}, Vector::Zero(2)};
        for (int i = 0; i < steps; ++i) s = step_verlet(unit_oscillator, s, dt);
        CHECK(std::abs(s.q(0) - s.q(1) - 1.0) < 1e-3);
        CHECK(std::abs(s.p(0)) < 1e-3);
    }
    SUBCASE("reversible") {
        Rng rng(3);
        const ModelSpec chain = quartic_chain(8, 1.0, 0.3);
        const PhaseState x{standard_normal(8, rng), standard_normal(8, rng)};
        const PhaseState back = step_verlet(chain, step_verlet(chain, x, 1e-3), -1e-3);
        CHECK((back.q - x.q).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((back.p - x.p).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("Verlet energy error is second order") {
    const PhaseState x{Vector{{1.0, 0.0}}, Vector::Zero(2)};
    const double coarse = max_energy_error(unit_oscillator, x, 0.02, 1000);
    const double fine = max_energy_error(unit_oscillator, x, 0.01, 2000);
    CHECK(coarse / fine >= 3.5);
    CHECK(coarse / fine <= 4.5);
}

TEST_CASE("Verlet conserves chain momentum") {
    const QuarticChain chain = quartic_chain(50, 1.0, 0.1);
    const ModelSpec m(chain);
    Rng rng(4);
    PhaseState s{0.2 * standard_normal(50, rng), sample_momenta(chain.masses, rng)};
    const double p0 = s.p.sum();
    const double dt = 1e-2 / max_frequency(m);
    double worst = 0.0;
    for (int i = 0; i < 100000; ++i) {
        s = step_verlet(m, s, dt);
        worst = std::max(worst, std::abs(s.p.sum() - p0));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("integrate records") {
    const ModelSpec sw = StuartWarren{100, 1.0, 1.0};
    Rng rng(5);
    const PhaseState x{standard_normal(101, rng), standard_normal(101, rng)};

    const auto r = integrate(sw, {SigmaScheme{0}, 1e-4}, x, 1e-3, 1, {"Q", "P", "energy"});
    CHECK(r.times.size() == 11);
    CHECK(r.times.front() == 0.0);
    CHECK(r.times.back() == doctest::Approx(1e-3));
    for (std::size_t i = 1; i < r.times.size(); ++i) CHECK(r.times[i] > r.times[i - 1]);
    for (const auto& c : r.columns) CHECK(c.size() == r.times.size());
    CHECK(r.column("Q")[0] == x.q(0));
    CHECK(r.stiffness_ratio == doctest::Approx(0.01).epsilon(1e-12));
    CHECK_FALSE(r.under_resolved);
    CHECK(r.steps == 10);

    const auto coarse = integrate(sw, {SigmaScheme{0}, 2e-2}, x, 0.2, 5, {"Q"});
    CHECK(coarse.under_resolved);
    CHECK(coarse.times.size() == 3);

    const auto again = integrate(sw, {SigmaScheme{0}, 1e-4}, x, 1e-3, 1, {"Q", "P", "energy"});
    for (std::size_t c = 0; c < r.columns.size(); ++c)
        CHECK(std::memcmp(r.columns[c].data(), again.columns[c].data(),
                          sizeof(double) * r.columns[c].size()) == 0);
}

TEST_CASE("integrate flags blow-up with a partial record") {
    // sigma = 1 far past its stability limit.
    const ModelSpec sw = StuartWarren{100, 1.0, 1.0};
    Rng rng(6);
    const PhaseState x{standard_normal(101, rng), standard_normal(101, rng)};
    const auto r = integrate(sw, {SigmaScheme{1}, 0.1}, x, 1000.0, 10, {"Q"});
    CHECK(r.blew_up);
    CHECK(r.times.size() < 1001);
    CHECK(r.column("Q").size() == r.times.size());
}

TEST_CASE("integrator errors") {
    const ModelSpec chain = quartic_chain(3, 1.0, 0.1);
    const PhaseState x{Vector::Zero(3), Vector::Zero(3)};
    try {
        step_sigma(chain, x, 0.1, 0);
        FAIL("expected WrongVariant");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::WrongVariant);
    }
    CHECK_THROWS_AS(step_verlet(chain, {Vector::Zero(2), Vector::Zero(2)}, 0.1), Error);
    CHECK_THROWS_AS(integrate(chain, {VelocityVerlet{}, 0.1}, x, 0.25, 1, {"p1"}), Error);
    CHECK_THROWS_AS(integrate(chain, {VelocityVerlet{}, 0.1}, x, 1.0, 3, {"p1"}), Error);
    CHECK_THROWS_AS(integrate(chain, {VelocityVerlet{}, 0.1}, x, 1.0, 1, {"Q"}), Error);
    CHECK_THROWS_AS(validate(SchemeSpec{SigmaScheme{2}, 0.1}), Error);
    CHECK_THROWS_AS(validate(SchemeSpec{VelocityVerlet{}, 0.0}), Error);
    CHECK(step_count(1.0, 1e-3) == 1000);
}

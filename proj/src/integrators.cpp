#include "opmech/integrators.hpp"

#include "opmech/error.hpp"

#include <cmath>
#include <cstdio>
#include <functional>

namespace opmech {

namespace {

struct BathParams {
    std::size_t bath;
    double k;
    double kQ;
};

BathParams bath_params(const ModelSpec& model) {
    if (const auto* sw = std::get_if<StuartWarren>(&model)) return {sw->N, sw->k, sw->kQ};
    if (const auto* r = std::get_if<ReducedLinear>(&model)) return {r->n, r->k, r->kQ};
    fail(ErrorCode::WrongVariant, "sigma scheme needs a StuartWarren-type model");
}

void check_state(const ModelSpec& model, const PhaseState& s) {
    const auto d = dimension(model);
    require(static_cast<std::size_t>(s.q.size()) == d && static_cast<std::size_t>(s.p.size()) == d,
            ErrorCode::DimensionMismatch,
            "state size " + std::to_string(s.q.size()) + "/" + std::to_string(s.p.size()) +
                " does not match model dimension " + std::to_string(d));
}

// In-place σ-scheme step; `m` holds the bath masses (slot 0 unused).
void sigma_step(const BathParams& b, const double* m, double* q, double* p, double dt,
                int sigma) {
    const double Q = q[0];
    double pull = 0.0;
    if (sigma == 0) {
        for (std::size_t j = 1; j <= b.bath; ++j) {
            pull += q[j] - Q;
            p[j] += dt * b.k * (Q - q[j]);
            q[j] += dt * p[j] / m[j];
        }
    } else {
        for (std::size_t j = 1; j <= b.bath; ++j) {
            p[j] += dt * b.k * (Q - q[j]);
            q[j] += dt * p[j] / m[j];
            pull += q[j] - Q;
        }
    }
    p[0] += dt * (-b.kQ * Q + b.k * pull);
    q[0] += dt * p[0];
}

bool finite_and_bounded(const PhaseState& s) {
    auto ok = [](const Vector& v) {
        for (double x : v)
            if (!(std::abs(x) <= blow_up_threshold)) return false;
        return true;
    };
    return ok(s.q) && ok(s.p);
}

using Probe = std::function<double(const PhaseState&)>;

Probe make_probe(const ModelSpec& model, const std::string& name) {
    const bool bath = std::holds_alternative<StuartWarren>(model) ||
                      std::holds_alternative<ReducedLinear>(model);
    if (name == "energy") return [model](const PhaseState& s) { return energy(model, s); };
    if (name == "momentum") return [](const PhaseState& s) { return s.p.sum(); };
    if (bath && name == "Q") return [](const PhaseState& s) { return s.q(0); };
    if (bath && name == "P") return [](const PhaseState& s) { return s.p(0); };
    if (name.size() >= 2 && (name[0] == 'q' || name[0] == 'p')) {
        std::size_t j = 0;
        try {
            std::size_t used = 0;
            j = std::stoul(name.substr(1), &used);
            if (used != name.size() - 1) j = 0;
        } catch (const std::exception&) {
            j = 0;
        }
        if (j >= 1) {
            const auto slot = static_cast<Eigen::Index>(particle_slot(model, j));
            if (name[0] == 'q') return [slot](const PhaseState& s) { return s.q(slot); };
            return [slot](const PhaseState& s) { return s.p(slot); };
        }
    }
    fail(ErrorCode::BadRange, "unknown observable '" + name + "' for " + describe(model));
}

}  // namespace

void validate(const SchemeSpec& scheme) {
    require(scheme.dt > 0 && std::isfinite(scheme.dt), ErrorCode::BadRange, "dt must be > 0");
    if (const auto* s = std::get_if<SigmaScheme>(&scheme.variant))
        require(s->sigma == 0 || s->sigma == 1, ErrorCode::BadRange, "sigma must be 0 or 1");
}

std::string describe(const SchemeSpec& scheme) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", scheme.dt);
    if (const auto* s = std::get_if<SigmaScheme>(&scheme.variant))
        return "Sigma" + std::to_string(s->sigma) + "(dt=" + buf + ")";
    return std::string("VelocityVerlet(dt=") + buf + ")";
}

PhaseState step_sigma(const ModelSpec& model, const PhaseState& state, double dt, int sigma) {
    const auto b = bath_params(model);
    check_state(model, state);
    require(sigma == 0 || sigma == 1, ErrorCode::BadRange, "sigma must be 0 or 1");
    const Vector m = masses(model);
    PhaseState next = state;
    sigma_step(b, m.data(), next.q.data(), next.p.data(), dt, sigma);
    return next;
}

PhaseState step_verlet(const ModelSpec& model, const PhaseState& state, double dt) {
    check_state(model, state);
    const Vector m = masses(model);
    PhaseState next = state;
    Vector f;
    momentum_rate(model, next.q, f);
    next.p += 0.5 * dt * f;
    next.q.array() += dt * next.p.array() / m.array();
    momentum_rate(model, next.q, f);
    next.p += 0.5 * dt * f;
    return next;
}

const std::vector<double>& TrajectoryRecord::column(std::string_view name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return columns[i];
    fail(ErrorCode::BadRange, "record has no column '" + std::string(name) + "'");
}

std::uint64_t step_count(double T, double dt) {
    require(T > 0 && dt > 0, ErrorCode::BadRange, "need T > 0 and dt > 0");
    const double ratio = T / dt;
    const auto steps = static_cast<std::uint64_t>(std::llround(ratio));
    require(steps >= 1 && std::abs(ratio - double(steps)) <= 1e-9 * ratio, ErrorCode::BadRange,
            "horizon is not a whole number of steps");
    return steps;
}

TrajectoryRecord integrate(const ModelSpec& model, const SchemeSpec& scheme,
                           const PhaseState& state0, double T, std::uint64_t output_every,
                           const std::vector<std::string>& observables) {
    validate(model);
    validate(scheme);
    check_state(model, state0);
    require(output_every >= 1, ErrorCode::BadRange, "output_every must be >= 1");
    const auto steps = step_count(T, scheme.dt);
    require(steps % output_every == 0, ErrorCode::BadRange,
            "output interval does not divide the step count");

    TrajectoryRecord rec;
    rec.scheme = scheme;
    rec.model_digest = describe(model);
    rec.stiffness_ratio = max_frequency(model) * scheme.dt;
    rec.under_resolved = rec.stiffness_ratio >= 1.0;
    rec.names = observables;
    std::vector<Probe> probes;
    for (const auto& name : observables) probes.push_back(make_probe(model, name));
    rec.columns.assign(observables.size(), {});
    const auto rows = steps / output_every + 1;
    rec.times.reserve(rows);
    for (auto& c : rec.columns) c.reserve(rows);

    auto record = [&](std::uint64_t step, const PhaseState& s) {
        rec.times.push_back(double(step) * scheme.dt);
        for (std::size_t i = 0; i < probes.size(); ++i) rec.columns[i].push_back(probes[i](s));
    };

    PhaseState s = state0;
    const Vector m = masses(model);
    const double dt = scheme.dt;
    record(0, s);

    if (const auto* sig = std::get_if<SigmaScheme>(&scheme.variant)) {
        const auto b = bath_params(model);
        for (std::uint64_t step = 1; step <= steps; ++step) {
            sigma_step(b, m.data(), s.q.data(), s.p.data(), dt, sig->sigma);
            rec.force_pairs += force_pairs(model);
            rec.steps = step;
            if (!finite_and_bounded(s)) {
                rec.blew_up = true;
                break;
            }
            if (step % output_every == 0) record(step, s);
        }
        return rec;
    }

    const auto pairs = force_pairs(model);
    const Eigen::ArrayXd inv_m = m.array().inverse();
    Vector f;
    momentum_rate(model, s.q, f);
    rec.force_pairs += pairs;
    for (std::uint64_t step = 1; step <= steps; ++step) {
        s.p += 0.5 * dt * f;
        s.q.array() += dt * s.p.array() * inv_m;
        momentum_rate(model, s.q, f);
        s.p += 0.5 * dt * f;
        rec.force_pairs += pairs;
        rec.steps = step;
        if (!finite_and_bounded(s)) {
            rec.blew_up = true;
            break;
        }
        if (step % output_every == 0) record(step, s);
    }
    return rec;
}

}  // namespace opmech

#include "opmech/harness.hpp"

#include "opmech/error.hpp"
#include "opmech/reduction.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <limits>
#include <sstream>
#include <thread>

namespace opmech {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

const std::vector<double>& find_column(const std::vector<std::string>& names,
                                       const std::vector<std::vector<double>>& cols,
                                       const std::string& name) {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return cols[i];
    fail(ErrorCode::BadRange, "no observable '" + name + "'");
}

std::uint64_t steps_per_output(double output_dt, double dt) {
    const double ratio = output_dt / dt;
    const auto every = static_cast<std::uint64_t>(std::llround(ratio));
    require(every >= 1 && std::abs(ratio - double(every)) <= 1e-9 * ratio, ErrorCode::Config,
            "output-dt " + format_number(output_dt) + " is not a multiple of dt " +
                format_number(dt));
    return every;
}

PhaseState concat(const PhaseState& head, const PhaseState& tail) {
    PhaseState s;
    s.q.resize(head.q.size() + tail.q.size());
    s.p.resize(head.p.size() + tail.p.size());
    s.q << head.q, tail.q;
    s.p << head.p, tail.p;
    return s;
}

PhaseState head_of(const PhaseState& s, Eigen::Index h) {
    return PhaseState{s.q.head(h), s.p.head(h)};
}

// Runs `fn` repeatedly until at least `min_s` seconds have passed; returns the
// result of the last call and the mean wall clock per call.
template <class Fn>
auto timed_average(Fn fn, double min_s, double& per_call_s) {
    const auto t0 = Clock::now();
    auto result = fn();
    int calls = 1;
    while (seconds_since(t0) < min_s && calls < 1000) {
        result = fn();
        ++calls;
    }
    per_call_s = seconds_since(t0) / calls;
    return result;
}

void check_grids(const std::vector<double>& a, const std::vector<double>& b) {
    require(a.size() == b.size(), ErrorCode::DimensionMismatch,
            "output grids differ in length (" + std::to_string(a.size()) + " vs " +
                std::to_string(b.size()) + ")");
    for (std::size_t i = 0; i < a.size(); ++i)
        require(std::abs(a[i] - b[i]) <= 1e-9 * std::max(1.0, std::abs(a[i])),
                ErrorCode::DimensionMismatch, "output grids differ at row " + std::to_string(i));
}

std::vector<double> padded(std::vector<double> v, std::size_t rows) {
    v.resize(rows, std::numeric_limits<double>::quiet_NaN());
    return v;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& ref) {
    if (a.size() != ref.size()) return std::numeric_limits<double>::infinity();
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = std::abs(a[i] - ref[i]);
        if (!std::isfinite(d)) return std::numeric_limits<double>::infinity();
        m = std::max(m, d);
    }
    return m;
}

void append(Metrics& dst, const Metrics& src, const std::string& prefix = {}) {
    for (const auto& [k, v] : src) dst.emplace_back(prefix + k, v);
}

}  // namespace

const std::vector<double>& EnsembleSummary::mean_of(const std::string& name) const {
    return find_column(names, mean, name);
}

const std::vector<double>& EnsembleSummary::stderr_of(const std::string& name) const {
    return find_column(names, stderr_, name);
}

PhaseState stuart_warren_initial_state(const StuartWarren& model, double Q0, Rng& rng) {
    validate(ModelSpec(model));
    const ModelSpec spec(model);
    const auto d = static_cast<Eigen::Index>(dimension(spec));
    GaussianSpec g{coordinate_precision(spec), Vector::Zero(d), {{0, Q0}}};
    ConditionedGaussianSampler sampler(g);
    PhaseState s;
    s.q.resize(d);
    s.q(0) = Q0;
    s.q.tail(d - 1) = sampler.sample(rng);
    const Vector m = masses(spec);
    s.p.resize(d);
    s.p(0) = 0.0;
    s.p.tail(d - 1) = sample_momenta(m.tail(d - 1), rng);
    return s;
}

EnsembleRun ensemble_mean(const ModelSpec& model, const PhaseState& head, std::size_t M,
                          const SamplerConfig& sampler, const SchemeSpec& scheme, double T,
                          std::uint64_t output_every,
                          const std::vector<std::string>& observables, unsigned threads) {
    validate(model);
    validate(sampler);
    require(!is_reduced(model), ErrorCode::UnsupportedVariant,
            "ensemble_mean needs a full model");
    require(M >= 1, ErrorCode::BadRange, "ensemble size must be >= 1");
    require(head.q.size() == head.p.size(), ErrorCode::DimensionMismatch,
            "head q and p lengths differ");
    const auto d = static_cast<Eigen::Index>(dimension(model));
    const auto h = head.q.size();
    require(h >= 1 && h <= d, ErrorCode::BadRange, "head size outside [1, dimension]");
    const Vector m = masses(model);

    // Tail drawer shared by all members; read-only after construction.
    std::function<PhaseState(Rng&)> draw_tail;
    if (h == d) {
        draw_tail = [](Rng&) { return PhaseState{Vector(0), Vector(0)}; };
    } else if (const auto* chain = std::get_if<QuarticChain>(&model)) {
        auto start = std::make_shared<Vector>(quartic_tail_gaussian_mean(*chain, head.q));
        draw_tail = [chain, start, &head, &sampler](Rng& rng) {
            return sample_conditioned_quartic(*chain, head, sampler, rng, *start);
        };
    } else {
        GaussianSpec g{coordinate_precision(model), Vector::Zero(d), {}};
        for (Eigen::Index i = 0; i < h; ++i)
            g.condition.push_back({static_cast<std::size_t>(i), head.q(i)});
        auto gauss = std::make_shared<ConditionedGaussianSampler>(g);
        const Vector tail_m = m.tail(d - h);
        draw_tail = [gauss, tail_m](Rng& rng) {
            PhaseState t;
            t.q = gauss->sample(rng);
            t.p = sample_momenta(tail_m, rng);
            return t;
        };
    }

    std::vector<TrajectoryRecord> records(M);
    std::vector<double> sample_s(M, 0.0), integrate_s(M, 0.0);
    std::vector<std::exception_ptr> errors(M);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < M; i = next++) {
            try {
                Rng rng(member_seed(sampler.seed, i));
                const auto t0 = Clock::now();
                const PhaseState state = concat(head, draw_tail(rng));
                sample_s[i] = seconds_since(t0);
                const auto t1 = Clock::now();
                records[i] = integrate(model, scheme, state, T, output_every, observables);
                integrate_s[i] = seconds_since(t1);
                require(!records[i].blew_up, ErrorCode::NonFiniteState, "trajectory blew up");
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const auto start = Clock::now();
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, unsigned(M)));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    for (std::size_t i = 0; i < M; ++i) {
        if (!errors[i]) continue;
        try {
            std::rethrow_exception(errors[i]);
        } catch (const Error& e) {
            throw Error(e.code(), "ensemble member " + std::to_string(i) + ": " + e.what());
        }
    }

    EnsembleRun run;
    run.elapsed_s = seconds_since(start);
    auto& s = run.summary;
    s.members = M;
    s.times = records[0].times;
    s.names = observables;
    const std::size_t rows = s.times.size();
    for (std::size_t c = 0; c < observables.size(); ++c) {
        std::vector<double> mean(rows, 0.0), se(rows, 0.0);
        for (std::size_t r = 0; r < rows; ++r) {
            double sum = 0.0;
            for (std::size_t i = 0; i < M; ++i) sum += records[i].columns[c][r];
            const double mu = sum / double(M);
            double ss = 0.0;
            for (std::size_t i = 0; i < M; ++i) {
                const double dev = records[i].columns[c][r] - mu;
                ss += dev * dev;
            }
            mean[r] = mu;
            se[r] = M > 1 ? std::sqrt(ss / double(M - 1) / double(M)) : 0.0;
        }
        s.mean.push_back(std::move(mean));
        s.stderr_.push_back(std::move(se));
    }
    for (std::size_t i = 0; i < M; ++i) {
        run.sampling_s += sample_s[i];
        run.integration_s += integrate_s[i];
        run.force_pairs += records[i].force_pairs;
    }
    return run;
}

double relative_l2(const std::vector<std::vector<double>>& x,
                   const std::vector<std::vector<double>>& ref) {
    require(x.size() == ref.size(), ErrorCode::DimensionMismatch, "column count differs");
    double num = 0.0, den = 0.0;
    for (std::size_t c = 0; c < x.size(); ++c) {
        if (x[c].size() != ref[c].size()) return std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < x[c].size(); ++i) {
            const double e = x[c][i] - ref[c][i];
            num += e * e;
            den += ref[c][i] * ref[c][i];
        }
    }
    if (!std::isfinite(num)) return std::numeric_limits<double>::infinity();
    return std::sqrt(num / den);
}

std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_metrics(const std::string& path, const Metrics& metrics) {
    std::ofstream out(path, std::ios::binary);
    require(static_cast<bool>(out), ErrorCode::Config, "cannot write " + path);
    for (const auto& [k, v] : metrics) out << k << '=' << v << '\n';
}

Metrics read_metrics(const std::string& path) {
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorCode::Config, "cannot read " + path);
    Metrics m;
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        m.emplace_back(line.substr(0, eq), line.substr(eq + 1));
    }
    return m;
}

std::string csv_text(const Table& table) {
    require(table.header.size() == table.columns.size(), ErrorCode::DimensionMismatch,
            "header and column counts differ");
    std::string text;
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        if (c) text += ',';
        text += table.header[c];
    }
    text += '\n';
    const std::size_t rows = table.columns.empty() ? 0 : table.columns[0].size();
    for (const auto& col : table.columns)
        require(col.size() == rows, ErrorCode::DimensionMismatch, "ragged table");
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            if (c) text += ',';
            text += format_number(table.columns[c][r]);
        }
        text += '\n';
    }
    return text;
}

void write_csv(const std::string& path, const Table& table) {
    std::ofstream out(path, std::ios::binary);
    require(static_cast<bool>(out), ErrorCode::Config, "cannot write " + path);
    out << csv_text(table);
}

Table read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorCode::Config, "cannot read " + path);
    Table t;
    std::string line;
    require(static_cast<bool>(std::getline(in, line)), ErrorCode::Config, "empty CSV " + path);
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) t.header.push_back(cell);
    }
    t.columns.assign(t.header.size(), {});
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::size_t c = 0;
        while (std::getline(ss, cell, ',')) {
            require(c < t.columns.size(), ErrorCode::DimensionMismatch, "too many cells");
            t.columns[c++].push_back(std::strtod(cell.c_str(), nullptr));
        }
        require(c == t.columns.size(), ErrorCode::DimensionMismatch, "too few cells");
    }
    return t;
}

std::string metrics_path(const std::string& out) {
    std::filesystem::path p(out);
    p.replace_extension(".metrics");
    return p.string();
}

double predicted_speedup(std::size_t members, std::uint64_t pairs_full,
                         std::uint64_t pairs_reduced, double dt_full, double dt_reduced) {
    return double(members) * double(pairs_full) / double(pairs_reduced) * dt_reduced / dt_full;
}

Metrics speedup_report(const SpeedupInputs& in) {
    return {
        {"wall_clock_full_s", format_number(in.wall_full_s)},
        {"wall_clock_reduced_s", format_number(in.wall_reduced_s)},
        {"force_pairs_full", std::to_string(in.force_pairs_full)},
        {"force_pairs_reduced", std::to_string(in.force_pairs_reduced)},
        {"predicted_ratio", format_number(in.predicted_ratio)},
        {"measured_ratio", format_number(in.wall_full_s / in.wall_reduced_s)},
    };
}

double PipelineResult::metric(const std::string& key) const {
    for (const auto& [k, v] : metrics)
        if (k == key) return std::strtod(v.c_str(), nullptr);
    fail(ErrorCode::BadRange, "no metric '" + key + "'");
}

PipelineResult run_fig1(const ExperimentConfig& config) {
    validate(config);
    const StuartWarren full{config.N, config.k, 1.0};
    const ModelSpec full_spec(full);
    Rng rng(config.seed);
    const PhaseState state0 = stuart_warren_initial_state(full, config.Q0, rng);

    const SchemeSpec full_scheme{VelocityVerlet{}, config.full_step()};
    const SchemeSpec reduced_scheme{VelocityVerlet{}, config.reduced_step()};
    const auto every_full = steps_per_output(config.output_dt, full_scheme.dt);
    const auto every_reduced = steps_per_output(config.output_dt, reduced_scheme.dt);
    const std::vector<std::string> obs = {"Q", "P"};

    const auto t0 = Clock::now();
    const auto exact = integrate(full_spec, full_scheme, state0, config.T, every_full, obs);
    const double wall_full = seconds_since(t0);

    const ModelSpec reduced = reduce(full_spec, config.n);
    const PhaseState head = head_of(state0, static_cast<Eigen::Index>(config.n + 1));
    double wall_reduced = 0.0;
    const auto op = timed_average(
        [&] { return integrate(reduced, reduced_scheme, head, config.T, every_reduced, obs); },
        0.05, wall_reduced);

    PipelineResult res;
    res.blew_up = exact.blew_up || op.blew_up;
    const std::size_t rows = exact.times.size();
    if (!res.blew_up) check_grids(exact.times, op.times);
    res.table.header = {"t", "Q_exact", "P_exact", "Q_op", "P_op"};
    res.table.columns = {exact.times, exact.column("Q"), exact.column("P"),
                         padded(op.column("Q"), rows), padded(op.column("P"), rows)};

    const auto& c = res.table.columns;
    const double err = relative_l2({c[3], c[4]}, {c[1], c[2]});
    SpeedupInputs sp;
    sp.wall_full_s = wall_full;
    sp.wall_reduced_s = wall_reduced;
    sp.force_pairs_full = exact.force_pairs;
    sp.force_pairs_reduced = op.force_pairs;
    sp.predicted_ratio = predicted_speedup(1, force_pairs(full_spec), force_pairs(reduced),
                                           full_scheme.dt, reduced_scheme.dt);
    res.metrics = speedup_report(sp);
    append(res.metrics, {
                            {"err_op_rel_l2", format_number(err)},
                            {"err_naive_rel_l2", "nan"},
                            {"err_Q_rel_l2", format_number(relative_l2({c[3]}, {c[1]}))},
                            {"err_P_rel_l2", format_number(relative_l2({c[4]}, {c[2]}))},
                            {"stiffness_full", format_number(exact.stiffness_ratio)},
                            {"stiffness_reduced", format_number(op.stiffness_ratio)},
                            {"N", std::to_string(config.N)},
                            {"n", std::to_string(config.n)},
                            {"seed", std::to_string(config.seed)},
                        });
    return res;
}

PipelineResult run_fig2(const ExperimentConfig& config) {
    validate(config);
    const QuarticChain full = quartic_chain(config.N, config.k2, config.k4, config.mass_exponent);
    const ModelSpec full_spec(full);
    const SamplerConfig sampler = default_sampler(full, config.seed);

    const auto t_head = Clock::now();
    Rng rng(config.seed);
    const PhaseState canonical = sample_canonical_quartic(full, sampler, rng);
    const PhaseState head = head_of(canonical, static_cast<Eigen::Index>(config.n));
    const double wall_head = seconds_since(t_head);

    const SchemeSpec full_scheme{VelocityVerlet{}, config.full_step()};
    const SchemeSpec reduced_scheme{VelocityVerlet{}, config.reduced_step()};
    const auto every_full = steps_per_output(config.output_dt, full_scheme.dt);
    const auto every_reduced = steps_per_output(config.output_dt, reduced_scheme.dt);
    const std::vector<std::string> obs = {"p1"};

    const EnsembleRun ens = ensemble_mean(full_spec, head, config.ensemble, sampler, full_scheme,
                                          config.T, every_full, obs, config.thread_count());

    const ModelSpec reduced = reduce(full_spec, config.n, config.coefficients);
    double wall_reduced = 0.0;
    const auto op = timed_average(
        [&] { return integrate(reduced, reduced_scheme, head, config.T, every_reduced, obs); },
        0.05, wall_reduced);
    const ModelSpec naive = naive_truncation(full, config.n);
    const auto nv = integrate(naive, reduced_scheme, head, config.T, every_reduced, obs);

    PipelineResult res;
    res.blew_up = op.blew_up || nv.blew_up;
    const auto& times = ens.summary.times;
    const std::size_t rows = times.size();
    if (!op.blew_up) check_grids(times, op.times);
    const auto& mean = ens.summary.mean_of("p1");
    const auto& se = ens.summary.stderr_of("p1");
    res.table.header = {"t", "p1_mean", "p1_stderr", "p1_op", "p1_naive"};
    res.table.columns = {times, mean, se, padded(op.column("p1"), rows),
                         padded(nv.column("p1"), rows)};
    const auto& p1_op = res.table.columns[3];
    const auto& p1_naive = res.table.columns[4];

    std::size_t inside = 0;
    for (std::size_t i = 0; i < rows; ++i)
        if (std::abs(p1_op[i] - mean[i]) <= 2.0 * se[i]) ++inside;

    const auto& coeffs = std::get<ReducedQuartic>(reduced).coefficients;
    SpeedupInputs sp;
    sp.wall_full_s = ens.integration_s;
    sp.wall_reduced_s = wall_reduced;
    sp.force_pairs_full = ens.force_pairs;
    sp.force_pairs_reduced = op.force_pairs;
    sp.predicted_ratio = predicted_speedup(config.ensemble, force_pairs(full_spec),
                                           force_pairs(reduced), full_scheme.dt,
                                           reduced_scheme.dt);
    res.metrics = speedup_report(sp);
    append(res.metrics,
           {
               {"err_op_rel_l2", format_number(relative_l2({p1_op}, {mean}))},
               {"err_naive_rel_l2", format_number(relative_l2({p1_naive}, {mean}))},
               {"op_within_2se_fraction", format_number(double(inside) / double(rows))},
               {"predicted_ratio_per_member",
                format_number(sp.predicted_ratio / double(config.ensemble))},
               {"wall_clock_sampling_s", format_number(ens.sampling_s + wall_head)},
               {"wall_clock_full_elapsed_s", format_number(ens.elapsed_s)},
               {"C2", format_number(coeffs.C2)},
               {"C4", format_number(coeffs.C4)},
               {"D4", format_number(coeffs.D4)},
               {"coefficients", coeffs.source == CoefficientSource::closed_form ? "closed-form"
                                                                                : "cumulant"},
               {"N", std::to_string(config.N)},
               {"n", std::to_string(config.n)},
               {"ensemble", std::to_string(config.ensemble)},
               {"seed", std::to_string(config.seed)},
           });
    return res;
}

PipelineResult run_sigma_demo(const ExperimentConfig& config) {
    validate(config);
    const StuartWarren model{config.N, config.k, 1.0};
    const ModelSpec spec(model);
    Rng rng(config.seed);
    const PhaseState state0 = stuart_warren_initial_state(model, config.Q0, rng);
    const std::vector<std::string> obs = {"Q", "P"};

    const SchemeSpec ref_scheme{VelocityVerlet{}, config.full_step()};
    const SchemeSpec s0_scheme{SigmaScheme{0}, config.reduced_step()};
    const SchemeSpec s1_scheme{SigmaScheme{1}, config.reduced_step()};
    const auto ref = integrate(spec, ref_scheme, state0, config.T,
                               steps_per_output(config.output_dt, ref_scheme.dt), obs);
    const auto every = steps_per_output(config.output_dt, s0_scheme.dt);
    const auto s0 = integrate(spec, s0_scheme, state0, config.T, every, obs);
    const auto s1 = integrate(spec, s1_scheme, state0, config.T, every, obs);

    PipelineResult res;
    res.blew_up = ref.blew_up || s0.blew_up;
    const std::size_t rows = ref.times.size();
    res.table.header = {"t", "Q_ref", "Q_sigma0", "Q_sigma1", "P_ref", "P_sigma0", "P_sigma1"};
    res.table.columns = {ref.times,
                         ref.column("Q"),
                         padded(s0.column("Q"), rows),
                         padded(s1.column("Q"), rows),
                         ref.column("P"),
                         padded(s0.column("P"), rows),
                         padded(s1.column("P"), rows)};
    const auto& c = res.table.columns;
    res.metrics = {
        {"max_err_Q_sigma0", format_number(max_abs_diff(c[2], c[1]))},
        {"max_err_Q_sigma1", format_number(max_abs_diff(c[3], c[1]))},
        {"max_err_P_sigma0", format_number(max_abs_diff(c[5], c[4]))},
        {"max_err_P_sigma1", format_number(max_abs_diff(c[6], c[4]))},
        {"blew_up_sigma1", s1.blew_up ? "1" : "0"},
        {"stiffness_ratio", format_number(s0.stiffness_ratio)},
        {"under_resolved", s0.under_resolved ? "1" : "0"},
        {"dt", format_number(s0_scheme.dt)},
        {"dt_reference", format_number(ref_scheme.dt)},
        {"N", std::to_string(config.N)},
        {"seed", std::to_string(config.seed)},
    };
    return res;
}

PipelineResult run_coeffs(const ExperimentConfig& config) {
    validate(config);
    PipelineResult res;
    const auto closed = reduced_coefficients(config.N, config.n, config.k2, config.k4);
    res.metrics = {
        {"N", std::to_string(config.N)},
        {"n", std::to_string(config.n)},
        {"k2", format_number(config.k2)},
        {"k4", format_number(config.k4)},
        {"C2_closed_form", format_number(closed.C2)},
        {"C4_closed_form", format_number(closed.C4)},
        {"D4_closed_form", format_number(closed.D4)},
    };
    if (config.n >= 2)
        res.metrics.emplace_back(
            "C2_quadratic_oracle",
            format_number(effective_quadratic_coupling_oracle(config.N, config.n, config.k2)));
    if (config.n >= 4) {
        const auto cum = cumulant_coefficients(config.N, config.n, config.k2, config.k4);
        append(res.metrics, {
                                {"C2_cumulant", format_number(cum.C2)},
                                {"C4_cumulant", format_number(cum.C4)},
                                {"D4_cumulant", format_number(cum.D4)},
                            });
    }
    return res;
}

PipelineResult run_bench(const ExperimentConfig& config) {
    auto fig1 = default_config(Experiment::fig1);
    auto fig2 = default_config(Experiment::fig2);
    for (auto* c : {&fig1, &fig2}) {
        c->seed = config.seed;
        c->threads = config.threads;
    }
    fig2.ensemble = config.ensemble;
    const auto r1 = run_fig1(fig1);
    const auto r2 = run_fig2(fig2);
    PipelineResult res;
    res.blew_up = r1.blew_up || r2.blew_up;
    append(res.metrics, r1.metrics, "fig1_");
    append(res.metrics, r2.metrics, "fig2_");
    return res;
}

PipelineResult run_experiment(const ExperimentConfig& config) {
    PipelineResult res;
    switch (config.experiment) {
        case Experiment::fig1: res = run_fig1(config); break;
        case Experiment::fig2: res = run_fig2(config); break;
        case Experiment::sigma_demo: res = run_sigma_demo(config); break;
        case Experiment::coeffs: res = run_coeffs(config); break;
        case Experiment::bench: res = run_bench(config); break;
    }
    if (!config.out.empty()) {
        if (res.table.header.empty()) {
            write_metrics(config.out, res.metrics);
        } else {
            write_csv(config.out, res.table);
            write_metrics(metrics_path(config.out), res.metrics);
        }
    }
    return res;
}

}  // namespace opmech

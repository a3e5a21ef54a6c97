#include "opmech/config.hpp"

#include "opmech/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <thread>
#include <vector>

namespace opmech {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double parse_double(std::string_view key, std::string_view text) {
    const std::string s = trim(text);
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used == s.size() && std::isfinite(v)) return v;
    } catch (const std::exception&) {
    }
    fail(ErrorCode::Config, "'" + std::string(key) + "' expects a number, got '" + s + "'");
}

std::uint64_t parse_unsigned(std::string_view key, std::string_view text) {
    const std::string s = trim(text);
    std::uint64_t v = 0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    require(!s.empty() && ec == std::errc() && ptr == end, ErrorCode::Config,
            "'" + std::string(key) + "' expects a non-negative integer, got '" + s + "'");
    return v;
}

}  // namespace

std::optional<Experiment> parse_experiment(std::string_view name) {
    if (name == "fig1") return Experiment::fig1;
    if (name == "fig2") return Experiment::fig2;
    if (name == "sigma-demo" || name == "sigma_demo") return Experiment::sigma_demo;
    if (name == "coeffs") return Experiment::coeffs;
    if (name == "bench") return Experiment::bench;
    return std::nullopt;
}

std::string_view to_string(Experiment e) {
    switch (e) {
        case Experiment::fig1: return "fig1";
        case Experiment::fig2: return "fig2";
        case Experiment::sigma_demo: return "sigma-demo";
        case Experiment::coeffs: return "coeffs";
        case Experiment::bench: return "bench";
    }
    return "?";
}

unsigned ExperimentConfig::thread_count() const {
    if (threads > 0) return threads;
    return std::max(1u, std::thread::hardware_concurrency());
}

ExperimentConfig default_config(Experiment e) {
    ExperimentConfig c;
    c.experiment = e;
    switch (e) {
        case Experiment::fig1:
            c.N = 1000;
            c.n = 50;
            c.T = 5.0;
            break;
        case Experiment::fig2:
        case Experiment::bench:
            c.N = 200;
            c.n = 10;
            c.k2 = 1.0;
            c.k4 = 0.1;
            c.T = 2.0;
            c.ensemble = 100;
            break;
        case Experiment::sigma_demo:
            c.N = 100;
            c.n = 100;
            c.T = 5.0;
            c.dt_full = 1e-5;     // resolved reference
            c.dt_reduced = 1e-2;  // step under test, N·dt = 1
            break;
        case Experiment::coeffs:
            c.N = 1000;
            c.n = 10;
            c.k2 = 1.0;
            c.k4 = 0.1;
            break;
    }
    return c;
}

const std::vector<std::string>& setting_keys() {
    static const std::vector<std::string> keys = {
        "N",  "n",         "k",          "k2",        "k4",      "T",    "ensemble", "seed",
        "threads", "out",  "dt-full",    "dt-reduced", "output-dt", "Q0", "coefficients", "mass-exponent"};
    return keys;
}

void apply_setting(ExperimentConfig& c, std::string_view key, std::string_view value) {
    if (key == "N") c.N = parse_unsigned(key, value);
    else if (key == "n") c.n = parse_unsigned(key, value);
    else if (key == "k") c.k = parse_double(key, value);
    else if (key == "k2") c.k2 = parse_double(key, value);
    else if (key == "k4") c.k4 = parse_double(key, value);
    else if (key == "T") c.T = parse_double(key, value);
    else if (key == "ensemble") c.ensemble = parse_unsigned(key, value);
    else if (key == "seed") c.seed = parse_unsigned(key, value);
    else if (key == "threads") c.threads = static_cast<unsigned>(parse_unsigned(key, value));
    else if (key == "out") c.out = trim(value);
    else if (key == "dt-full") c.dt_full = parse_double(key, value);
    else if (key == "dt-reduced") c.dt_reduced = parse_double(key, value);
    else if (key == "output-dt") c.output_dt = parse_double(key, value);
    else if (key == "Q0") c.Q0 = parse_double(key, value);
    else if (key == "mass-exponent") c.mass_exponent = parse_double(key, value);
    else if (key == "coefficients") {
        const auto v = trim(value);
        if (v == "closed-form") c.coefficients = CoefficientSource::closed_form;
        else if (v == "cumulant") c.coefficients = CoefficientSource::numeric_oracle;
        else fail(ErrorCode::Config, "coefficients must be 'closed-form' or 'cumulant'");
    } else {
        fail(ErrorCode::Config, "unknown key '" + std::string(key) + "'");
    }
}

void load_config_file(ExperimentConfig& config, const std::string& path) {
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorCode::Config, "cannot read config file " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        require(eq != std::string::npos, ErrorCode::Config,
                path + ":" + std::to_string(lineno) + ": expected key=value");
        apply_setting(config, trim(std::string_view(t).substr(0, eq)),
                      std::string_view(t).substr(eq + 1));
    }
}

void validate(const ExperimentConfig& c) {
    require(c.N >= 1, ErrorCode::Config, "N must be >= 1");
    require(c.n >= 1 && c.n <= c.N, ErrorCode::Config, "need 1 <= n <= N");
    require(c.ensemble >= 1, ErrorCode::Config, "ensemble must be >= 1");
    require(c.T > 0, ErrorCode::Config, "T must be > 0");
    require(c.k > 0 && c.k2 > 0 && c.k4 >= 0, ErrorCode::Config,
            "need k > 0, k2 > 0, k4 >= 0");
    require(c.full_step() > 0 && c.reduced_step() > 0, ErrorCode::Config, "steps must be > 0");
    require(c.full_step() <= c.reduced_step() * (1 + 1e-12), ErrorCode::Config,
            "dt-full must not exceed dt-reduced");
    require(c.output_dt > 0, ErrorCode::Config, "output-dt must be > 0");
}

}  // namespace opmech

#include "opmech/sampling.hpp"

#include "opmech/error.hpp"
#include "opmech/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace opmech {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t member_seed(std::uint64_t seed, std::uint64_t member) {
    return seed ^ splitmix64(member);
}

void validate(const SamplerConfig& config) {
    require(config.mcmc.proposal_scale > 0 && std::isfinite(config.mcmc.proposal_scale),
            ErrorCode::BadRange, "proposal_scale must be > 0");
    require(config.mcmc.thin >= 1, ErrorCode::BadRange, "thin must be >= 1");
}

SamplerConfig default_sampler(const QuarticChain& model, std::uint64_t seed) {
    SamplerConfig c;
    c.seed = seed;
    c.mcmc.proposal_scale = 0.5 / std::sqrt(double(model.N) * model.k2);
    c.mcmc.burn_in = 1000 * std::uint64_t(model.N);
    c.mcmc.thin = 10 * std::uint64_t(model.N);
    return c;
}

Vector standard_normal(Eigen::Index size, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector z(size);
    for (auto& x : z) x = normal(rng);
    return z;
}

Vector sample_momenta(const Vector& masses, Rng& rng) {
    return (masses.array().sqrt() * standard_normal(masses.size(), rng).array()).matrix();
}

namespace {

std::vector<std::size_t> condition_indices(const GaussianSpec& spec) {
    std::vector<std::size_t> idx;
    for (const auto& c : spec.condition) idx.push_back(c.index);
    std::sort(idx.begin(), idx.end());
    return idx;
}

std::vector<std::size_t> iota_indices(std::size_t n) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    return idx;
}

}  // namespace

ConditionedGaussianSampler::ConditionedGaussianSampler(const GaussianSpec& spec)
    : conditioner_(spec.precision, condition_indices(spec)) {
    require(spec.linear.size() == spec.precision.rows(), ErrorCode::DimensionMismatch,
            "linear term length");
    const auto& cond = conditioner_.conditioned();
    Vector values(static_cast<Eigen::Index>(cond.size()));
    for (std::size_t i = 0; i < cond.size(); ++i)
        for (const auto& c : spec.condition)
            if (c.index == cond[i]) values(static_cast<Eigen::Index>(i)) = c.value;
    mean_ = conditioner_.mean(spec.linear, values);
}

Vector ConditionedGaussianSampler::sample(Rng& rng) const {
    const auto n = static_cast<Eigen::Index>(conditioner_.free().size());
    return mean_ + conditioner_.correlate(standard_normal(n, rng));
}

Vector sample_conditioned_gaussian(const GaussianSpec& spec, Rng& rng) {
    return ConditionedGaussianSampler(spec).sample(rng);
}

Vector quartic_tail_gaussian_mean(const QuarticChain& model, const Vector& head_q) {
    const auto n = static_cast<std::size_t>(head_q.size());
    require(n >= 1 && n <= model.N, ErrorCode::BadRange, "head size outside [1, N]");
    if (n == model.N) return Vector(0);
    GaussianConditioner conditioner(chain_precision(model.N, model.k2), iota_indices(n));
    return conditioner.mean(Vector::Zero(static_cast<Eigen::Index>(model.N)), head_q);
}

QuarticTailChain::QuarticTailChain(const QuarticChain& model, const Vector& head_q,
                                   const McmcConfig& config, std::optional<Vector> initial_tail)
    : k2_(model.k2), k4_(model.k4), config_(config),
      n_(static_cast<std::size_t>(head_q.size())) {
    validate(ModelSpec(model));
    validate(SamplerConfig{0, config});
    require(n_ >= 1 && n_ < model.N, ErrorCode::BadRange,
            "head size must lie in [1, N-1] for a tail to exist");
    const auto N = static_cast<Eigen::Index>(model.N);
    const auto h = static_cast<Eigen::Index>(n_);
    q_.resize(N);
    q_.head(h) = head_q;
    if (initial_tail) {
        require(initial_tail->size() == N - h, ErrorCode::DimensionMismatch,
                "initial tail length");
        q_.tail(N - h) = *initial_tail;
    } else {
        q_.tail(N - h) = quartic_tail_gaussian_mean(model, head_q);
    }
    cursor_ = h;
}

double QuarticTailChain::site_delta(Eigen::Index j, double y) const {
    const double x = q_(j);
    double d2 = 0.0, d4 = 0.0;
    const auto N = q_.size();
    for (Eigen::Index l = 0; l < N; ++l) {
        if (l == j) continue;
        const double a = y - q_(l), b = x - q_(l);
        const double a2 = a * a, b2 = b * b;
        d2 += a2 - b2;
        d4 += a2 * a2 - b2 * b2;
    }
    return 0.5 * k2_ * d2 + 0.25 * k4_ * d4;
}

void QuarticTailChain::advance(std::uint64_t proposals, Rng& rng) {
    std::normal_distribution<double> step(0.0, config_.proposal_scale);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto N = q_.size();
    const auto h = static_cast<Eigen::Index>(n_);
    for (std::uint64_t i = 0; i < proposals; ++i) {
        const Eigen::Index j = cursor_;
        cursor_ = (cursor_ + 1 < N) ? cursor_ + 1 : h;
        const double y = q_(j) + step(rng);
        const double delta = site_delta(j, y);
        const double u = unit(rng);
        if (delta <= 0.0 || u < std::exp(-delta)) {
            q_(j) = y;
            ++accepted_;
        }
        ++proposed_;
    }
}

void QuarticTailChain::burn_in(Rng& rng) {
    const std::uint64_t first = config_.burn_in / 2;
    advance(first, rng);
    proposed_ = 0;
    accepted_ = 0;
    advance(config_.burn_in - first, rng);
}

Vector QuarticTailChain::next(Rng& rng) {
    advance(config_.thin, rng);
    return tail();
}

Vector QuarticTailChain::tail() const {
    const auto h = static_cast<Eigen::Index>(n_);
    return q_.tail(q_.size() - h);
}

double QuarticTailChain::acceptance() const {
    return proposed_ == 0 ? 0.0 : double(accepted_) / double(proposed_);
}

PhaseState sample_conditioned_quartic(const QuarticChain& model, const PhaseState& head,
                                      const SamplerConfig& config, Rng& rng,
                                      std::optional<Vector> initial_tail) {
    require(head.q.size() == head.p.size(), ErrorCode::DimensionMismatch,
            "head q and p lengths differ");
    QuarticTailChain chain(model, head.q, config.mcmc, std::move(initial_tail));
    chain.burn_in(rng);
    PhaseState tail;
    tail.q = chain.next(rng);
    const double rate = chain.acceptance();
    require(rate >= 0.1 && rate <= 0.9, ErrorCode::AcceptanceOutOfRange,
            "Metropolis acceptance " + std::to_string(rate) + " outside [0.1, 0.9]");
    const auto h = head.q.size();
    tail.p = sample_momenta(model.masses.tail(model.masses.size() - h), rng);
    return tail;
}

PhaseState sample_canonical_quartic(const QuarticChain& model, const SamplerConfig& config,
                                    Rng& rng) {
    validate(ModelSpec(model));
    const auto N = static_cast<Eigen::Index>(model.N);
    PhaseState s;
    s.q = Vector::Zero(N);
    if (N > 1) {
        PhaseState pin{Vector::Zero(1), Vector::Zero(1)};
        s.q.tail(N - 1) = sample_conditioned_quartic(model, pin, config, rng).q;
    }
    s.p = sample_momenta(model.masses, rng);
    return s;
}

}  // namespace opmech

#pragma once

// Canonical-ensemble sampling at unit temperature (density e^{-H}).
//
// Random numbers come from std::mt19937_64 with std::normal_distribution.
// Draws are bitwise reproducible for a fixed seed on a fixed build; across
// standard libraries only the statistics are reproducible.

#include "opmech/gaussian_stats.hpp"
#include "opmech/models.hpp"

#include <cstdint>
#include <optional>
#include <random>

namespace opmech {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

/// Seed of ensemble member i: seed ^ splitmix64(i). Independent of execution order.
std::uint64_t member_seed(std::uint64_t seed, std::uint64_t member);

struct McmcConfig {
    double proposal_scale = 0.1;
    std::uint64_t burn_in = 0;  // proposals
    std::uint64_t thin = 1;     // proposals between returned samples
};

struct SamplerConfig {
    std::uint64_t seed = 0;
    McmcConfig mcmc;
};

void validate(const SamplerConfig& config);

/// proposal_scale = 0.5/sqrt(N·k2), burn_in = 1000·N, thin = 10·N.
SamplerConfig default_sampler(const QuarticChain& model, std::uint64_t seed);

Vector standard_normal(Eigen::Index size, Rng& rng);

/// p_j ~ Normal(0, m_j).
Vector sample_momenta(const Vector& masses, Rng& rng);

/// Exact draws from a conditioned Gaussian; the free-block factorization and
/// the conditional mean are computed once.
class ConditionedGaussianSampler {
public:
    explicit ConditionedGaussianSampler(const GaussianSpec& spec);

    const Vector& mean() const { return mean_; }
    const std::vector<std::size_t>& free() const { return conditioner_.free(); }
    Vector sample(Rng& rng) const;

private:
    GaussianConditioner conditioner_;
    Vector mean_;
};

/// Values over the free indices, in ascending index order.
Vector sample_conditioned_gaussian(const GaussianSpec& spec, Rng& rng);

/// Random-walk Metropolis on the tail coordinates q_{n+1..N} of a quartic chain
/// with the head q_1..q_n fixed, targeting exp(-U). Proposals visit the tail
/// sites in sequential sweeps, one Gaussian move per proposal.
class QuarticTailChain {
public:
    /// Starts at `initial_tail`, or at the conditioned-Gaussian mean when absent.
    QuarticTailChain(const QuarticChain& model, const Vector& head_q, const McmcConfig& config,
                     std::optional<Vector> initial_tail = std::nullopt);

    void advance(std::uint64_t proposals, Rng& rng);
    /// Runs the burn-in. Acceptance statistics restart halfway through, so they
    /// cover the equilibrated second half plus everything after it.
    void burn_in(Rng& rng);
    /// Advances by `thin` proposals and returns the tail coordinates.
    Vector next(Rng& rng);

    Vector tail() const;
    const Vector& coordinates() const { return q_; }
    double acceptance() const;
    std::uint64_t proposals() const { return proposed_; }

private:
    double site_delta(Eigen::Index j, double y) const;

    double k2_;
    double k4_;
    McmcConfig config_;
    std::size_t n_;
    Vector q_;
    Eigen::Index cursor_ = 0;
    std::uint64_t proposed_ = 0;
    std::uint64_t accepted_ = 0;
};

/// Conditioned-Gaussian mean of the tail coordinates given the head.
Vector quartic_tail_gaussian_mean(const QuarticChain& model, const Vector& head_q);

/// One conditioned canonical tail (q, p over particles n+1..N) for the given head.
/// Throws AcceptanceOutOfRange if the post-burn-in acceptance leaves [0.1, 0.9].
PhaseState sample_conditioned_quartic(const QuarticChain& model, const PhaseState& head,
                                      const SamplerConfig& config, Rng& rng,
                                      std::optional<Vector> initial_tail = std::nullopt);

/// Canonical draw of the whole chain. The translation mode is flat, so particle
/// 1 is pinned at 0 and the remaining coordinates are sampled conditionally.
PhaseState sample_canonical_quartic(const QuarticChain& model, const SamplerConfig& config,
                                    Rng& rng);

}  // namespace opmech

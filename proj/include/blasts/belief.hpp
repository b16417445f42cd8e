#pragma once

// Exact conjugate posteriors over arm means (Beta for Bernoulli rewards,
// Normal with known noise variance for Gaussian rewards), plus batch
// posterior sampling for the ensembles consumed by the policies.

#include <cstddef>
#include <random>
#include <vector>

#include "blasts/bandit.hpp"
#include "blasts/matrix.hpp"

namespace blasts::belief {

using EnsembleSamples = Matrix;  // Z x K, row z = one sampled mean vector

struct BetaPrior {
    double alpha = 1.0;  // pseudo-successes
    double beta = 1.0;   // pseudo-failures
};

struct NormalPrior {
    double mean = 0.5;
    double variance = 1.0;
    double noise_variance = 1.0;  // known reward noise s^2
};

struct Prior {
    BetaPrior bernoulli{};
    NormalPrior gaussian{};
};

struct BeliefState {
    bandit::BanditKind kind;
    Prior prior;  // kept so pull counts stay recoverable
    // Bernoulli arms
    std::vector<double> alpha, beta;
    // Gaussian arms
    std::vector<double> mu, var;
    double noise_variance = 1.0;

    std::size_t num_arms() const {
        return kind.family == bandit::BanditKind::Family::Bernoulli ? alpha.size() : mu.size();
    }
    // Bernoulli only: observations folded into arm a so far
    double pull_count(std::size_t a) const {
        return alpha[a] + beta[a] - prior.bernoulli.alpha - prior.bernoulli.beta;
    }
};

BeliefState new_belief(const bandit::BanditKind& kind, std::size_t num_arms, const Prior& prior = {});

// Conjugate update of the pulled arm only. Bernoulli rewards must be exactly
// 0 or 1.
void update_belief(BeliefState& belief, std::size_t action, double reward);

// Z independent posterior draws; each row samples every arm independently.
EnsembleSamples sample_means(const BeliefState& belief, std::size_t count, std::mt19937_64& rng);

}  // namespace blasts::belief

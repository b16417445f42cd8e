#pragma once

// Ground-truth bandit environments: independent Bernoulli or Gaussian arms
// with means drawn Uniform(0,1), seeded sampling, exact regret accounting.

#include <cstddef>
#include <random>
#include <vector>

namespace blasts::bandit {

struct BanditKind {
    enum class Family { Bernoulli, Gaussian };
    Family family = Family::Bernoulli;
    double reward_noise_sd = 1.0;  // Gaussian only

    static BanditKind bernoulli() { return {Family::Bernoulli, 1.0}; }
    static BanditKind gaussian(double sd = 1.0);
};

using EnvironmentSample = std::vector<double>;  // mean reward per arm

struct ArmStats {
    std::size_t optimal_arm = 0;
    double optimal_mean = 0.0;
    std::vector<double> gaps;  // optimal_mean - means[a], ties broken low
};

EnvironmentSample sample_environment(const BanditKind& kind, std::size_t num_arms,
                                     std::mt19937_64& rng);

double pull(const BanditKind& kind, const EnvironmentSample& env, std::size_t action,
            std::mt19937_64& rng);

ArmStats optimal_stats(const EnvironmentSample& env);

}  // namespace blasts::bandit

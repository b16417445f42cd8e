#include "blasts/bandit.hpp"

#include <cmath>
#include <stdexcept>

namespace blasts::bandit {

BanditKind BanditKind::gaussian(double sd) {
    if (!(sd > 0.0) || !std::isfinite(sd)) throw std::invalid_argument("gaussian bandit: reward_noise_sd must be > 0");
    return {Family::Gaussian, sd};
}

EnvironmentSample sample_environment(const BanditKind&, std::size_t num_arms, std::mt19937_64& rng) {
    if (num_arms < 2) throw std::invalid_argument("sample_environment: need at least 2 arms");
    std::uniform_real_distribution<double> u(0.0, 1.0);
    EnvironmentSample means(num_arms);
    for (auto& m : means) m = u(rng);
    return means;
}

double pull(const BanditKind& kind, const EnvironmentSample& env, std::size_t action,
            std::mt19937_64& rng) {
    if (action >= env.size()) throw std::invalid_argument("pull: action out of range");
    if (kind.family == BanditKind::Family::Bernoulli) {
        std::bernoulli_distribution b(env[action]);
        return b(rng) ? 1.0 : 0.0;
    }
    std::normal_distribution<double> n(env[action], kind.reward_noise_sd);
    return n(rng);
}

ArmStats optimal_stats(const EnvironmentSample& env) {
    ArmStats stats;
    stats.gaps.resize(env.size());
    for (std::size_t a = 1; a < env.size(); ++a)
        if (env[a] > env[stats.optimal_arm]) stats.optimal_arm = a;
    stats.optimal_mean = env.empty() ? 0.0 : env[stats.optimal_arm];
    for (std::size_t a = 0; a < env.size(); ++a) stats.gaps[a] = stats.optimal_mean - env[a];
    return stats;
}

}  // namespace blasts::bandit

#include "blasts/belief.hpp"

#include <cmath>
#include <stdexcept>

namespace blasts::belief {

using Family = bandit::BanditKind::Family;

BeliefState new_belief(const bandit::BanditKind& kind, std::size_t num_arms, const Prior& prior) {
    if (num_arms == 0) throw std::invalid_argument("new_belief: need at least 1 arm");
    BeliefState b;
    b.kind = kind;
    b.prior = prior;
    if (kind.family == Family::Bernoulli) {
        if (!(prior.bernoulli.alpha > 0.0) || !(prior.bernoulli.beta > 0.0))
            throw std::invalid_argument("new_belief: Beta prior pseudo-counts must be > 0");
        b.alpha.assign(num_arms, prior.bernoulli.alpha);
        b.beta.assign(num_arms, prior.bernoulli.beta);
    } else {
        if (!(prior.gaussian.variance > 0.0)) throw std::invalid_argument("new_belief: prior variance must be > 0");
        if (!(prior.gaussian.noise_variance > 0.0))
            throw std::invalid_argument("new_belief: noise variance must be > 0");
        b.mu.assign(num_arms, prior.gaussian.mean);
        b.var.assign(num_arms, prior.gaussian.variance);
        b.noise_variance = prior.gaussian.noise_variance;
    }
    return b;
}

void update_belief(BeliefState& belief, std::size_t action, double reward) {
    if (action >= belief.num_arms()) throw std::invalid_argument("update_belief: action out of range");
    if (!std::isfinite(reward)) throw std::invalid_argument("update_belief: non-finite reward");
    if (belief.kind.family == Family::Bernoulli) {
        if (reward != 0.0 && reward != 1.0)
            throw std::invalid_argument("update_belief: Bernoulli reward must be 0 or 1");
        belief.alpha[action] += reward;
        belief.beta[action] += 1.0 - reward;
    } else {
        const double s2 = belief.noise_variance;
        const double v = 1.0 / (1.0 / belief.var[action] + 1.0 / s2);
        belief.mu[action] = v * (belief.mu[action] / belief.var[action] + reward / s2);
        belief.var[action] = v;
    }
}

EnsembleSamples sample_means(const BeliefState& belief, std::size_t count, std::mt19937_64& rng) {
    if (count == 0) throw std::invalid_argument("sample_means: count must be >= 1");
    const std::size_t K = belief.num_arms();
    EnsembleSamples samples(count, K);
    if (belief.kind.family == Family::Bernoulli) {
        for (std::size_t z = 0; z < count; ++z) {
            for (std::size_t a = 0; a < K; ++a) {
                std::gamma_distribution<double> ga(belief.alpha[a], 1.0);
                std::gamma_distribution<double> gb(belief.beta[a], 1.0);
                const double x = ga(rng), y = gb(rng);
                samples(z, a) = x / (x + y);
            }
        }
    } else {
        for (std::size_t z = 0; z < count; ++z) {
            for (std::size_t a = 0; a < K; ++a) {
                std::normal_distribution<double> n(belief.mu[a], std::sqrt(belief.var[a]));
                samples(z, a) = n(rng);
            }
        }
    }
    return samples;
}

}  // namespace blasts::belief

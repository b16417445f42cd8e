#include "blasts/agents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace blasts::agents {

BetaSchedule BetaSchedule::fixed(double beta) {
    if (!std::isfinite(beta) || beta < 0.0) throw std::invalid_argument("BetaSchedule: beta must be finite and >= 0");
    return {Mode::Fixed, beta, 1e-8};
}

BetaSchedule BetaSchedule::adaptive(double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("BetaSchedule: epsilon must be > 0");
    return {Mode::AdaptiveInfoRatio, 0.0, epsilon};
}

rd::DistortionMatrix build_distortion_matrix(const belief::EnsembleSamples& samples) {
    if (samples.rows < 1 || samples.cols < 2)
        throw std::invalid_argument("build_distortion_matrix: need Z >= 1 samples over K >= 2 arms");
    rd::DistortionMatrix d(samples.rows, samples.cols);
    for (std::size_t z = 0; z < samples.rows; ++z) {
        auto srow = samples.row(z);
        const double best = *std::max_element(srow.begin(), srow.end());
        auto drow = d.row(z);
        for (std::size_t a = 0; a < samples.cols; ++a) {
            const double gap = best - srow[a];
            drow[a] = gap * gap;
        }
    }
    return d;
}

namespace {

std::size_t argmax_low(std::span<const double> row) {
    std::size_t best = 0;
    for (std::size_t a = 1; a < row.size(); ++a)
        if (row[a] > row[best]) best = a;
    return best;
}

std::size_t sample_discrete(std::span<const double> probs, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double x = u(rng);
    double acc = 0.0;
    for (std::size_t a = 0; a < probs.size(); ++a) {
        acc += probs[a];
        if (x < acc) return a;
    }
    return probs.size() - 1;
}

}  // namespace

std::pair<std::size_t, StepDiagnostics> blasts_select(const belief::BeliefState& belief,
                                                      const BetaSchedule& schedule,
                                                      std::size_t posterior_samples,
                                                      std::size_t ba_max_iters, double ba_tol,
                                                      std::mt19937_64& rng) {
    if (posterior_samples == 0) throw std::invalid_argument("blasts_select: need at least 1 posterior sample");
    const auto samples = belief::sample_means(belief, posterior_samples, rng);
    const auto d = build_distortion_matrix(samples);

    StepDiagnostics diag;
    double beta = schedule.beta;
    if (schedule.mode == BetaSchedule::Mode::AdaptiveInfoRatio) {
        const auto est = ensemble_info_ratio(samples, schedule.epsilon);
        diag.psi_bar = est.psi_bar;
        beta = 1.0 / (est.psi_bar + schedule.epsilon);
    }

    const auto sol = rd::solve_rate_distortion(rd::uniform_weights(samples.rows), d, beta,
                                               ba_max_iters, ba_tol);

    std::uniform_int_distribution<std::size_t> zdist(0, samples.rows - 1);
    const std::size_t zhat = zdist(rng);
    const std::size_t action = sample_discrete(sol.channel.row(zhat), rng);

    diag.beta_used = beta;
    diag.rate_bits = sol.rate_bits;
    diag.achieved_distortion = sol.distortion;
    diag.ba_iterations = sol.iterations;
    diag.epsilon_target = std::sqrt(sol.distortion);
    return {action, diag};
}

std::size_t ts_select(const belief::BeliefState& belief, std::mt19937_64& rng) {
    const auto sample = belief::sample_means(belief, 1, rng);
    return argmax_low(sample.row(0));
}

std::size_t uniform_select(std::size_t num_arms, std::mt19937_64& rng) {
    if (num_arms == 0) throw std::invalid_argument("uniform_select: need at least 1 arm");
    std::uniform_int_distribution<std::size_t> u(0, num_arms - 1);
    return u(rng);
}

InfoRatioEstimate info_ratio_min(const std::vector<double>& deltas,
                                 const std::vector<double>& variances, double epsilon) {
    const std::size_t K = deltas.size();
    if (K == 0 || variances.size() != K)
        throw std::invalid_argument("info_ratio_min: deltas and variances must have equal length >= 1");
    if (!(epsilon > 0.0)) throw std::invalid_argument("info_ratio_min: epsilon must be > 0");
    for (std::size_t a = 0; a < K; ++a)
        if (!std::isfinite(deltas[a]) || deltas[a] < 0.0 || !std::isfinite(variances[a]) || variances[a] < 0.0)
            throw std::invalid_argument("info_ratio_min: entries must be finite and >= 0");

    InfoRatioEstimate est;
    est.deltas = deltas;
    est.variances = variances;
    est.minimizer.assign(K, 0.0);

    double best = std::numeric_limits<double>::infinity();
    std::size_t best_a = 0, best_b = 0;
    double best_t = 0.0;

    auto consider = [&](std::size_t a, std::size_t b, double t, double value) {
        if (value < best) {
            best = value;
            best_a = a;
            best_b = b;
            best_t = t;
        }
    };

    for (std::size_t a = 0; a < K; ++a)
        consider(a, a, 0.0, deltas[a] * deltas[a] / (variances[a] + epsilon));

    // Objective restricted to a pair is quadratic-over-linear in the mixing
    // weight, hence convex: ternary search nails the interior optimum.
    for (std::size_t a = 0; a + 1 < K; ++a) {
        for (std::size_t b = a + 1; b < K; ++b) {
            auto f = [&](double t) {
                const double num = (1.0 - t) * deltas[a] + t * deltas[b];
                const double den = (1.0 - t) * variances[a] + t * variances[b] + epsilon;
                return num * num / den;
            };
            double lo = 0.0, hi = 1.0;
            for (int it = 0; it < 100; ++it) {
                const double m1 = lo + (hi - lo) / 3.0;
                const double m2 = hi - (hi - lo) / 3.0;
                if (f(m1) <= f(m2))
                    hi = m2;
                else
                    lo = m1;
            }
            const double t = 0.5 * (lo + hi);
            consider(a, b, t, f(t));
        }
    }

    est.psi_bar = best;
    est.minimizer[best_a] += 1.0 - best_t;
    est.minimizer[best_b] += best_t;
    return est;
}

InfoRatioEstimate ensemble_info_ratio(const belief::EnsembleSamples& samples, double epsilon) {
    if (samples.rows < 2) throw std::invalid_argument("ensemble_info_ratio: need at least 2 ensemble rows");
    const std::size_t Z = samples.rows, K = samples.cols;
    std::vector<double> deltas(K, 0.0), means(K, 0.0), sq(K, 0.0);
    for (std::size_t z = 0; z < Z; ++z) {
        auto row = samples.row(z);
        const double best = *std::max_element(row.begin(), row.end());
        for (std::size_t a = 0; a < K; ++a) {
            deltas[a] += best - row[a];
            means[a] += row[a];
            sq[a] += row[a] * row[a];
        }
    }
    std::vector<double> variances(K);
    for (std::size_t a = 0; a < K; ++a) {
        deltas[a] /= static_cast<double>(Z);
        means[a] /= static_cast<double>(Z);
        // population variance; clamp away rounding negatives
        variances[a] = std::max(0.0, sq[a] / static_cast<double>(Z) - means[a] * means[a]);
    }
    return info_ratio_min(deltas, variances, epsilon);
}

double adaptive_beta(const belief::EnsembleSamples& samples, double epsilon) {
    const auto est = ensemble_info_ratio(samples, epsilon);
    return 1.0 / (est.psi_bar + epsilon);
}

double regret_bound_rhs(double rate_bits, double epsilon_target, double info_ratio_bound,
                        const BoundMode& mode) {
    if (!std::isfinite(rate_bits) || rate_bits < 0.0)
        throw std::invalid_argument("regret_bound_rhs: rate_bits must be finite and >= 0");
    if (!std::isfinite(epsilon_target) || epsilon_target < 0.0)
        throw std::invalid_argument("regret_bound_rhs: epsilon_target must be finite and >= 0");
    if (!(info_ratio_bound > 0.0)) throw std::invalid_argument("regret_bound_rhs: info ratio bound must be > 0");

    const double rate_nats = rate_bits * std::numbers::ln2;
    if (const auto* disc = std::get_if<Discounted>(&mode)) {
        const double g = disc->gamma;
        if (!(g >= 0.0) || g >= 1.0) throw std::invalid_argument("regret_bound_rhs: gamma must lie in [0,1)");
        return 2.0 * std::sqrt(info_ratio_bound * rate_nats / (1.0 - g * g)) +
               2.0 * epsilon_target / (1.0 - g);
    }
    const auto& fin = std::get<FiniteHorizon>(mode);
    if (fin.horizon < 1) throw std::invalid_argument("regret_bound_rhs: horizon must be >= 1");
    const double T = static_cast<double>(fin.horizon);
    return 2.0 * std::sqrt(info_ratio_bound * T * rate_nats) + 2.0 * T * epsilon_target;
}

}  // namespace blasts::agents

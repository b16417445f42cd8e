#pragma once

// Action-selection policies. blasts_select computes a rate-distortion-optimal
// target-action channel from a fresh posterior ensemble each step and samples
// an action by probability matching; ts_select and uniform_select are the two
// limiting baselines. info_ratio_min / adaptive_beta implement the
// variance-based information-ratio rule for choosing beta per step, and
// regret_bound_rhs evaluates the finite-horizon / discounted bound
// right-hand sides for reporting.

#include <cstddef>
#include <optional>
#include <random>
#include <utility>
#include <variant>
#include <vector>

#include "blasts/belief.hpp"
#include "blasts/rd.hpp"

namespace blasts::agents {

struct BetaSchedule {
    enum class Mode { Fixed, AdaptiveInfoRatio };
    Mode mode = Mode::Fixed;
    double beta = 1.0;       // Fixed
    double epsilon = 1e-8;   // AdaptiveInfoRatio guard constant

    static BetaSchedule fixed(double beta);
    static BetaSchedule adaptive(double epsilon = 1e-8);
};

struct StepDiagnostics {
    double beta_used = 0.0;
    double rate_bits = 0.0;
    double achieved_distortion = 0.0;
    std::size_t ba_iterations = 0;
    std::optional<double> psi_bar;  // adaptive mode only
    double epsilon_target = 0.0;    // sqrt(achieved_distortion)

    bool operator==(const StepDiagnostics&) const = default;
};

struct InfoRatioEstimate {
    std::vector<double> deltas;     // expected regret per arm under the ensemble
    std::vector<double> variances;  // ensemble variance of each arm's mean
    double psi_bar = 0.0;
    std::vector<double> minimizer;  // support <= 2
};

// d[z][a] = (row max - samples[z][a])^2; the row argmax costs exactly 0.
rd::DistortionMatrix build_distortion_matrix(const belief::EnsembleSamples& samples);

// One BLASTS step: sample a Z-row ensemble, build the squared-regret
// distortion, resolve beta, solve the rate-distortion problem from a uniform
// channel over uniform source weights, then draw a row uniformly and match
// probabilities within it.
std::pair<std::size_t, StepDiagnostics> blasts_select(const belief::BeliefState& belief,
                                                      const BetaSchedule& schedule,
                                                      std::size_t posterior_samples,
                                                      std::size_t ba_max_iters, double ba_tol,
                                                      std::mt19937_64& rng);

// Draw one posterior sample and act on its argmax (ties to the lowest index).
std::size_t ts_select(const belief::BeliefState& belief, std::mt19937_64& rng);

std::size_t uniform_select(std::size_t num_arms, std::mt19937_64& rng);

// Minimize (pi . deltas)^2 / (pi . variances + epsilon) over the simplex.
// An optimizer with support <= 2 always exists, so the search runs a convex
// line search over every arm pair.
InfoRatioEstimate info_ratio_min(const std::vector<double>& deltas,
                                 const std::vector<double>& variances, double epsilon);

// Per-arm deltas/variances of an ensemble fed into info_ratio_min.
InfoRatioEstimate ensemble_info_ratio(const belief::EnsembleSamples& samples, double epsilon);

// beta_t = 1 / (min-psi + epsilon); requires at least two ensemble rows.
double adaptive_beta(const belief::EnsembleSamples& samples, double epsilon);

struct Discounted {
    double gamma = 0.0;
};
struct FiniteHorizon {
    std::size_t horizon = 1;
};
using BoundMode = std::variant<Discounted, FiniteHorizon>;

// Regret-bound right-hand side; rate_bits is converted to nats internally.
// Diagnostic only: reported next to measured regret, never asserted tight.
double regret_bound_rhs(double rate_bits, double epsilon_target, double info_ratio_bound,
                        const BoundMode& mode);

}  // namespace blasts::agents

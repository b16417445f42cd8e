#pragma once

// Base-2 Blahut-Arimoto solver for the Lagrangian rate-distortion problem
// over a finite weighted source, plus discrete information measures.
//
// The decision variable is a row-stochastic channel p(a|z) over Z source
// points and A reproduction symbols. One iteration computes the marginal
// q(a) = sum_z w_z p(a|z) and then re-normalizes each row of
// q(a) * 2^(-beta * d[z][a]). All updates run in the log2 domain with
// max-shifted normalization, so arbitrarily large beta cannot underflow a
// row to zero. Rates are reported in bits; beta is therefore the negative
// slope of the rate-distortion curve in bits per unit distortion.

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "blasts/matrix.hpp"

namespace blasts::rd {

using SourceWeights = std::vector<double>;    // probabilities over Z points
using Marginal = std::vector<double>;         // probabilities over A symbols
using Channel = Matrix;                       // Z x A, rows sum to 1
using DistortionMatrix = Matrix;              // Z x A, nonnegative finite

// Marginal entries that underflow to exactly zero are clamped to this value
// before taking log2, which keeps symbols revivable across iterations.
inline constexpr double kMarginalFloor = 0x1p-60;

struct RdSolution {
    Channel channel;
    Marginal marginal;
    double rate_bits = 0.0;
    double distortion = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    std::vector<double> lagrangian_trace;  // L_k = rate_k + beta * distortion_k
};

struct RdCurvePoint {
    double beta = 0.0;
    double rate_bits = 0.0;
    double distortion = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

SourceWeights uniform_weights(std::size_t z);
Channel uniform_channel(std::size_t z, std::size_t a);

// Shannon entropy of a probability vector, in bits. Zero entries contribute 0.
double entropy_bits(std::span<const double> probs);

// I(E;A) = sum_z w_z sum_a p(a|z) log2(p(a|z)/q(a)) with q the induced
// marginal; 0 log 0 terms contribute 0. Tiny negative results from rounding
// are clamped to 0.
double mutual_information_bits(const SourceWeights& weights, const Channel& channel);

// sum_z w_z sum_a p(a|z) d[z][a]
double expected_distortion(const SourceWeights& weights, const Channel& channel,
                           const DistortionMatrix& d);

// One Blahut-Arimoto step: returns the updated channel and the marginal of
// the *input* channel.
std::pair<Channel, Marginal> ba_iterate(const Channel& channel, const SourceWeights& weights,
                                        const DistortionMatrix& d, double beta);

// Iterates from the uniform channel until the achieved distortion moves by
// less than tol between consecutive iterates, or max_iters is reached.
RdSolution solve_rate_distortion(const SourceWeights& weights, const DistortionMatrix& d,
                                 double beta, std::size_t max_iters = 100, double tol = 1e-6);

// One solve per beta; points are emitted in ascending beta order.
std::vector<RdCurvePoint> rd_curve(const SourceWeights& weights, const DistortionMatrix& d,
                                   std::vector<double> betas, std::size_t max_iters = 100,
                                   double tol = 1e-6);

// CSV serialization, header: beta,rate_bits,distortion,iterations,converged
std::string rd_curve_csv(const std::vector<RdCurvePoint>& points);

}  // namespace blasts::rd

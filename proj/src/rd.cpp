#include "blasts/rd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "blasts/format.hpp"

namespace blasts::rd {

namespace {

void check_weights(const SourceWeights& w) {
    if (w.empty()) throw std::invalid_argument("source weights: empty");
    double sum = 0.0;
    for (double v : w) {
        if (!std::isfinite(v) || v < 0.0) throw std::invalid_argument("source weights: entries must be finite and >= 0");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("source weights: must sum to 1");
}

void check_distortion(const DistortionMatrix& d, std::size_t z, std::size_t a) {
    if (d.rows != z || d.cols != a || d.cols == 0)
        throw std::invalid_argument("distortion matrix: dimension mismatch");
    for (double v : d.data)
        if (!std::isfinite(v) || v < 0.0)
            throw std::invalid_argument("distortion matrix: entries must be finite and >= 0");
}

void check_channel(const Channel& p, std::size_t z) {
    if (p.rows != z || p.cols == 0) throw std::invalid_argument("channel: dimension mismatch");
    for (std::size_t r = 0; r < p.rows; ++r) {
        double sum = 0.0;
        for (double v : p.row(r)) {
            if (!std::isfinite(v) || v < 0.0) throw std::invalid_argument("channel: entries must be finite and >= 0");
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("channel: rows must sum to 1");
    }
}

void check_beta(double beta) {
    if (!std::isfinite(beta) || beta < 0.0) throw std::invalid_argument("beta must be finite and >= 0");
}

Marginal induced_marginal(const Channel& p, const SourceWeights& w) {
    Marginal q(p.cols, 0.0);
    for (std::size_t z = 0; z < p.rows; ++z) {
        const double wz = w[z];
        if (wz == 0.0) continue;
        auto row = p.row(z);
        for (std::size_t a = 0; a < p.cols; ++a) q[a] += wz * row[a];
    }
    return q;
}

// One update in the log2 domain. Writes the new channel into `next`, and
// returns sum_z w_z * (m_z + log2 S_z), the row-normalization mass used by
// the solver's cheap rate identity.
double ba_update(Channel& next, const Marginal& q, const SourceWeights& w,
                 const DistortionMatrix& d, double beta, std::vector<double>& logq) {
    const std::size_t Z = d.rows, A = d.cols;
    logq.resize(A);
    for (std::size_t a = 0; a < A; ++a) logq[a] = std::log2(q[a] == 0.0 ? kMarginalFloor : q[a]);

    double norm_mass = 0.0;
    for (std::size_t z = 0; z < Z; ++z) {
        auto drow = d.row(z);
        auto prow = next.row(z);
        double m = -std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < A; ++a) {
            const double x = logq[a] - beta * drow[a];
            prow[a] = x;
            if (x > m) m = x;
        }
        double s = 0.0;
        for (std::size_t a = 0; a < A; ++a) {
            const double e = std::exp2(prow[a] - m);
            prow[a] = e;
            s += e;
        }
        const double inv = 1.0 / s;
        for (std::size_t a = 0; a < A; ++a) prow[a] *= inv;
        norm_mass += w[z] * (m + std::log2(s));
    }
    return norm_mass;
}

}  // namespace

SourceWeights uniform_weights(std::size_t z) {
    if (z == 0) throw std::invalid_argument("uniform_weights: z must be >= 1");
    return SourceWeights(z, 1.0 / static_cast<double>(z));
}

Channel uniform_channel(std::size_t z, std::size_t a) {
    if (z == 0 || a == 0) throw std::invalid_argument("uniform_channel: dimensions must be >= 1");
    return Channel(z, a, 1.0 / static_cast<double>(a));
}

double entropy_bits(std::span<const double> probs) {
    double h = 0.0;
    for (double p : probs) {
        if (!std::isfinite(p) || p < 0.0) throw std::invalid_argument("entropy_bits: entries must be finite and >= 0");
        if (p > 0.0) h -= p * std::log2(p);
    }
    return h;
}

double mutual_information_bits(const SourceWeights& weights, const Channel& channel) {
    check_weights(weights);
    check_channel(channel, weights.size());
    const Marginal q = induced_marginal(channel, weights);
    double mi = 0.0;
    for (std::size_t z = 0; z < channel.rows; ++z) {
        const double wz = weights[z];
        if (wz == 0.0) continue;
        auto row = channel.row(z);
        for (std::size_t a = 0; a < channel.cols; ++a) {
            const double p = row[a];
            // q[a] >= p*w_z mathematically; q[a]==0 with p>0 only happens when
            // the accumulation of denormal products underflows, and such terms
            // carry no measurable mass
            if (p > 0.0 && q[a] > 0.0) mi += wz * p * std::log2(p / q[a]);
        }
    }
    return mi < 0.0 ? 0.0 : mi;
}

double expected_distortion(const SourceWeights& weights, const Channel& channel,
                           const DistortionMatrix& d) {
    check_weights(weights);
    check_channel(channel, weights.size());
    check_distortion(d, channel.rows, channel.cols);
    double total = 0.0;
    for (std::size_t z = 0; z < channel.rows; ++z) {
        auto prow = channel.row(z);
        auto drow = d.row(z);
        double acc = 0.0;
        for (std::size_t a = 0; a < channel.cols; ++a) acc += prow[a] * drow[a];
        total += weights[z] * acc;
    }
    return total;
}

std::pair<Channel, Marginal> ba_iterate(const Channel& channel, const SourceWeights& weights,
                                        const DistortionMatrix& d, double beta) {
    check_weights(weights);
    check_channel(channel, weights.size());
    check_distortion(d, channel.rows, channel.cols);
    check_beta(beta);

    Marginal q = induced_marginal(channel, weights);
    Channel next(channel.rows, channel.cols);
    std::vector<double> logq;
    ba_update(next, q, weights, d, beta, logq);
    return {std::move(next), std::move(q)};
}

RdSolution solve_rate_distortion(const SourceWeights& weights, const DistortionMatrix& d,
                                 double beta, std::size_t max_iters, double tol) {
    check_weights(weights);
    if (d.rows != weights.size()) throw std::invalid_argument("distortion matrix: dimension mismatch");
    check_distortion(d, weights.size(), d.cols);
    check_beta(beta);
    if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be > 0");

    const std::size_t Z = d.rows, A = d.cols;
    RdSolution sol;
    sol.channel = uniform_channel(Z, A);
    sol.lagrangian_trace.reserve(max_iters);

    double prev_distortion = expected_distortion(weights, sol.channel, d);
    Marginal q(A), q_next(A);
    std::vector<double> logq;

    for (std::size_t k = 1; k <= max_iters; ++k) {
        q = induced_marginal(sol.channel, weights);
        const double norm_mass = ba_update(sol.channel, q, weights, d, beta, logq);

        double distortion = 0.0;
        std::fill(q_next.begin(), q_next.end(), 0.0);
        for (std::size_t z = 0; z < Z; ++z) {
            const double wz = weights[z];
            auto prow = sol.channel.row(z);
            auto drow = d.row(z);
            double acc = 0.0;
            for (std::size_t a = 0; a < A; ++a) {
                acc += prow[a] * drow[a];
                q_next[a] += wz * prow[a];
            }
            distortion += wz * acc;
        }

        // Exact rate of the new iterate: the update gives
        //   sum_z w_z sum_a p(a|z) log2(p(a|z)/q_old(a)) = -beta*D - norm_mass,
        // and switching the reference to the induced marginal subtracts
        // KL(q_new || q_old).
        double kl = 0.0;
        for (std::size_t a = 0; a < A; ++a) {
            if (q_next[a] > 0.0) kl += q_next[a] * (std::log2(q_next[a]) - logq[a]);
        }
        const double rate = -beta * distortion - norm_mass - kl;
        sol.lagrangian_trace.push_back(rate + beta * distortion);
        sol.iterations = k;
        sol.distortion = distortion;

        if (std::abs(distortion - prev_distortion) < tol) {
            sol.converged = true;
            break;
        }
        prev_distortion = distortion;
    }

    sol.marginal = induced_marginal(sol.channel, weights);
    sol.rate_bits = mutual_information_bits(weights, sol.channel);
    return sol;
}

std::vector<RdCurvePoint> rd_curve(const SourceWeights& weights, const DistortionMatrix& d,
                                   std::vector<double> betas, std::size_t max_iters, double tol) {
    if (betas.empty()) throw std::invalid_argument("rd_curve: betas must be non-empty");
    for (double b : betas) check_beta(b);
    std::sort(betas.begin(), betas.end());

    std::vector<RdCurvePoint> points;
    points.reserve(betas.size());
    for (double beta : betas) {
        RdSolution sol = solve_rate_distortion(weights, d, beta, max_iters, tol);
        points.push_back({beta, sol.rate_bits, sol.distortion, sol.iterations, sol.converged});
    }
    return points;
}

std::string rd_curve_csv(const std::vector<RdCurvePoint>& points) {
    std::string out = "beta,rate_bits,distortion,iterations,converged\n";
    for (const auto& p : points) {
        out += format_double(p.beta);
        out += ',';
        out += format_double(p.rate_bits);
        out += ',';
        out += format_double(p.distortion);
        out += ',';
        out += std::to_string(p.iterations);
        out += ',';
        out += p.converged ? '1' : '0';
        out += '\n';
    }
    return out;
}

}  // namespace blasts::rd

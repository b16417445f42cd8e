#pragma once

// Test-only reference computations, kept independent of the library code
// paths they are used to check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "blasts/matrix.hpp"

namespace oracles {

inline double binary_entropy_bits(double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

// Analytic rate-distortion function of a Bernoulli(p) source under Hamming
// distortion: R(D) = H_b(p) - H_b(D) for 0 <= D <= min(p, 1-p), else 0.
inline double binary_hamming_rate(double p, double d) {
    const double cap = std::min(p, 1.0 - p);
    if (d >= cap) return 0.0;
    return binary_entropy_bits(p) - binary_entropy_bits(d);
}

// Mutual information via the joint distribution j[z][a] = w_z p(a|z):
// I = sum j log2(j / (row_marginal * col_marginal)).
inline double mi_joint_double_sum(const std::vector<double>& w, const blasts::Matrix& p) {
    const std::size_t Z = p.rows, A = p.cols;
    std::vector<double> col(A, 0.0);
    for (std::size_t z = 0; z < Z; ++z)
        for (std::size_t a = 0; a < A; ++a) col[a] += w[z] * p(z, a);
    double mi = 0.0;
    for (std::size_t z = 0; z < Z; ++z) {
        for (std::size_t a = 0; a < A; ++a) {
            const double j = w[z] * p(z, a);
            if (j > 0.0) mi += j * std::log2(j / (w[z] * col[a]));
        }
    }
    return mi;
}

inline double expected_distortion_ref(const std::vector<double>& w, const blasts::Matrix& p,
                                      const blasts::Matrix& d) {
    double total = 0.0;
    for (std::size_t z = 0; z < p.rows; ++z)
        for (std::size_t a = 0; a < p.cols; ++a) total += w[z] * p(z, a) * d(z, a);
    return total;
}

// Brute-force minimum of I + beta*D over a grid of 2x2 row-stochastic
// channels, rows (1-t, t) with t on an n-point grid per row.
inline double grid_min_lagrangian_2x2(const std::vector<double>& w, const blasts::Matrix& d,
                                      double beta, int n = 200) {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const double t0 = static_cast<double>(i) / (n - 1);
        for (int j = 0; j < n; ++j) {
            const double t1 = static_cast<double>(j) / (n - 1);
            blasts::Matrix p = blasts::Matrix::from_rows({{1.0 - t0, t0}, {1.0 - t1, t1}});
            const double lag = mi_joint_double_sum(w, p) + beta * expected_distortion_ref(w, p, d);
            best = std::min(best, lag);
        }
    }
    return best;
}

// Minimum of (pi . deltas)^2 / (pi . vars + eps) over a simplex grid with
// roughly `target_points` points (K = deltas.size()).
inline double simplex_grid_min(const std::vector<double>& deltas, const std::vector<double>& vars,
                               double eps, std::size_t target_points = 10000) {
    const std::size_t K = deltas.size();
    std::size_t m = 1;
    auto count = [&](std::size_t res) {
        // compositions of res into K nonnegative parts: C(res+K-1, K-1)
        double c = 1.0;
        for (std::size_t i = 1; i < K; ++i) c = c * (res + i) / i;
        return c;
    };
    while (count(m + 1) <= static_cast<double>(target_points)) ++m;

    double best = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> comp(K, 0);
    auto eval = [&]() {
        double num = 0.0, den = eps;
        for (std::size_t a = 0; a < K; ++a) {
            const double pi = static_cast<double>(comp[a]) / static_cast<double>(m);
            num += pi * deltas[a];
            den += pi * vars[a];
        }
        best = std::min(best, num * num / den);
    };
    auto rec = [&](auto&& self, std::size_t idx, std::size_t left) -> void {
        if (idx == K - 1) {
            comp[idx] = left;
            eval();
            return;
        }
        for (std::size_t v = 0; v <= left; ++v) {
            comp[idx] = v;
            self(self, idx + 1, left - v);
        }
    };
    rec(rec, 0, m);
    return best;
}

// Empirical entropy (bits) of per-row argmax labels of a sample matrix.
inline double argmax_label_entropy_bits(const blasts::Matrix& samples) {
    std::vector<std::size_t> counts(samples.cols, 0);
    for (std::size_t z = 0; z < samples.rows; ++z) {
        std::size_t best = 0;
        for (std::size_t a = 1; a < samples.cols; ++a)
            if (samples(z, a) > samples(z, best)) best = a;
        ++counts[best];
    }
    double h = 0.0;
    for (std::size_t c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / static_cast<double>(samples.rows);
        h -= p * std::log2(p);
    }
    return h;
}

}  // namespace oracles

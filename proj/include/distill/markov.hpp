// Copyright 2026 The Distill Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DISTILL_MARKOV_HPP
#define DISTILL_MARKOV_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "distill/analytic.hpp"
#include "distill/errors.hpp"
#include "distill/numeric.hpp"
#include "distill/pauli_dist.hpp"

namespace distill {

/// Probability vector over error weights 0..n.
struct WeightDistribution {
    std::vector<double> probs;

    WeightDistribution() = default;
    explicit WeightDistribution(std::vector<double> p) : probs(std::move(p)) {}

    static WeightDistribution point_mass(int n, int w) {
        detail::require(n >= 1 && w >= 0 && w <= n, "weight outside 0..n");
        std::vector<double> p(n + 1, 0.0);
        p[w] = 1.0;
        return WeightDistribution(std::move(p));
    }

    int n() const { return static_cast<int>(probs.size()) - 1; }
    double operator[](int w) const { return probs[w]; }

    void validate(double tol = 1e-10) const {
        detail::require(probs.size() >= 2, "distribution needs n >= 1");
        double s = 0.0;
        for (double p : probs) {
            detail::require(p >= 0.0, "negative probability");
            s += p;
        }
        detail::require(std::abs(s - 1.0) <= tol, "distribution does not sum to 1");
    }
};

/// Column-stochastic weight chain with bandwidth 2. Column = source weight.
class TransitionMatrix {
   public:
    int n() const { return n_; }

    /// T[to, from]; zero outside the band.
    double operator()(int to, int from) const {
        int d = to - from;
        if (d < -2 || d > 2 || to < 0 || to > n_ || from < 0 || from > n_) {
            return 0.0;
        }
        return bands_[from][d + 2];
    }

    WeightDistribution apply(const WeightDistribution &x) const {
        detail::require(x.n() == n_, "distribution size does not match matrix");
        std::vector<double> out(n_ + 1, 0.0);
        for (int w = 0; w <= n_; ++w) {
            double xw = x.probs[w];
            if (xw == 0.0) {
                continue;
            }
            const auto &b = bands_[w];
            for (int d = -2; d <= 2; ++d) {
                int to = w + d;
                if (to >= 0 && to <= n_) {
                    out[to] += b[d + 2] * xw;
                }
            }
        }
        return WeightDistribution(std::move(out));
    }

    friend TransitionMatrix transition_matrix(int n, const GateNoise &noise);

   private:
    int n_ = 0;
    std::vector<std::array<double, 5>> bands_;
};

inline TransitionMatrix transition_matrix(int n, const GateNoise &noise) {
    detail::require(n >= 2, "transition matrix needs n >= 2");
    noise.validate();
    TransitionMatrix t;
    t.n_ = n;
    t.bands_.assign(n + 1, {0, 0, 0, 0, 0});
    const double d = 5.0 * n * (n - 1);
    const double f0 = noise.f0, f1 = noise.f1, f2 = noise.f2;
    for (int w = 0; w <= n; ++w) {
        double a = static_cast<double>(n - w) * (n - w - 1);
        double b = static_cast<double>(w) * (n - w);
        double c = static_cast<double>(w) * (w - 1);
        auto &col = t.bands_[w];
        col[0] = 5.0 * f2 * c / d;
        col[1] = (10.0 * f1 * b + 2.0 * (1.0 - f2) * c) / d;
        col[2] = (5.0 * f0 * a + 4.0 * (1.0 - f1) * b + 3.0 * (1.0 - f2) * c) / d;
        col[3] = (2.0 * (1.0 - f0) * a + 6.0 * (1.0 - f1) * b) / d;
        col[4] = 3.0 * (1.0 - f0) * a / d;
    }
    return t;
}

/// Binomial(n, epsilon) over weights.
inline WeightDistribution initial_weight_distribution(int n, double epsilon) {
    detail::require(n >= 1, "pair count must be positive");
    detail::require(epsilon >= 0.0 && epsilon <= 1.0, "infidelity must lie in [0, 1]");
    std::vector<double> p(n + 1, 0.0);
    if (epsilon == 0.0 || epsilon == 1.0) {
        p[epsilon == 0.0 ? 0 : n] = 1.0;
        return WeightDistribution(std::move(p));
    }
    double le = std::log(epsilon), lf = std::log1p(-epsilon);
    for (int w = 0; w <= n; ++w) {
        p[w] = std::exp(numeric::log_binomial(n, w) + w * le + (n - w) * lf);
    }
    return WeightDistribution(std::move(p));
}

inline WeightDistribution evolve(const WeightDistribution &x, const TransitionMatrix &t, std::int64_t gates) {
    detail::require(gates >= 0, "gate count must be non-negative");
    detail::require(x.n() == t.n(), "distribution size does not match matrix");
    WeightDistribution cur = x;
    for (std::int64_t g = 0; g < gates; ++g) {
        cur = t.apply(cur);
    }
    return cur;
}

/// Distributions after each of the (ascending) gate counts in one pass.
inline std::vector<WeightDistribution> evolve_path(const WeightDistribution &x, const TransitionMatrix &t,
                                                  const std::vector<std::int64_t> &gates) {
    detail::require(std::is_sorted(gates.begin(), gates.end()), "gate counts must be ascending");
    std::vector<WeightDistribution> out;
    WeightDistribution cur = x;
    std::int64_t at = 0;
    for (std::int64_t g : gates) {
        cur = evolve(cur, t, g - at);
        at = g;
        out.push_back(cur);
    }
    return out;
}

/// Fixed point of the ideal chain on the non-identity sector: C(n,w) 3^w / (4^n - 1), w >= 1.
inline WeightDistribution stationary_distribution(int n) {
    detail::require(n >= 2, "stationary distribution needs n >= 2");
    std::vector<double> p(n + 1, 0.0);
    double log_norm = 2.0 * n * std::log(2.0) + std::log1p(-std::ldexp(1.0, -2 * n));
    for (int w = 1; w <= n; ++w) {
        p[w] = std::exp(numeric::log_binomial(n, w) + w * std::log(3.0) - log_norm);
    }
    return WeightDistribution(std::move(p));
}

/// Exact acceptance statistics of measuring m slots of a state whose error weight
/// follows `x` and whose errors are uniform within each weight class.
inline PerformanceReport finite_depth_performance(const WeightDistribution &x, int m) {
    const int n = x.n();
    detail::require(n >= 2, "distribution needs n >= 2");
    detail::require(m >= 1 && m <= n - 1, "m must lie in [1, n-1]");
    const int k = n - m;
    const double log3 = std::log(3.0);
    double p_joint = 0.0, gap = 0.0;
    for (int w = 0; w <= n; ++w) {
        if (x.probs[w] <= 0.0) {
            continue;
        }
        double base = std::log(x.probs[w]) - w * log3 - numeric::log_binomial(n, w);
        if (w <= m) {
            p_joint += std::exp(base + numeric::log_binomial(m, w));
        }
        for (int j = std::max(1, w - m); j <= std::min(w, k); ++j) {
            gap += std::exp(base + numeric::log_binomial(k, j) + numeric::log_binomial(m, w - j) + j * log3);
        }
    }
    double p_acc = p_joint + gap;
    return detail::finish_report(p_acc, p_joint, gap, n, k);
}

/// m in [1, n-1] minimizing the per-pair output infidelity; ties go to the smaller m.
inline std::pair<int, PerformanceReport> optimal_measured_count(const WeightDistribution &x) {
    const int n = x.n();
    detail::require(n >= 2, "distribution needs n >= 2");
    int best_m = 1;
    PerformanceReport best = finite_depth_performance(x, 1);
    for (int m = 2; m <= n - 1; ++m) {
        PerformanceReport r = finite_depth_performance(x, m);
        if (r.pair_infidelity < best.pair_infidelity) {
            best = r;
            best_m = m;
        }
    }
    return {best_m, best};
}

}  // namespace distill

#endif

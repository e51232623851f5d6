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

#ifndef DISTILL_ANALYTIC_HPP
#define DISTILL_ANALYTIC_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "distill/errors.hpp"
#include "distill/numeric.hpp"

namespace distill {

/// Single-pair fidelity. The infidelity is stored so that values near 1 stay resolvable.
class FidelityPoint {
   public:
    static FidelityPoint from_fidelity(double f) {
        detail::require(f > 0.0 && f <= 1.0, "fidelity must lie in (0, 1]");
        return FidelityPoint(1.0 - f);
    }
    static FidelityPoint from_infidelity(double eps) {
        detail::require(eps >= 0.0 && eps < 1.0, "infidelity must lie in [0, 1)");
        return FidelityPoint(eps);
    }
    /// Geometric mean of individual pair fidelities.
    static FidelityPoint geometric_mean(std::span<const double> fidelities) {
        detail::require(!fidelities.empty(), "geometric mean of an empty set");
        double acc = 0.0;
        for (double f : fidelities) {
            detail::require(f > 0.0 && f <= 1.0, "fidelity must lie in (0, 1]");
            acc += std::log(f);
        }
        return FidelityPoint(-std::expm1(acc / static_cast<double>(fidelities.size())));
    }

    double fidelity() const { return 1.0 - eps_; }
    double infidelity() const { return eps_; }
    /// log f, accurate for tiny infidelity.
    double log_fidelity() const { return std::log1p(-eps_); }

   private:
    explicit FidelityPoint(double eps) : eps_(eps) {}
    double eps_;
};

enum class Mode { Passive, Active };

struct ProtocolParams {
    int n = 2;
    int m = 1;
    Mode mode = Mode::Passive;
    std::int64_t error_budget = 0;

    static ProtocolParams passive(int n, int m) { return {n, m, Mode::Passive, 0}; }
    static ProtocolParams active(int n, int m, std::int64_t e) { return {n, m, Mode::Active, e}; }

    int k() const { return n - m; }
    /// E = 0 behaves as passive.
    bool is_passive() const { return mode == Mode::Passive || error_budget == 0; }

    void validate() const {
        detail::require(n >= 2, "n must be at least 2");
        detail::require(m >= 1 && m <= n - 1, "m must lie in [1, n-1]");
        detail::require(error_budget >= 0, "error budget must be non-negative");
        detail::require(mode == Mode::Active || error_budget == 0, "passive mode takes no error budget");
    }
};

enum class Exactness { Exact, Bound };

inline const char *to_string(Exactness e) { return e == Exactness::Exact ? "exact" : "bound"; }

struct PerformanceReport {
    double p_accept = 1.0;
    double p_accept_and_phi = 1.0;
    double block_fidelity = 1.0;
    /// 1 - block_fidelity, kept separately for resolution near 1.
    double block_infidelity = 0.0;
    double pair_infidelity = 0.0;
    double expected_overhead = 1.0;
    Exactness exactness = Exactness::Exact;
};

/// Expected input pairs per output pair, n / (k p).
inline double expected_overhead(double n, double k, double p_accept) {
    detail::require(k >= 1.0 && n >= k, "overhead needs n >= k >= 1");
    detail::require(p_accept > 0.0 && p_accept <= 1.0, "acceptance probability must lie in (0, 1]");
    return n / (k * p_accept);
}

struct TwirlWeights {
    double phi_weight;
    double per_pauli_weight;
};

inline TwirlWeights twirl_weights(FidelityPoint f, int n) {
    detail::require(n >= 1, "pair count must be positive");
    double lf = static_cast<double>(n) * f.log_fidelity();
    double fn = std::exp(lf);
    double rest = -std::expm1(lf);
    // 4^n - 1 = 4^n (1 - 4^-n)
    double per = std::ldexp(rest, -2 * n) / (1.0 - std::ldexp(1.0, -2 * n));
    return {fn, per};
}

namespace detail {

inline PerformanceReport finish_report(double p_acc, double p_joint, double gap, int n, int k) {
    PerformanceReport r;
    r.p_accept = p_acc;
    r.p_accept_and_phi = p_joint;
    r.block_infidelity = gap / p_acc;
    r.block_fidelity = p_joint / p_acc;
    r.pair_infidelity = numeric::per_pair_infidelity(r.block_infidelity, k);
    r.expected_overhead = expected_overhead(n, k, p_acc);
    return r;
}

}  // namespace detail

/// Exact acceptance statistics of the passive protocol on a twirled input.
inline PerformanceReport passive_performance(const ProtocolParams &params, FidelityPoint f) {
    params.validate();
    detail::require(params.is_passive(), "passive_performance needs passive parameters");
    const int n = params.n, m = params.m, k = params.k();
    double lf = static_cast<double>(n) * f.log_fidelity();
    double fn = std::exp(lf);
    double rest = -std::expm1(lf);
    double inv4n = std::ldexp(1.0, -2 * n);
    double norm = 1.0 - inv4n;
    double two_m = std::ldexp(1.0, -m);
    double p_acc = fn + rest * (two_m - inv4n) / norm;
    double p_joint = fn + rest * (std::ldexp(1.0, -m - 2 * k) - inv4n) / norm;
    double gap = rest * two_m * (1.0 - std::ldexp(1.0, -2 * k)) / norm;
    return detail::finish_report(p_acc, p_joint, gap, n, k);
}

/// Passive report built only from the guaranteed bounds f^n <= p_accept and
/// block infidelity <= 2^-m (f^-n - 1).
inline PerformanceReport passive_bound_performance(const ProtocolParams &params, FidelityPoint f) {
    params.validate();
    const int n = params.n, m = params.m, k = params.k();
    double lf = static_cast<double>(n) * f.log_fidelity();
    PerformanceReport r;
    r.exactness = Exactness::Bound;
    r.p_accept = std::exp(lf);
    r.block_infidelity = std::min(1.0, std::ldexp(std::expm1(-lf), -m));
    r.block_fidelity = 1.0 - r.block_infidelity;
    r.p_accept_and_phi = r.p_accept * r.block_fidelity;
    r.pair_infidelity = numeric::per_pair_infidelity(r.block_infidelity, k);
    r.expected_overhead = expected_overhead(n, k, r.p_accept);
    return r;
}

struct FidelityBoundChain {
    /// f^n / (f^n + 2^-m (1 - f^n))
    double ratio_bound;
    /// 1 - 2^-m (f^-n - 1)
    double linear_bound;
    double p_accept_lower;
    double p_accept_upper;
};

inline FidelityBoundChain passive_bound_chain(const ProtocolParams &params, FidelityPoint f) {
    params.validate();
    double lf = static_cast<double>(params.n) * f.log_fidelity();
    double fn = std::exp(lf);
    double tail = std::ldexp(-std::expm1(lf), -params.m);
    return {fn / (fn + tail), 1.0 - std::ldexp(std::expm1(-lf), -params.m), fn, fn + tail};
}

struct ImprovementThreshold {
    /// -log2 f
    double critical_fraction;
    /// Real-valued right side log2((1 - f^n) / (f^(n-1) (1 - f))).
    double bound;
    /// ceil(bound) clipped below at 1; empty when it exceeds n - 1.
    std::optional<int> sufficient_m;
    /// Smallest m in [1, n-1] whose exact block fidelity exceeds f; empty if none.
    std::optional<int> min_m;
};

inline ImprovementThreshold improvement_threshold(int n, double f) {
    detail::require(n >= 2, "n must be at least 2");
    detail::require(f > 0.0 && f < 1.0, "fidelity must lie in (0, 1)");
    ImprovementThreshold t;
    t.critical_fraction = -std::log2(f);
    FidelityPoint fp = FidelityPoint::from_fidelity(f);
    double lf = fp.log_fidelity();
    double num = -std::expm1(static_cast<double>(n) * lf);
    double den = std::exp(static_cast<double>(n - 1) * lf) * fp.infidelity();
    t.bound = std::log2(num / den);
    double c = std::max(1.0, std::ceil(t.bound));
    if (c <= n - 1) {
        t.sufficient_m = static_cast<int>(c);
    }
    for (int m = 1; m <= n - 1; ++m) {
        PerformanceReport r = passive_performance(ProtocolParams::passive(n, m), fp);
        if (r.block_infidelity < fp.infidelity()) {
            t.min_m = m;
            break;
        }
    }
    return t;
}

enum class SyndromeRelation { Equal, CommuteDistinct, Anticommute };

/// Probability that C P C^dag and C Q C^dag share the first-m syndrome under a uniform
/// Clifford C. Both distinct relations give (2^-m 4^n - 1) / (4^n - 1).
inline double syndrome_match_probability(int n, int m, SyndromeRelation rel) {
    detail::require(n >= 2 && m >= 1 && m <= n - 1, "need 1 <= m <= n-1");
    if (rel == SyndromeRelation::Equal) {
        return 1.0;
    }
    double s = std::ldexp(1.0, -2 * n);
    return (std::ldexp(1.0, -m) - s) / (1.0 - s);
}

}  // namespace distill

#endif

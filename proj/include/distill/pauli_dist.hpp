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

#ifndef DISTILL_PAULI_DIST_HPP
#define DISTILL_PAULI_DIST_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "distill/analytic.hpp"
#include "distill/errors.hpp"
#include "distill/numeric.hpp"
#include "distill/pauli_frame.hpp"

namespace distill {

/// Every pair independently suffers X, Y or Z with probability epsilon / 3 each.
struct IIDDepolarizing {
    int n = 1;
    double epsilon = 0.0;

    IIDDepolarizing(int n_, double epsilon_) : n(n_), epsilon(epsilon_) {
        detail::require(n_ >= 1, "pair count must be positive");
        detail::require(epsilon_ >= 0.0 && epsilon_ < 0.75, "weight ordering needs 0 <= epsilon < 3/4");
    }

    /// log probability of one specific string of weight w.
    double log_string_probability(int w) const {
        double lp = numeric::log_pow(std::log1p(-epsilon), n - w);
        if (w > 0) {
            lp += epsilon > 0.0 ? w * std::log(epsilon / 3.0) : numeric::kNegInf;
        }
        return lp;
    }
    double string_probability(int w) const { return std::exp(log_string_probability(w)); }
    double probability(const PauliFrame &p) const { return string_probability(p.weight()); }
};

/// Two-qubit gate-noise fidelity parameters.
struct GateNoise {
    double f0 = 1.0;
    double f1 = 0.0;
    double f2 = 0.0;

    static GateNoise ideal() { return {1.0, 0.0, 0.0}; }

    void validate() const {
        for (double v : {f0, f1, f2}) {
            detail::require(v >= 0.0 && v <= 1.0, "gate noise parameters must lie in [0, 1]");
        }
    }
};

inline GateNoise gate_noise_depolarizing(double lambda) {
    detail::require(lambda >= 0.0 && lambda <= 1.0, "depolarizing strength must lie in [0, 1]");
    double f1 = (lambda / 15.0) * (2.0 - 16.0 * lambda / 15.0);
    return {(1.0 - lambda) * (1.0 - lambda) + lambda * lambda / 15.0, f1, f1};
}

inline GateNoise gate_noise_amplitude_damping(double gamma) {
    detail::require(gamma >= 0.0 && gamma <= 1.0, "damping parameter must lie in [0, 1]");
    double a = gamma * gamma / 2.0 - gamma + 1.0;
    double b = gamma + 2.0;
    return {a * a, gamma * (gamma * gamma * gamma - 2.0 * gamma + 4.0) / 12.0, gamma * gamma * b * b / 36.0};
}

struct TopErrorMass {
    double q;
    /// 1 - q, summed over the uncovered strings directly.
    double one_minus_q;
    std::int64_t covered;
};

/// Total probability of the E + 1 most likely strings, by weight class.
inline TopErrorMass top_error_mass(const IIDDepolarizing &model, std::int64_t e) {
    detail::require(e >= 0, "error budget must be non-negative");
    const int n = model.n;
    double remaining = static_cast<double>(e) + 1.0;
    double q = 0.0, tail = 0.0;
    const double log3 = std::log(3.0);
    for (int w = 0; w <= n; ++w) {
        double log_size = numeric::log_binomial(n, w) + w * log3;
        double size = std::exp(log_size);
        if (size < 9.0e15) {
            size = std::round(size);
        }
        double lp = model.log_string_probability(w);
        double taken = std::min(remaining, size);
        remaining -= taken;
        if (taken > 0.0) {
            q += taken * std::exp(lp);
        }
        double left = size - taken;
        if (left > 0.0) {
            tail += std::exp(std::log(left) + lp);
        }
    }
    if (tail == 0.0) {
        q = 1.0;
    }
    return {std::min(q, 1.0), tail, e + 1};
}

/// Guaranteed performance of the E-active protocol on IID depolarizing input.
struct ActiveReport {
    double q;
    /// 1 - 2^-m (E + 1) (1/q - 1)
    double fidelity_lower_bound;
    /// joint_lower / min(1, p_accept_upper)
    double fidelity_ratio_bound;
    double p_accept_lower;
    double p_accept_upper;
    double joint_lower;
    double expected_overhead_upper;
    /// 1 - fidelity_ratio_bound
    double block_infidelity_bound;
    /// Per-pair infidelity implied by fidelity_ratio_bound.
    double pair_infidelity_bound;
};

/// Same as active_bounds with a precomputed top_error_mass(model, E).
inline ActiveReport active_bounds(const ProtocolParams &params, const IIDDepolarizing &model, const TopErrorMass &t) {
    params.validate();
    detail::require(model.n == params.n, "model size does not match parameters");
    const int n = params.n, m = params.m, k = params.k();
    const std::int64_t e = params.error_budget;
    detail::require(t.covered == e + 1, "top mass was computed for a different budget");
    double fn = std::exp(n * std::log1p(-model.epsilon));
    double scale = std::ldexp(static_cast<double>(e) + 1.0, -m);
    ActiveReport r;
    r.q = t.q;
    r.p_accept_lower = t.q;
    r.p_accept_upper = t.q + scale * t.one_minus_q;
    r.fidelity_lower_bound = 1.0 - scale * (t.one_minus_q / t.q);
    // q - fn is the mass of the covered non-identity strings
    double covered_errors = std::max(0.0, (1.0 - fn) - t.one_minus_q);
    r.joint_lower = t.q - std::ldexp(static_cast<double>(e), -m) * covered_errors;
    double denom = std::min(1.0, r.p_accept_upper);
    double block_infidelity = std::clamp(1.0 - r.joint_lower / denom, 0.0, 1.0);
    if (r.joint_lower > 0.0) {
        // (denom - joint) / denom, with denom - joint expanded to avoid cancellation
        double gap = denom >= 1.0 ? t.one_minus_q + std::ldexp(static_cast<double>(e), -m) * covered_errors
                                  : scale * t.one_minus_q + std::ldexp(static_cast<double>(e), -m) * covered_errors;
        block_infidelity = std::clamp(gap / denom, 0.0, 1.0);
    }
    r.fidelity_ratio_bound = 1.0 - block_infidelity;
    r.block_infidelity_bound = block_infidelity;
    r.pair_infidelity_bound = numeric::per_pair_infidelity(block_infidelity, k);
    r.expected_overhead_upper = t.q > 0.0 ? expected_overhead(n, k, t.q) : std::numeric_limits<double>::infinity();
    return r;
}

inline ActiveReport active_bounds(const ProtocolParams &params, const IIDDepolarizing &model) {
    params.validate();
    return active_bounds(params, model, top_error_mass(model, params.error_budget));
}

/// Active report cast into the common report shape. Every field is a guaranteed bound.
inline PerformanceReport active_performance(const ActiveReport &a, const ProtocolParams & /*params*/) {
    PerformanceReport r;
    r.exactness = Exactness::Bound;
    r.p_accept = a.p_accept_lower;
    r.p_accept_and_phi = a.joint_lower;
    r.block_fidelity = a.fidelity_ratio_bound;
    r.block_infidelity = a.block_infidelity_bound;
    r.pair_infidelity = a.pair_infidelity_bound;
    r.expected_overhead = a.expected_overhead_upper;
    return r;
}

inline PerformanceReport active_performance(const ProtocolParams &params, const IIDDepolarizing &model) {
    return active_performance(active_bounds(params, model), params);
}

inline constexpr std::int64_t kDefaultEnumerationCap = 1'000'000;

/// E + 1 most likely strings: weight ascending, then lexicographic by slot with X < Y < Z < I.
inline std::vector<PauliFrame> enumerate_top_errors(const IIDDepolarizing &model, std::int64_t e,
                                                    std::int64_t cap = kDefaultEnumerationCap) {
    detail::require(e >= 0, "error budget must be non-negative");
    detail::require(e + 1 <= cap, "error budget exceeds the enumeration cap");
    detail::require(model.n <= kMaxFrameSlots, "enumeration supports at most 64 slots");
    const int n = model.n;
    const std::size_t want = static_cast<std::size_t>(e + 1);
    std::vector<PauliFrame> out;
    out.reserve(want);
    static constexpr char kOrder[] = {'X', 'Y', 'Z'};
    PauliFrame cur = PauliFrame::identity(n);
    // Depth-first over slots; returns false once enough strings are collected.
    auto rec = [&](auto &&self, int slot, int left) -> bool {
        if (out.size() >= want) {
            return false;
        }
        if (left == 0) {
            out.push_back(cur);
            return out.size() < want;
        }
        if (n - slot < left) {
            return true;
        }
        for (char c : kOrder) {
            cur.set(slot, c);
            if (!self(self, slot + 1, left - 1)) {
                cur.set(slot, 'I');
                return false;
            }
        }
        cur.set(slot, 'I');
        return self(self, slot + 1, left);
    };
    for (int w = 0; w <= n && out.size() < want; ++w) {
        rec(rec, 0, w);
    }
    return out;
}

}  // namespace distill

#endif

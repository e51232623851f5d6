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

#ifndef DISTILL_REPEATER_HPP
#define DISTILL_REPEATER_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "distill/analytic.hpp"
#include "distill/errors.hpp"

namespace distill {

/// Entanglement swap: infidelity doubles, capped at 1.
inline double swap_propagate(double epsilon) {
    detail::require(epsilon >= 0.0 && epsilon <= 1.0, "infidelity must lie in [0, 1]");
    return std::min(2.0 * epsilon, 1.0);
}

/// Nested chain of 2^T segments. per_level[0] distills raw links; per_level[l] distills
/// after the l-th swap.
struct RepeaterPlan {
    int levels = 0;
    double link_infidelity = 0.0;
    std::vector<std::optional<ProtocolParams>> per_level;
    double end_to_end_infidelity = 0.0;
    double end_to_end_overhead = 1.0;
    /// Product of the distillation overheads only (no 2:1 swap factor).
    double per_segment_overhead = 1.0;
    /// Infidelity after the optional distillation at each level.
    std::vector<double> level_infidelity;
};

struct RepeaterEvaluation {
    double end_to_end_infidelity;
    double end_to_end_overhead;
    double per_segment_overhead;
    std::vector<double> level_infidelity;
};

inline RepeaterEvaluation evaluate_scheme(const RepeaterPlan &plan) {
    detail::require(plan.levels >= 0 && plan.levels <= 62, "levels must lie in [0, 62]");
    detail::require(static_cast<int>(plan.per_level.size()) == plan.levels + 1, "per_level needs T + 1 entries");
    detail::require(plan.link_infidelity >= 0.0 && plan.link_infidelity <= 1.0, "link infidelity must lie in [0, 1]");
    RepeaterEvaluation ev{plan.link_infidelity, 1.0, 1.0, {}};
    double eps = plan.link_infidelity;
    for (int level = 0; level <= plan.levels; ++level) {
        if (level > 0) {
            eps = swap_propagate(eps);
            ev.end_to_end_overhead *= 2.0;
        }
        if (const auto &p = plan.per_level[level]) {
            p->validate();
            detail::require(p->is_passive(), "repeater levels use passive distillation");
            if (eps >= 1.0) {
                throw InfeasibleError("level " + std::to_string(level) + " input has zero fidelity");
            }
            PerformanceReport r = passive_performance(*p, FidelityPoint::from_infidelity(eps));
            eps = r.pair_infidelity;
            ev.end_to_end_overhead *= r.expected_overhead;
            ev.per_segment_overhead *= r.expected_overhead;
        }
        ev.level_infidelity.push_back(eps);
    }
    ev.end_to_end_infidelity = eps;
    return ev;
}

inline RepeaterPlan evaluated(RepeaterPlan plan) {
    RepeaterEvaluation ev = evaluate_scheme(plan);
    plan.end_to_end_infidelity = ev.end_to_end_infidelity;
    plan.end_to_end_overhead = ev.end_to_end_overhead;
    plan.per_segment_overhead = ev.per_segment_overhead;
    plan.level_infidelity = ev.level_infidelity;
    return plan;
}

/// (n, k) on raw links, (n', n' - 1) after every swap.
inline RepeaterPlan nested_plan(double link_infidelity, int levels, int n, int k, std::optional<int> n_prime) {
    RepeaterPlan plan;
    plan.levels = levels;
    plan.link_infidelity = link_infidelity;
    plan.per_level.assign(levels + 1, std::nullopt);
    plan.per_level[0] = ProtocolParams::passive(n, n - k);
    if (n_prime) {
        for (int level = 1; level <= levels; ++level) {
            plan.per_level[level] = ProtocolParams::passive(*n_prime, 1);
        }
    }
    return evaluated(std::move(plan));
}

struct HeuristicResult {
    /// First-level (n, k); empty when no distillation is needed.
    std::optional<ProtocolParams> first;
    std::optional<int> n_prime;
    RepeaterPlan plan;
};

/// Three-parameter search: per n the largest k hitting `target` in one round, keep the
/// cheapest (n, k), then scan maintenance rounds (n', n' - 1).
inline HeuristicResult heuristic_search(double link_infidelity, double target, int levels = 9, int n_cap = 100) {
    detail::require(link_infidelity > 0.0 && link_infidelity < 1.0, "link infidelity must lie in (0, 1)");
    detail::require(target > 0.0, "target must be positive");
    detail::require(levels >= 0 && levels <= 62, "levels must lie in [0, 62]");
    detail::require(n_cap >= 2, "n_cap must be at least 2");

    RepeaterPlan bare;
    bare.levels = levels;
    bare.link_infidelity = link_infidelity;
    bare.per_level.assign(levels + 1, std::nullopt);
    bare = evaluated(std::move(bare));
    if (bare.end_to_end_infidelity <= target) {
        return {std::nullopt, std::nullopt, bare};
    }

    struct Candidate {
        double overhead;
        ProtocolParams params;
    };
    std::vector<Candidate> firsts;
    FidelityPoint f = FidelityPoint::from_infidelity(link_infidelity);
    for (int n = 2; n <= n_cap; ++n) {
        for (int m = 1; m <= n - 1; ++m) {
            ProtocolParams p = ProtocolParams::passive(n, m);
            PerformanceReport r = passive_performance(p, f);
            if (r.pair_infidelity <= target) {
                firsts.push_back({r.expected_overhead, p});
                break;
            }
        }
    }
    std::stable_sort(firsts.begin(), firsts.end(),
                     [](const Candidate &a, const Candidate &b) { return a.overhead < b.overhead; });

    for (const Candidate &c : firsts) {
        std::optional<HeuristicResult> best;
        auto consider = [&](std::optional<int> n_prime) {
            RepeaterPlan plan;
            try {
                plan = nested_plan(link_infidelity, levels, c.params.n, c.params.k(), n_prime);
            } catch (const InfeasibleError &) {
                return;
            }
            if (plan.end_to_end_infidelity <= target &&
                (!best || plan.end_to_end_overhead < best->plan.end_to_end_overhead)) {
                best = HeuristicResult{c.params, n_prime, std::move(plan)};
            }
        };
        if (levels == 0) {
            consider(std::nullopt);
        } else {
            for (int np = 2; np <= n_cap; ++np) {
                consider(np);
            }
        }
        if (best) {
            return *best;
        }
    }
    throw InfeasibleError("no (n, k, n') with n, n' <= " + std::to_string(n_cap) + " reaches the target");
}

}  // namespace distill

#endif

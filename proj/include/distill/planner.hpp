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

#ifndef DISTILL_PLANNER_HPP
#define DISTILL_PLANNER_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "distill/analytic.hpp"
#include "distill/errors.hpp"
#include "distill/mc_oracle.hpp"
#include "distill/numeric.hpp"
#include "distill/pauli_dist.hpp"
#include "distill/rng.hpp"

namespace distill {

enum class Objective { Exact, Bound };

inline const char *to_string(Objective o) { return o == Objective::Exact ? "exact" : "bound"; }

struct PlanLayer {
    ProtocolParams params;
    double input_infidelity;
    PerformanceReport report;
};

struct ConcatenationPlan {
    std::vector<PlanLayer> layers;
    double epsilon0 = 0.0;
    double target = 0.0;
    double final_infidelity = 0.0;
    double expected_overhead = 1.0;
    double delta = 0.5;
    double guaranteed_overhead = 0.0;
    int layer_count = 0;
    int peak_memory_pairs = 0;
};

struct PlanOptions {
    double delta = 0.5;
    int n_max = 300;
    /// Largest error budget tried for an active first layer; empty = passive only.
    std::optional<std::int64_t> active_e_max;
    Objective objective = Objective::Exact;
    int grid_nodes = 512;
    /// Budgets per decade on the active log grid.
    int e_grid_per_decade = 32;
    /// epsilon0 <= target (1 + rtol) yields the empty plan.
    double target_rtol = 1e-3;
};

/// 2 E log2(1/delta).
inline double guaranteed_overhead(double expected, double delta) {
    detail::require(expected >= 1.0, "expected overhead must be at least 1");
    detail::require(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
    return 2.0 * expected * std::log2(1.0 / delta);
}

namespace detail {

/// ceil that ignores representation error just above an integer.
inline double ceil_tolerant(double x) {
    double r = std::round(x);
    return std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x)) ? r : std::ceil(x);
}

}  // namespace detail

/// n = ceil(eps^-1/2), m = ceil(log2(1/eps_f)).
inline ProtocolParams auto_params(double epsilon, double epsilon_f) {
    detail::require(epsilon > 0.0 && epsilon <= 0.05, "auto parameters need 0 < epsilon <= 0.05");
    detail::require(epsilon_f > 0.0 && epsilon_f < 1.0, "target must lie in (0, 1)");
    double floor_log2 = -std::pow(epsilon, -1.0 / 3.0);
    detail::require(std::log2(epsilon_f) >= floor_log2 * (1.0 + 1e-12), "target below 2^(-epsilon^(-1/3))");
    int n = static_cast<int>(detail::ceil_tolerant(1.0 / std::sqrt(epsilon)));
    int m = static_cast<int>(detail::ceil_tolerant(-std::log2(epsilon_f)));
    detail::require(m <= n - 1, "auto parameters leave no output pair");
    return ProtocolParams::passive(n, m);
}

/// Report for one layer at the given input infidelity. Active layers assume IID input.
inline PerformanceReport evaluate_layer(const ProtocolParams &params, double input_infidelity, Objective objective) {
    if (!params.is_passive()) {
        return active_performance(params, IIDDepolarizing(params.n, input_infidelity));
    }
    FidelityPoint f = FidelityPoint::from_infidelity(input_infidelity);
    return objective == Objective::Exact ? passive_performance(params, f) : passive_bound_performance(params, f);
}

namespace detail {

inline void finalize_plan(ConcatenationPlan &plan) {
    plan.layer_count = static_cast<int>(plan.layers.size());
    plan.expected_overhead = 1.0;
    plan.peak_memory_pairs = 0;
    plan.final_infidelity = plan.epsilon0;
    for (const PlanLayer &l : plan.layers) {
        plan.expected_overhead *= l.report.expected_overhead;
        plan.peak_memory_pairs = std::max(plan.peak_memory_pairs, l.params.n);
        plan.final_infidelity = l.report.pair_infidelity;
    }
    plan.guaranteed_overhead = guaranteed_overhead(plan.expected_overhead, plan.delta);
}

/// Layer chain re-evaluated with each output feeding the next input.
inline ConcatenationPlan chain_plan(double epsilon0, double target, double delta, const std::vector<ProtocolParams> &params,
                                    Objective objective) {
    ConcatenationPlan plan;
    plan.epsilon0 = epsilon0;
    plan.target = target;
    plan.delta = delta;
    double eps = epsilon0;
    for (const ProtocolParams &p : params) {
        PerformanceReport r = evaluate_layer(p, eps, objective);
        plan.layers.push_back({p, eps, r});
        eps = r.pair_infidelity;
    }
    finalize_plan(plan);
    return plan;
}

struct Edge {
    double overhead = std::numeric_limits<double>::infinity();
    ProtocolParams params;
};

inline std::vector<std::int64_t> budget_grid(std::int64_t e_max, int per_decade) {
    std::set<std::int64_t> out;
    double top = std::log10(static_cast<double>(e_max));
    int steps = static_cast<int>(std::ceil(top * per_decade));
    for (int s = 0; s <= steps; ++s) {
        double v = std::pow(10.0, std::min(top, static_cast<double>(s) / per_decade));
        out.insert(std::clamp<std::int64_t>(std::llround(v), 1, e_max));
    }
    out.insert(e_max);
    return {out.begin(), out.end()};
}

}  // namespace detail

/// Plan for a fixed layer sequence, each layer evaluated at the previous output.
inline ConcatenationPlan plan_from_layers(double epsilon0, double target, const std::vector<ProtocolParams> &layers,
                                         double delta = 0.5) {
    detail::require(epsilon0 > 0.0 && epsilon0 < 0.5, "need 0 < epsilon0 < 0.5");
    for (const ProtocolParams &p : layers) {
        p.validate();
    }
    return detail::chain_plan(epsilon0, target, delta, layers, Objective::Exact);
}

/// Fewest expected pairs per output reaching `target`: DP over a log-spaced infidelity grid,
/// each edge the cheapest (n, m) landing at or below a deeper node.
inline ConcatenationPlan plan_concatenation(double epsilon0, double target, const PlanOptions &options = {}) {
    detail::require(target > 0.0 && target < epsilon0 && epsilon0 < 0.5, "need 0 < target < epsilon0 < 0.5");
    detail::require(options.n_max >= 2, "n_max must be at least 2");
    detail::require(options.grid_nodes >= 2, "grid needs at least 2 nodes");
    detail::require(options.delta > 0.0 && options.delta < 1.0, "delta must lie in (0, 1)");
    if (epsilon0 <= target * (1.0 + options.target_rtol)) {
        return detail::chain_plan(epsilon0, target, options.delta, {}, options.objective);
    }
    const int nodes = options.grid_nodes;
    const double l0 = std::log(epsilon0), l1 = std::log(target);
    std::vector<double> grid(nodes);
    for (int i = 0; i < nodes; ++i) {
        grid[i] = std::exp(l0 + (l1 - l0) * i / (nodes - 1));
    }
    grid.front() = epsilon0;
    grid.back() = target;
    // Deepest node j with grid[j] >= eps.
    auto landing = [&](double eps) {
        if (eps <= target) {
            return nodes - 1;
        }
        int j = static_cast<int>(std::floor((std::log(eps) - l0) / (l1 - l0) * (nodes - 1)));
        j = std::clamp(j, 0, nodes - 1);
        while (j + 1 < nodes && grid[j + 1] >= eps) {
            ++j;
        }
        while (j > 0 && grid[j] < eps) {
            --j;
        }
        return j;
    };

    std::vector<double> cost(nodes, std::numeric_limits<double>::infinity());
    std::vector<int> pred(nodes, -1);
    std::vector<ProtocolParams> pred_params(nodes);
    cost[0] = 1.0;
    std::vector<detail::Edge> best(nodes);
    auto offer = [&](int i, double eps_out, double overhead, const ProtocolParams &p) {
        int j = landing(eps_out);
        if (j > i && overhead < best[j].overhead) {
            best[j] = {overhead, p};
        }
    };

    std::vector<std::int64_t> budgets;
    if (options.active_e_max && *options.active_e_max > 0) {
        budgets = detail::budget_grid(*options.active_e_max, options.e_grid_per_decade);
    }

    for (int i = 0; i + 1 < nodes; ++i) {
        if (!std::isfinite(cost[i])) {
            continue;
        }
        std::fill(best.begin(), best.end(), detail::Edge{});
        const double eps = grid[i];
        const double log_f = std::log1p(-eps);
        for (int n = 2; n <= options.n_max; ++n) {
            const double lf = n * log_f;
            const double fn = std::exp(lf), rest = -std::expm1(lf);
            const double inv4n = std::ldexp(1.0, -2 * n), norm = 1.0 - inv4n;
            for (int m = 1; m <= n - 1; ++m) {
                const int k = n - m;
                double p_acc, block;
                if (options.objective == Objective::Exact) {
                    double two_m = std::ldexp(1.0, -m);
                    p_acc = fn + rest * (two_m - inv4n) / norm;
                    block = rest * two_m * (1.0 - std::ldexp(1.0, -2 * k)) / norm / p_acc;
                } else {
                    p_acc = fn;
                    block = std::min(1.0, std::ldexp(std::expm1(-lf), -m));
                }
                double out = numeric::per_pair_infidelity(block, k);
                if (out < eps) {
                    offer(i, out, static_cast<double>(n) / (k * p_acc), ProtocolParams::passive(n, m));
                }
            }
            if (i == 0 && !budgets.empty()) {
                IIDDepolarizing model(n, eps);
                for (std::int64_t e : budgets) {
                    TopErrorMass t = top_error_mass(model, e);
                    for (int m = 1; m <= n - 1; ++m) {
                        ProtocolParams p = ProtocolParams::active(n, m, e);
                        ActiveReport a = active_bounds(p, model, t);
                        if (a.pair_infidelity_bound < eps) {
                            offer(i, a.pair_infidelity_bound, a.expected_overhead_upper, p);
                        }
                    }
                    if (t.one_minus_q <= 0.0) {
                        break;
                    }
                }
            }
        }
        for (int j = nodes - 2; j > i; --j) {
            if (best[j + 1].overhead < best[j].overhead) {
                best[j] = best[j + 1];
            }
        }
        for (int j = i + 1; j < nodes; ++j) {
            double c = cost[i] * best[j].overhead;
            if (c < cost[j]) {
                cost[j] = c;
                pred[j] = i;
                pred_params[j] = best[j].params;
            }
        }
    }
    if (!std::isfinite(cost[nodes - 1])) {
        throw InfeasibleError("no layer sequence with n <= " + std::to_string(options.n_max) + " reaches the target");
    }
    std::vector<ProtocolParams> chain;
    for (int j = nodes - 1; j > 0; j = pred[j]) {
        chain.push_back(pred_params[j]);
    }
    std::reverse(chain.begin(), chain.end());
    ConcatenationPlan plan = detail::chain_plan(epsilon0, target, options.delta, chain, options.objective);
    if (!(plan.final_infidelity <= target)) {
        throw InfeasibleError("re-evaluated layer chain misses the target");
    }
    return plan;
}

/// Layers from auto_params along the nominal chain eps_l = 2^(-eps_(l-1)^(-1/3)). The last
/// layer treats its input as (log2 1/target)^-3, an upper bound on the nominal input.
inline ConcatenationPlan plan_recipe(double epsilon0, double target, double delta = 0.5) {
    detail::require(target > 0.0 && target < epsilon0, "need 0 < target < epsilon0");
    std::vector<ProtocolParams> chain;
    double eps = epsilon0;
    for (int layer = 0;; ++layer) {
        if (layer >= 64) {
            throw InfeasibleError("recipe did not converge");
        }
        double next = std::exp2(-std::pow(eps, -1.0 / 3.0));
        if (next <= target) {
            double last = std::max(eps, std::pow(-std::log2(target), -3.0));
            chain.push_back(auto_params(last, target));
            break;
        }
        detail::require(next < eps, "recipe needs an improving first layer");
        chain.push_back(auto_params(eps, next));
        eps = next;
    }
    ConcatenationPlan plan = detail::chain_plan(epsilon0, target, delta, chain, Objective::Exact);
    if (!(plan.final_infidelity <= target)) {
        throw InfeasibleError("recipe chain misses the target");
    }
    return plan;
}

struct RetrySamples {
    std::vector<double> overheads;

    double mean() const {
        double s = 0.0;
        for (double v : overheads) {
            s += v;
        }
        return overheads.empty() ? 0.0 : s / static_cast<double>(overheads.size());
    }
    double standard_error() const {
        if (overheads.size() < 2) {
            return 0.0;
        }
        double mu = mean(), s = 0.0;
        for (double v : overheads) {
            s += (v - mu) * (v - mu);
        }
        double n = static_cast<double>(overheads.size());
        return std::sqrt(s / (n - 1.0) / n);
    }
};

namespace detail {

inline std::uint64_t sample_attempts(double p, SplitMix64 &rng) {
    if (p >= 1.0) {
        return 1;
    }
    double u = 1.0 - rng.uniform();
    return 1 + static_cast<std::uint64_t>(std::floor(std::log(u) / std::log1p(-p)));
}

/// Raw pairs spent per layer-`layer` output pair. Each attempt of a box draws its own
/// upstream cost; failed attempts discard their inputs.
inline double sample_pair_cost(const ConcatenationPlan &plan, int layer, SplitMix64 &rng) {
    if (layer == 0) {
        return 1.0;
    }
    const PlanLayer &l = plan.layers[layer - 1];
    std::uint64_t attempts = sample_attempts(l.report.p_accept, rng);
    double spent = 0.0;
    for (std::uint64_t a = 0; a < attempts; ++a) {
        spent += sample_pair_cost(plan, layer - 1, rng);
    }
    return spent * static_cast<double>(l.params.n) / static_cast<double>(l.params.k());
}

inline void check_simulable(const ConcatenationPlan &plan) {
    for (const PlanLayer &l : plan.layers) {
        require(l.report.p_accept > 0.0 && l.report.p_accept <= 1.0, "layer acceptance must lie in (0, 1]");
    }
}

struct SampleSlots {
    std::vector<double> *out;
    SampleSlots &operator+=(const SampleSlots &) { return *this; }
};

}  // namespace detail

/// Realized overheads of independent repeat-until-success runs of the whole plan.
inline RetrySamples simulate_retries(const ConcatenationPlan &plan, std::uint64_t runs, std::uint64_t seed,
                                     unsigned threads = 0) {
    detail::check_simulable(plan);
    RetrySamples s;
    s.overheads.assign(runs, 0.0);
    detail::run_trials(runs, seed, threads, detail::SampleSlots{&s.overheads},
                       [&](std::uint64_t i, SplitMix64 &rng, detail::SampleSlots &slots) {
                           (*slots.out)[i] = detail::sample_pair_cost(plan, plan.layer_count, rng);
                       });
    return s;
}

struct BudgetRestartResult {
    double guaranteed_overhead;
    double attempt_budget;
    int attempts_per_run;
    /// Fraction of runs whose total spend exceeded guaranteed_overhead or never succeeded.
    double fraction_exceeding;
    RetrySamples totals;
};

/// Each attempt is abandoned once it spends 2 E[O]; at most ceil(log2(1/delta)) attempts.
inline BudgetRestartResult simulate_budget_restart(const ConcatenationPlan &plan, double delta, std::uint64_t runs,
                                                   std::uint64_t seed, unsigned threads = 0) {
    detail::check_simulable(plan);
    detail::require(runs >= 1, "need at least one run");
    BudgetRestartResult r;
    r.guaranteed_overhead = guaranteed_overhead(plan.expected_overhead, delta);
    r.attempt_budget = 2.0 * plan.expected_overhead;
    r.attempts_per_run = static_cast<int>(std::ceil(std::log2(1.0 / delta)));
    r.totals.overheads.assign(runs, 0.0);
    detail::run_trials(runs, seed, threads, detail::SampleSlots{&r.totals.overheads},
                       [&](std::uint64_t i, SplitMix64 &rng, detail::SampleSlots &slots) {
                           double total = 0.0;
                           bool done = false;
                           for (int a = 0; a < r.attempts_per_run && !done; ++a) {
                               double c = detail::sample_pair_cost(plan, plan.layer_count, rng);
                               done = c <= r.attempt_budget;
                               total += done ? c : r.attempt_budget;
                           }
                           (*slots.out)[i] = done ? total : std::numeric_limits<double>::infinity();
                       });
    std::uint64_t over = 0;
    for (double v : r.totals.overheads) {
        over += v > r.guaranteed_overhead;
    }
    r.fraction_exceeding = static_cast<double>(over) / static_cast<double>(runs);
    return r;
}

}  // namespace distill

#endif

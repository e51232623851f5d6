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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "distill/distill.hpp"
#include "oracles.hpp"

using namespace distill;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char *f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

bool within(const MCEstimate &e, double target, double sigmas = 4.0) {
    return std::abs(e.p_hat() - target) <= sigmas * e.standard_error() + 1e-12;
}

Outcome exhaustive_oracle() {
    double worst = 0.0;
    for (int n = 2; n <= 3; ++n) {
        for (int m = 1; m <= n - 1; ++m) {
            for (double f : {0.5, 0.8, 0.95}) {
                auto o = oracle::brute_force_passive(n, m, f);
                auto r = passive_performance(ProtocolParams::passive(n, m), FidelityPoint::from_fidelity(f));
                worst = std::max({worst, std::abs(o.accept - r.p_accept), std::abs(o.joint - r.p_accept_and_phi)});
            }
        }
    }
    return {worst <= 1e-12, fmt("max abs diff %.3g (tol 1e-12)", worst)};
}

Outcome mc_passive() {
    struct Point {
        int n, m;
        double eps;
    };
    const std::vector<Point> grid{{2, 1, 0.2},  {3, 1, 0.1},  {4, 2, 0.05}, {5, 2, 0.1},  {6, 3, 0.15}, {7, 2, 0.02},
                                  {8, 4, 0.1},  {9, 3, 0.05}, {10, 3, 0.1}, {10, 5, 0.2}, {11, 4, 0.08}, {12, 6, 0.1}};
    int ok = 0;
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Point &p = grid[i];
        auto e = estimate_passive(p.n, p.m, p.eps, 1'000'000, 1000 + i);
        auto r = passive_performance(ProtocolParams::passive(p.n, p.m), FidelityPoint::from_infidelity(p.eps));
        bool good = within(e.accept, r.p_accept) && within(e.accept_and_phi, r.p_accept_and_phi);
        ok += good;
        worst = std::max({worst, std::abs(e.accept.p_hat() - r.p_accept) / e.accept.standard_error(),
                          std::abs(e.accept_and_phi.p_hat() - r.p_accept_and_phi) / e.accept_and_phi.standard_error()});
    }
    return {ok == static_cast<int>(grid.size()),
            std::to_string(ok) + "/12 points within 4 stderr, worst " + fmt("%.2f sigma", worst)};
}

Outcome mc_active() {
    auto params = ProtocolParams::active(10, 5, 30);
    auto b = active_bounds(params, IIDDepolarizing(10, 0.1));
    auto e = estimate_active(10, 5, 30, 0.1, 100'000, 31337);
    double se = e.accept.standard_error();
    bool bracket = e.accept.p_hat() >= b.p_accept_lower - 4 * se && e.accept.p_hat() <= b.p_accept_upper + 4 * se;
    bool fid = e.block_fidelity() >= b.fidelity_lower_bound - 4 * e.block_fidelity_stderr();
    double q_classes = std::pow(0.9, 10) + 30 * std::pow(0.9, 9) * (0.1 / 3);
    bool q_ok = std::abs(b.q - q_classes) <= 1e-12;
    return {bracket && fid && q_ok, "q " + fmt("%.7f", b.q) + ", p_acc " + fmt("%.5f", e.accept.p_hat()) + " in [" +
                                        fmt("%.5f", b.p_accept_lower) + ", " + fmt("%.5f", b.p_accept_upper) +
                                        "], block fidelity " + fmt("%.5f", e.block_fidelity()) + " >= " +
                                        fmt("%.5f", b.fidelity_lower_bound)};
}

Outcome phase_transition() {
    const FidelityPoint f = FidelityPoint::from_fidelity(0.8);
    auto block = [&](int n, double ratio) {
        int m = std::clamp(static_cast<int>(std::lround(ratio * n)), 1, n - 1);
        return passive_performance(ProtocolParams::passive(n, m), f).block_fidelity;
    };
    bool increasing = true;
    double prev = 0.0;
    for (int n = 10; n <= 200; n += 10) {
        double v = block(n, 0.40);
        increasing = increasing && v > prev;
        prev = v;
    }
    double high = block(200, 0.40);
    bool low_drops = block(200, 0.25) < block(10, 0.25);
    double threshold = improvement_threshold(10, 0.8).critical_fraction;
    bool t_ok = std::abs(threshold - (-std::log2(0.8))) < 1e-12;
    return {increasing && high > 0.999 && low_drops && t_ok,
            "m/n=0.40 at n=200: " + fmt("%.6f", high) + ", m/n=0.25 n=10 -> 200: " + fmt("%.4f", block(10, 0.25)) +
                " -> " + fmt("%.4g", block(200, 0.25)) + ", threshold " + fmt("%.5f", threshold)};
}

Outcome transition_properties() {
    std::vector<GateNoise> noises{GateNoise::ideal(), gate_noise_depolarizing(1e-2), gate_noise_depolarizing(1e-3),
                                  gate_noise_amplitude_damping(1e-2)};
    double worst_sum = 0.0, worst_fix = 0.0;
    for (int n = 2; n <= 100; ++n) {
        for (const auto &g : noises) {
            auto t = transition_matrix(n, g);
            for (int w = 0; w <= n; ++w) {
                double s = 0.0;
                for (int v = std::max(0, w - 2); v <= std::min(n, w + 2); ++v) {
                    s += t(v, w);
                }
                worst_sum = std::max(worst_sum, std::abs(s - 1.0));
            }
        }
        if (n <= 50) {
            auto s = stationary_distribution(n);
            auto ts = transition_matrix(n, GateNoise::ideal()).apply(s);
            for (int w = 0; w <= n; ++w) {
                worst_fix = std::max(worst_fix, std::abs(ts[w] - s[w]));
            }
        }
    }
    return {worst_sum <= 1e-12 && worst_fix <= 1e-10,
            "column sum error " + fmt("%.3g", worst_sum) + ", fixed point error " + fmt("%.3g", worst_fix)};
}

Outcome full_twirl() {
    double worst = 0.0;
    for (int n : {5, 10, 30}) {
        auto t = transition_matrix(n, GateNoise::ideal());
        for (double eps : {0.02, 0.1}) {
            auto x = evolve(initial_weight_distribution(n, eps), t, 10000);
            for (int m : {1, n / 2}) {
                double a = finite_depth_performance(x, m).pair_infidelity;
                double b = passive_performance(ProtocolParams::passive(n, m), FidelityPoint::from_infidelity(eps))
                               .pair_infidelity;
                worst = std::max(worst, std::abs(a - b));
            }
        }
    }
    return {worst <= 1e-6, "max |diff| in pair infidelity " + fmt("%.3g", worst) + " (tol 1e-6)"};
}

Outcome noisy_plateau() {
    const int n = 30;
    const double eps0 = 0.02;
    auto x0 = initial_weight_distribution(n, eps0);
    std::vector<std::int64_t> grid;
    for (int e = 0; e <= 40; ++e) {
        auto g = static_cast<std::int64_t>(std::llround(std::pow(10.0, e / 8.0)));
        if (grid.empty() || grid.back() != g) {
            grid.push_back(g);
        }
    }
    auto ideal = evolve_path(x0, transition_matrix(n, GateNoise::ideal()), grid);
    // lambda = 0 at the largest G against the closed form at the same m
    auto [m_ideal, r_ideal] = optimal_measured_count(ideal.back());
    double closed =
        passive_performance(ProtocolParams::passive(n, m_ideal), FidelityPoint::from_infidelity(eps0)).pair_infidelity;
    bool ideal_ok = std::abs(r_ideal.pair_infidelity - closed) <= 1e-6 * std::max(1.0, closed) &&
                    std::abs(r_ideal.pair_infidelity - closed) <= 1e-3 * closed;
    std::string detail = "lambda=0: " + fmt("%.4g", r_ideal.pair_infidelity) + " vs " + fmt("%.4g", closed);
    bool ok = ideal_ok;
    for (double lambda : {1e-3, 1e-4}) {
        auto noisy = evolve_path(x0, transition_matrix(n, gate_noise_depolarizing(lambda)), grid);
        double plateau = 1.0;
        bool above = true;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            double v = optimal_measured_count(noisy[i]).second.pair_infidelity;
            above = above && v > optimal_measured_count(ideal[i]).second.pair_infidelity;
            plateau = std::min(plateau, v);
        }
        bool good = above && plateau <= 10 * lambda && plateau >= lambda / 10;
        ok = ok && good;
        detail += "; lambda=" + fmt("%.0e", lambda) + ": plateau " + fmt("%.4g", plateau) + (above ? "" : " NOT above");
    }
    // gate-level spot check
    const std::int64_t g = 1000;
    const int m = 29;
    auto noise = FiniteDepthNoise::depolarizing(1e-3);
    auto mc = estimate_finite_depth(n, m, g, noise, {eps0, std::nullopt}, 100'000, 4242);
    auto r = finite_depth_performance(evolve(x0, transition_matrix(n, noise.parameters()), g), m);
    bool spot = within(mc.acceptance.accept, r.p_accept) && within(mc.acceptance.accept_and_phi, r.p_accept_and_phi);
    ok = ok && spot;
    detail += "; MC spot check (G=1000, lambda=1e-3) " + std::string(spot ? "agrees" : "disagrees");
    return {ok, detail};
}

Outcome headline_plan() {
    PlanOptions active;
    active.active_e_max = 3'000'000;
    auto pa = plan_concatenation(0.1, 1e-12, active);
    auto pp = plan_concatenation(0.1, 1e-12);
    bool ok = pa.expected_overhead <= 8.0 && pp.final_infidelity <= 1e-12 && pp.expected_overhead > pa.expected_overhead;
    std::string layers;
    for (const auto &l : pa.layers) {
        layers += " (" + std::to_string(l.params.n) + "," + std::to_string(l.params.m) + "," +
                  std::to_string(l.params.error_budget) + ")";
    }
    return {ok, "active " + fmt("%.4f", pa.expected_overhead) + " (tol <= 8)," + layers + "; passive " +
                    fmt("%.4f", pp.expected_overhead)};
}

Outcome proposition_bound() {
    bool ok = true;
    std::string detail;
    for (double eps : {1e-3, 1e-4}) {
        double ef = std::exp2(-std::pow(eps, -1.0 / 3.0));
        auto p = auto_params(eps, ef);
        double o = passive_performance(p, FidelityPoint::from_infidelity(eps)).expected_overhead;
        double bound = std::exp(2 * std::pow(eps, 1.0 / 6.0));
        ok = ok && o <= bound;
        detail += (detail.empty() ? "" : "; ") + std::string("eps=") + fmt("%.0e", eps) + ": (" + std::to_string(p.n) +
                  "," + std::to_string(p.m) + ") overhead " + fmt("%.4f", o) + " <= " + fmt("%.4f", bound);
    }
    return {ok, detail};
}

Outcome recipe_plan() {
    auto plan = plan_recipe(0.0006, 1e-12, 0.5);
    // pair counts are integers and the recipe rounds n up, so the real bound is compared after ceil
    double peak_bound = std::pow(std::log2(1e12), 1.5);
    bool ok = plan.expected_overhead <= 205.5 && plan.layer_count <= 10 &&
              static_cast<double>(plan.peak_memory_pairs) <= std::ceil(peak_bound);
    std::string layers;
    for (const auto &l : plan.layers) {
        layers += " (" + std::to_string(l.params.n) + "," + std::to_string(l.params.m) + ")";
    }
    return {ok, "E[O] " + fmt("%.3f", plan.expected_overhead) + " (<= 205.5), L " + std::to_string(plan.layer_count) +
                    ", peak " + std::to_string(plan.peak_memory_pairs) + " (<= ceil(" + fmt("%.2f", peak_bound) + ")),"
                    + layers};
}

Outcome retry_bound() {
    auto plan = plan_from_layers(0.05, 1e-4, {ProtocolParams::passive(12, 4), ProtocolParams::passive(30, 8)});
    auto r = simulate_budget_restart(plan, 0.1, 10'000, 99);
    return {plan.layer_count == 2 && plan.final_infidelity <= plan.target && r.fraction_exceeding <= 0.1,
            std::to_string(plan.layer_count) + " layers, E[O] " + fmt("%.3f", plan.expected_overhead) +
                ", final " + fmt("%.3g", plan.final_infidelity) + ", fraction over " + fmt("%.2f", r.guaranteed_overhead) + " = " + fmt("%.4f", r.fraction_exceeding)};
}

Outcome repeater_triple() {
    int largest = -1;
    for (int t = 0; t <= 9; ++t) {
        if (nested_plan(0.0035, t, 93, 68, 40).end_to_end_infidelity <= 1e-9) {
            largest = t;
        }
    }
    if (largest < 0) {
        return {false, "(93, 68, 40) infeasible at every T <= 9"};
    }
    auto fixed = nested_plan(0.0035, largest, 93, 68, 40);
    auto h = heuristic_search(0.0035, 1e-9, largest, 100);
    bool ok = h.plan.end_to_end_infidelity <= 1e-9 && h.plan.end_to_end_overhead <= 1.05 * fixed.end_to_end_overhead;
    std::string triple = h.first ? "(" + std::to_string(h.first->n) + "," + std::to_string(h.first->k()) + "," +
                                       std::to_string(h.n_prime.value_or(0)) + ")"
                                 : "(none)";
    return {ok, "largest feasible T " + std::to_string(largest) + ", (93,68,40) overhead " +
                    fmt("%.2f", fixed.end_to_end_overhead) + ", heuristic " + triple + " " +
                    fmt("%.2f", h.plan.end_to_end_overhead)};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char *name;
        double budget_s;
        std::function<Outcome()> check;
    };
    const std::vector<Criterion> criteria{
        {1, "exhaustive oracle equivalence", 1, exhaustive_oracle},
        {2, "MC vs closed form (passive)", 120, mc_passive},
        {3, "MC vs bounds (active)", 120, mc_active},
        {4, "phase transition", 5, phase_transition},
        {5, "transition-matrix properties", 5, transition_properties},
        {6, "full-twirl limit", 30, full_twirl},
        {7, "finite-depth noisy plateau", 60, noisy_plateau},
        {8, "headline concatenation point", 60, headline_plan},
        {9, "auto-parameter overhead bound", 5, proposition_bound},
        {10, "recipe plan", 5, recipe_plan},
        {11, "retry bound", 30, retry_bound},
        {12, "repeater triple and heuristic", 120, repeater_triple},
    };
    int failed = 0;
    for (const Criterion &c : criteria) {
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool pass = o.pass && secs <= c.budget_s;
        failed += !pass;
        std::printf("[%s] %2d %s: %s (%.2f s, budget %.0f s)\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                    secs, c.budget_s);
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}

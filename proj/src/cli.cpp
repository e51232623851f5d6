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

#include "distill/cli.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "distill/distill.hpp"

namespace distill::cli {

namespace {

enum class Kind { Int, Real, Text, Bool, IntList, RealList, Object };

struct Param {
    std::string name;
    Kind kind;
    Json fallback;  // null = required unless `optional`
    std::string help;
    std::vector<std::string> choices = {};
    bool optional = false;
};

const std::map<std::string, std::vector<Param>> &param_specs() {
    static const std::map<std::string, std::vector<Param>> specs = {
        {"evaluate",
         {{"n", Kind::Int, nullptr, "pairs per block"},
          {"m", Kind::Int, 0, "measured pairs"},
          {"m_fraction", Kind::Real, nullptr, "m as a fraction of n, rounded and clipped to [1, n-1]", {}, true},
          {"fidelity", Kind::Real, nullptr, "input pair fidelity", {}, true},
          {"epsilon", Kind::Real, nullptr, "input pair infidelity", {}, true},
          {"error_budget", Kind::Int, 0, "E; positive selects the active protocol"},
          {"objective", Kind::Text, "exact", "passive report: exact or bound", {"exact", "bound"}}}},
        {"plan",
         {{"epsilon0", Kind::Real, nullptr, "raw pair infidelity"},
          {"target", Kind::Real, nullptr, "target pair infidelity"},
          {"delta", Kind::Real, 0.5, "failure probability for the guaranteed overhead"},
          {"n_max", Kind::Int, 300, "largest block size"},
          {"active_e_max", Kind::Int, 0, "largest first-layer error budget; 0 = passive only"},
          {"objective", Kind::Text, "exact", "exact or bound", {"exact", "bound"}},
          {"recipe", Kind::Bool, false, "use the fixed auto-parameter recipe instead of the search"},
          {"simulate_runs", Kind::Int, 0, "repeat-until-success runs to simulate"}}},
        {"markov",
         {{"n", Kind::Int, nullptr, "pairs per block"},
          {"m", Kind::Int, 0, "measured pairs; 0 = best per gate count"},
          {"epsilon", Kind::Real, nullptr, "initial IID infidelity"},
          {"noise", Kind::Text, "ideal", "gate noise", {"ideal", "depolarizing", "amplitude_damping"}},
          {"strength", Kind::Real, 0.0, "lambda (depolarizing) or gamma (amplitude damping)"},
          {"gates", Kind::IntList, Json::array({0}), "ascending gate counts"}}},
        {"mc",
         {{"mode", Kind::Text, "passive", "protocol", {"passive", "active", "finite_depth"}},
          {"n", Kind::Int, nullptr, "pairs per block"},
          {"m", Kind::Int, nullptr, "measured pairs"},
          {"epsilon", Kind::Real, nullptr, "IID infidelity"},
          {"error_budget", Kind::Int, 0, "E for the active mode"},
          {"gates", Kind::Int, 0, "gate count for finite_depth"},
          {"lambda", Kind::Real, 0.0, "per-gate depolarizing strength for finite_depth"},
          {"trials", Kind::Int, 100000, "trial count"},
          {"threads", Kind::Int, 0, "worker threads; 0 = hardware"}}},
        {"repeater",
         {{"link_infidelity", Kind::Real, nullptr, "raw link infidelity"},
          {"target", Kind::Real, 1e-9, "end-to-end target"},
          {"levels", Kind::Int, 9, "nesting levels T"},
          {"n_cap", Kind::Int, 100, "largest n and n' scanned"},
          {"n", Kind::Int, 0, "fixed first-level n; 0 = heuristic search"},
          {"k", Kind::Int, 0, "fixed first-level k"},
          {"n_prime", Kind::Int, 0, "fixed maintenance n'; 0 = none"}}},
        {"sweep",
         {{"command", Kind::Text, nullptr, "command run per grid point", {"evaluate", "plan", "markov", "mc", "repeater"}},
          {"base", Kind::Object, Json::object(), "parameters shared by every point"},
          {"grid", Kind::Object, Json::object(), "axis name -> list of values"},
          {"max_rows", Kind::Int, 1000000, "largest accepted grid"}}},
    };
    return specs;
}

const std::vector<Param> &spec_for(const std::string &command) {
    auto it = param_specs().find(command);
    if (it == param_specs().end()) {
        throw ConfigError("unknown command '" + command + "'");
    }
    return it->second;
}

std::string dashed(std::string s) {
    std::replace(s.begin(), s.end(), '_', '-');
    return s;
}

std::string underscored(std::string s) {
    std::replace(s.begin(), s.end(), '-', '_');
    return s;
}

std::int64_t parse_int(const std::string &name, const std::string &text) {
    errno = 0;
    char *end = nullptr;
    long long v = std::strtoll(text.c_str(), &end, 10);
    if (text.empty() || *end != '\0' || errno != 0) {
        // allow integral reals such as 3e6
        double d = std::strtod(text.c_str(), &end);
        if (text.empty() || *end != '\0' || !std::isfinite(d) || d != std::floor(d) || std::abs(d) > 9.0e18) {
            throw ConfigError("parameter '" + name + "' expects an integer, got '" + text + "'");
        }
        return static_cast<std::int64_t>(d);
    }
    return v;
}

double parse_real(const std::string &name, const std::string &text) {
    char *end = nullptr;
    double d = std::strtod(text.c_str(), &end);
    if (text.empty() || *end != '\0' || std::isnan(d)) {
        throw ConfigError("parameter '" + name + "' expects a number, got '" + text + "'");
    }
    return d;
}

std::vector<std::string> split_commas(const std::string &text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

Json parse_flag(const Param &p, const std::string &text) {
    switch (p.kind) {
        case Kind::Int:
            return parse_int(p.name, text);
        case Kind::Real:
            return parse_real(p.name, text);
        case Kind::Text:
            return text;
        case Kind::Bool:
            if (text == "true" || text == "1") {
                return true;
            }
            if (text == "false" || text == "0") {
                return false;
            }
            throw ConfigError("parameter '" + p.name + "' expects true or false");
        case Kind::IntList: {
            Json a = Json::array();
            for (const auto &s : split_commas(text)) {
                a.push_back(parse_int(p.name, s));
            }
            return a;
        }
        case Kind::RealList: {
            Json a = Json::array();
            for (const auto &s : split_commas(text)) {
                a.push_back(parse_real(p.name, s));
            }
            return a;
        }
        case Kind::Object:
            try {
                return Json::parse(text);
            } catch (const Json::exception &e) {
                throw ConfigError("parameter '" + p.name + "' is not valid JSON: " + e.what());
            }
    }
    throw ConfigError("unhandled parameter kind");
}

bool is_integral(const Json &v) {
    if (v.is_number_integer()) {
        return true;
    }
    return v.is_number_float() && std::isfinite(v.get<double>()) && v.get<double>() == std::floor(v.get<double>()) &&
           std::abs(v.get<double>()) <= 9.0e18;
}

Json check_value(const Param &p, const Json &v) {
    auto fail = [&](const char *what) { throw ConfigError("parameter '" + p.name + "' expects " + what); };
    switch (p.kind) {
        case Kind::Int:
            if (!is_integral(v)) {
                fail("an integer");
            }
            return v.is_number_integer() ? v : Json(static_cast<std::int64_t>(v.get<double>()));
        case Kind::Real:
            if (!v.is_number()) {
                fail("a number");
            }
            return v.get<double>();
        case Kind::Text:
            if (!v.is_string()) {
                fail("a string");
            }
            if (!p.choices.empty() && std::find(p.choices.begin(), p.choices.end(), v.get<std::string>()) == p.choices.end()) {
                std::string all;
                for (const auto &c : p.choices) {
                    all += (all.empty() ? "" : ", ") + c;
                }
                throw ConfigError("parameter '" + p.name + "' must be one of: " + all);
            }
            return v;
        case Kind::Bool:
            if (!v.is_boolean()) {
                fail("a boolean");
            }
            return v;
        case Kind::IntList: {
            Json list = v.is_array() ? v : Json::array({v});
            Json out = Json::array();
            for (const auto &e : list) {
                if (!is_integral(e)) {
                    fail("a list of integers");
                }
                out.push_back(e.is_number_integer() ? e : Json(static_cast<std::int64_t>(e.get<double>())));
            }
            return out;
        }
        case Kind::RealList: {
            Json list = v.is_array() ? v : Json::array({v});
            Json out = Json::array();
            for (const auto &e : list) {
                if (!e.is_number()) {
                    fail("a list of numbers");
                }
                out.push_back(e.get<double>());
            }
            return out;
        }
        case Kind::Object:
            if (!v.is_object()) {
                fail("an object");
            }
            return v;
    }
    throw ConfigError("unhandled parameter kind");
}

bool needs_seed(const std::string &command, const Json &params) {
    if (command == "mc") {
        return true;
    }
    if (command == "plan") {
        return params.at("simulate_runs").get<std::int64_t>() > 0;
    }
    if (command == "sweep") {
        const std::string sub = params.at("command").get<std::string>();
        return sub == "mc" || sub == "plan";
    }
    return false;
}

// ---------------------------------------------------------------------------
// commands

std::int64_t as_int(const Json &p, const char *key) { return p.at(key).get<std::int64_t>(); }
double as_real(const Json &p, const char *key) { return p.at(key).get<double>(); }
std::string as_text(const Json &p, const char *key) { return p.at(key).get<std::string>(); }

int as_small_int(const Json &p, const char *key) {
    std::int64_t v = as_int(p, key);
    if (v < -1'000'000 || v > 1'000'000) {
        throw DomainError(std::string(key) + " is out of range");
    }
    return static_cast<int>(v);
}

std::uint64_t as_count(const Json &p, const char *key) {
    std::int64_t v = as_int(p, key);
    if (v < 0) {
        throw DomainError(std::string(key) + " must be non-negative");
    }
    return static_cast<std::uint64_t>(v);
}

Table run_evaluate(const Json &p) {
    Table t;
    t.columns = columns_for("evaluate", p);
    const int n = as_small_int(p, "n");
    int m = as_small_int(p, "m");
    if (!p.at("m_fraction").is_null()) {
        detail::require(n >= 2, "n must be at least 2");
        m = static_cast<int>(std::lround(as_real(p, "m_fraction") * n));
        m = std::clamp(m, 1, n - 1);
    }
    const bool has_f = !p.at("fidelity").is_null(), has_e = !p.at("epsilon").is_null();
    if (has_f == has_e) {
        throw ConfigError("give exactly one of fidelity and epsilon");
    }
    FidelityPoint f = has_f ? FidelityPoint::from_fidelity(as_real(p, "fidelity"))
                            : FidelityPoint::from_infidelity(as_real(p, "epsilon"));
    const std::int64_t e = as_int(p, "error_budget");
    PerformanceReport r;
    ProtocolParams params = e > 0 ? ProtocolParams::active(n, m, e) : ProtocolParams::passive(n, m);
    params.validate();
    if (e > 0) {
        ActiveReport a = active_bounds(params, IIDDepolarizing(n, f.infidelity()));
        r = active_performance(a, params);
        t.detail["active"] = {{"q", a.q},
                              {"p_accept_lower", a.p_accept_lower},
                              {"p_accept_upper", a.p_accept_upper},
                              {"joint_lower", a.joint_lower},
                              {"fidelity_lower_bound", a.fidelity_lower_bound},
                              {"fidelity_ratio_bound", a.fidelity_ratio_bound}};
    } else if (as_text(p, "objective") == "bound") {
        r = passive_bound_performance(params, f);
    } else {
        r = passive_performance(params, f);
    }
    t.rows.push_back({std::int64_t{n}, std::int64_t{m}, std::int64_t{params.k()}, e, f.infidelity(), r.p_accept,
                      r.p_accept_and_phi, r.block_fidelity, r.block_infidelity, r.pair_infidelity, r.expected_overhead,
                      std::string(to_string(r.exactness))});
    return t;
}

Table run_plan(const Json &p, std::optional<std::uint64_t> seed) {
    Table t;
    t.columns = columns_for("plan", p);
    const double eps0 = as_real(p, "epsilon0"), target = as_real(p, "target"), delta = as_real(p, "delta");
    ConcatenationPlan plan;
    if (p.at("recipe").get<bool>()) {
        plan = plan_recipe(eps0, target, delta);
    } else {
        PlanOptions o;
        o.delta = delta;
        o.n_max = as_small_int(p, "n_max");
        if (as_int(p, "active_e_max") > 0) {
            o.active_e_max = as_int(p, "active_e_max");
        }
        o.objective = as_text(p, "objective") == "bound" ? Objective::Bound : Objective::Exact;
        plan = plan_concatenation(eps0, target, o);
    }
    std::string layers;
    Json detail = Json::array();
    for (const PlanLayer &l : plan.layers) {
        layers += (layers.empty() ? "" : " ") + std::to_string(l.params.n) + ":" + std::to_string(l.params.m) + ":" +
                  std::to_string(l.params.error_budget);
        detail.push_back({{"n", l.params.n},
                          {"m", l.params.m},
                          {"k", l.params.k()},
                          {"error_budget", l.params.error_budget},
                          {"input_infidelity", l.input_infidelity},
                          {"p_accept", l.report.p_accept},
                          {"pair_infidelity", l.report.pair_infidelity},
                          {"expected_overhead", l.report.expected_overhead},
                          {"exactness", to_string(l.report.exactness)}});
    }
    t.detail["layers"] = detail;
    double retry_mean = std::nan(""), retry_se = std::nan("");
    if (const std::uint64_t runs = as_count(p, "simulate_runs"); runs > 0) {
        RetrySamples s = simulate_retries(plan, runs, *seed);
        retry_mean = s.mean();
        retry_se = s.standard_error();
    }
    t.rows.push_back({eps0, target, delta, std::int64_t{plan.layer_count}, plan.expected_overhead,
                      plan.guaranteed_overhead, plan.final_infidelity, std::int64_t{plan.peak_memory_pairs}, layers,
                      retry_mean, retry_se});
    return t;
}

Table run_markov(const Json &p) {
    Table t;
    t.columns = columns_for("markov", p);
    const int n = as_small_int(p, "n"), m = as_small_int(p, "m");
    const std::string noise = as_text(p, "noise");
    const double strength = as_real(p, "strength");
    GateNoise g = noise == "ideal"          ? GateNoise::ideal()
                  : noise == "depolarizing" ? gate_noise_depolarizing(strength)
                                            : gate_noise_amplitude_damping(strength);
    std::vector<std::int64_t> gates = p.at("gates").get<std::vector<std::int64_t>>();
    for (std::int64_t v : gates) {
        detail::require(v >= 0, "gate counts must be non-negative");
    }
    auto path = evolve_path(initial_weight_distribution(n, as_real(p, "epsilon")), transition_matrix(n, g), gates);
    Json weights = Json::array();
    for (std::size_t i = 0; i < gates.size(); ++i) {
        PerformanceReport r;
        int used_m = m;
        if (m == 0) {
            std::tie(used_m, r) = optimal_measured_count(path[i]);
        } else {
            r = finite_depth_performance(path[i], m);
        }
        t.rows.push_back({gates[i], std::int64_t{used_m}, r.p_accept, r.p_accept_and_phi, r.block_fidelity,
                          r.pair_infidelity, r.expected_overhead});
        weights.push_back(path[i].probs);
    }
    t.detail["weights"] = weights;
    return t;
}

Table run_mc(const Json &p, std::uint64_t seed) {
    Table t;
    t.columns = columns_for("mc", p);
    const std::string mode = as_text(p, "mode");
    const int n = as_small_int(p, "n"), m = as_small_int(p, "m");
    const double eps = as_real(p, "epsilon"), lambda = as_real(p, "lambda");
    const std::int64_t e = as_int(p, "error_budget"), gates = as_int(p, "gates");
    const std::uint64_t trials = as_count(p, "trials");
    const unsigned threads = static_cast<unsigned>(std::clamp<std::int64_t>(as_int(p, "threads"), 0, 1024));
    AcceptanceEstimate a;
    if (mode == "passive") {
        a = estimate_passive(n, m, eps, trials, seed, threads);
    } else if (mode == "active") {
        a = estimate_active(n, m, e, eps, trials, seed, threads);
    } else {
        auto noise = lambda > 0.0 ? FiniteDepthNoise::depolarizing(lambda) : FiniteDepthNoise::ideal();
        FiniteDepthEstimate f = estimate_finite_depth(n, m, gates, noise, {eps, std::nullopt}, trials, seed, threads);
        a = f.acceptance;
        t.detail["weight_histogram"] = f.weight_histogram;
    }
    t.rows.push_back({mode, std::int64_t{n}, std::int64_t{m}, e, eps, gates, lambda,
                      static_cast<std::int64_t>(trials), a.accept.p_hat(), a.accept.standard_error(),
                      a.accept_and_phi.p_hat(), a.accept_and_phi.standard_error(), a.block_fidelity(),
                      a.block_fidelity_stderr()});
    return t;
}

Table run_repeater(const Json &p) {
    Table t;
    t.columns = columns_for("repeater", p);
    const double link = as_real(p, "link_infidelity"), target = as_real(p, "target");
    const int levels = as_small_int(p, "levels"), n = as_small_int(p, "n"), k = as_small_int(p, "k"),
              n_prime = as_small_int(p, "n_prime");
    RepeaterPlan plan;
    std::int64_t out_n = 0, out_k = 0, out_np = 0;
    if (n > 0) {
        plan = nested_plan(link, levels, n, k, n_prime > 0 ? std::optional<int>(n_prime) : std::nullopt);
        out_n = n;
        out_k = k;
        out_np = n_prime;
    } else {
        HeuristicResult h = heuristic_search(link, target, levels, as_small_int(p, "n_cap"));
        plan = h.plan;
        if (h.first) {
            out_n = h.first->n;
            out_k = h.first->k();
        }
        out_np = h.n_prime.value_or(0);
    }
    t.detail["level_infidelity"] = plan.level_infidelity;
    t.rows.push_back({std::int64_t{plan.levels}, out_n, out_k, out_np, plan.end_to_end_infidelity,
                      plan.end_to_end_overhead, plan.per_segment_overhead,
                      std::int64_t{plan.end_to_end_infidelity <= target ? 1 : 0}});
    return t;
}

Table run_command(const std::string &command, const Json &p, std::optional<std::uint64_t> seed);

Table run_sweep(const Json &p, std::optional<std::uint64_t> seed) {
    const std::string sub = as_text(p, "command");
    const Json &grid = p.at("grid");
    const std::vector<Param> &sub_spec = spec_for(sub);
    std::vector<std::string> axes;
    std::vector<std::vector<Json>> values;
    std::uint64_t points = grid.empty() ? 0 : 1;
    for (auto it = grid.begin(); it != grid.end(); ++it) {
        auto ps = std::find_if(sub_spec.begin(), sub_spec.end(), [&](const Param &q) { return q.name == it.key(); });
        if (ps == sub_spec.end()) {
            throw ConfigError("grid axis '" + it.key() + "' is not a parameter of " + sub);
        }
        if (!it.value().is_array()) {
            throw ConfigError("grid axis '" + it.key() + "' must be a list");
        }
        axes.push_back(it.key());
        values.emplace_back(it.value().begin(), it.value().end());
        points = values.back().empty() ? 0 : points;
        if (points > 0) {
            points *= values.back().size();
        }
        if (points > static_cast<std::uint64_t>(as_int(p, "max_rows"))) {
            throw ConfigError("grid exceeds max_rows");
        }
    }
    Table t;
    t.columns = columns_for("sweep", p);
    for (std::uint64_t index = 0; index < points; ++index) {
        Json given = p.at("base");
        std::uint64_t rest = index;
        std::vector<Json> coords(axes.size());
        for (std::size_t a = axes.size(); a-- > 0;) {
            coords[a] = values[a][rest % values[a].size()];
            rest /= values[a].size();
        }
        for (std::size_t a = 0; a < axes.size(); ++a) {
            given[axes[a]] = coords[a];
        }
        RunConfig cfg = resolve(sub, given, seed ? std::optional<std::uint64_t>(SplitMix64::mix(*seed ^ index)) : seed,
                                "json", "");
        Table part = run_command(sub, cfg.parameters, cfg.seed);
        for (auto &row : part.rows) {
            std::vector<Cell> full;
            for (std::size_t a = 0; a < axes.size(); ++a) {
                if (std::find(part.columns.begin(), part.columns.end(), axes[a]) != part.columns.end()) {
                    continue;
                }
                const Json &c = cfg.parameters.at(axes[a]);
                if (c.is_number_integer()) {
                    full.emplace_back(c.get<std::int64_t>());
                } else if (c.is_number()) {
                    full.emplace_back(c.get<double>());
                } else {
                    full.emplace_back(c.dump());
                }
            }
            full.insert(full.end(), row.begin(), row.end());
            t.rows.push_back(std::move(full));
        }
    }
    return t;
}

Table run_command(const std::string &command, const Json &p, std::optional<std::uint64_t> seed) {
    if (command == "evaluate") {
        return run_evaluate(p);
    }
    if (command == "plan") {
        return run_plan(p, seed);
    }
    if (command == "markov") {
        return run_markov(p);
    }
    if (command == "mc") {
        return run_mc(p, *seed);
    }
    if (command == "repeater") {
        return run_repeater(p);
    }
    if (command == "sweep") {
        return run_sweep(p, seed);
    }
    throw ConfigError("unknown command '" + command + "'");
}

std::string format_cell(const Cell &c) {
    if (const auto *i = std::get_if<std::int64_t>(&c)) {
        return std::to_string(*i);
    }
    if (const auto *d = std::get_if<double>(&c)) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", *d);
        return buf;
    }
    const std::string &s = std::get<std::string>(c);
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string q = "\"";
    for (char ch : s) {
        q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    }
    return q + "\"";
}

Json cell_json(const Cell &c) {
    if (const auto *i = std::get_if<std::int64_t>(&c)) {
        return *i;
    }
    if (const auto *d = std::get_if<double>(&c)) {
        return std::isfinite(*d) ? Json(*d) : Json(nullptr);
    }
    return std::get<std::string>(c);
}

RunConfig read_config_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config file '" + path + "'");
    }
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const Json::exception &e) {
        throw ConfigError("config file is not valid JSON: " + std::string(e.what()));
    }
    if (!doc.is_object()) {
        throw ConfigError("config file must hold an object");
    }
    RunConfig c;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        const std::string &key = it.key();
        if (key == "command") {
            c.command = it.value().get<std::string>();
        } else if (key == "parameters") {
            if (!it.value().is_object()) {
                throw ConfigError("'parameters' must be an object");
            }
            c.parameters = it.value();
        } else if (key == "seed") {
            if (!it.value().is_null()) {
                if (!it.value().is_number_unsigned() && !it.value().is_number_integer()) {
                    throw ConfigError("'seed' must be an integer");
                }
                c.seed = it.value().get<std::uint64_t>();
            }
        } else if (key == "format") {
            c.format = it.value().get<std::string>();
        } else if (key == "output") {
            c.output = it.value().get<std::string>();
        } else if (key != "version") {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
    return c;
}

struct CommandFlags {
    std::map<std::string, std::string> values;
    std::string config_path;
    std::string seed;
    std::string format;
    std::string output;
};

}  // namespace

Json RunConfig::to_json() const {
    Json j;
    j["command"] = command;
    j["parameters"] = parameters;
    j["seed"] = seed ? Json(*seed) : Json(nullptr);
    j["format"] = format;
    return j;
}

const std::vector<std::string> &commands() {
    static const std::vector<std::string> names = {"evaluate", "plan", "markov", "mc", "repeater", "sweep"};
    return names;
}

std::vector<std::string> columns_for(const std::string &command, const Json &parameters) {
    if (command == "evaluate") {
        return {"n",         "m",          "k",
                "error_budget", "epsilon", "p_accept",
                "p_accept_and_phi", "block_fidelity", "block_infidelity",
                "pair_infidelity", "expected_overhead", "exactness"};
    }
    if (command == "plan") {
        return {"epsilon0",          "target",         "delta",  "layer_count",
                "expected_overhead", "guaranteed_overhead", "final_infidelity", "peak_memory_pairs",
                "layers",            "retry_mean",     "retry_stderr"};
    }
    if (command == "markov") {
        return {"gates", "m", "p_accept", "p_accept_and_phi", "block_fidelity", "pair_infidelity", "expected_overhead"};
    }
    if (command == "mc") {
        return {"mode",     "n",        "m",           "error_budget",     "epsilon",
                "gates",    "lambda",   "trials",      "p_accept",         "p_accept_stderr",
                "p_accept_and_phi", "p_accept_and_phi_stderr", "block_fidelity", "block_fidelity_stderr"};
    }
    if (command == "repeater") {
        return {"levels", "n", "k", "n_prime", "end_to_end_infidelity", "end_to_end_overhead", "per_segment_overhead",
                "meets_target"};
    }
    if (command == "sweep") {
        const std::string sub = parameters.at("command").get<std::string>();
        std::vector<std::string> sub_cols = columns_for(sub, Json::object());
        std::vector<std::string> cols;
        for (auto it = parameters.at("grid").begin(); it != parameters.at("grid").end(); ++it) {
            if (std::find(sub_cols.begin(), sub_cols.end(), it.key()) == sub_cols.end()) {
                cols.push_back(it.key());
            }
        }
        cols.insert(cols.end(), sub_cols.begin(), sub_cols.end());
        return cols;
    }
    throw ConfigError("unknown command '" + command + "'");
}

RunConfig resolve(const std::string &command, const Json &given, std::optional<std::uint64_t> seed, std::string format,
                  std::string output) {
    const std::vector<Param> &spec = spec_for(command);
    if (!given.is_object()) {
        throw ConfigError("parameters must be an object");
    }
    for (auto it = given.begin(); it != given.end(); ++it) {
        std::string key = underscored(it.key());
        if (std::none_of(spec.begin(), spec.end(), [&](const Param &p) { return p.name == key; })) {
            throw ConfigError("unknown parameter '" + it.key() + "' for " + command);
        }
    }
    RunConfig c;
    c.command = command;
    for (const Param &p : spec) {
        const Json *v = nullptr;
        for (auto it = given.begin(); it != given.end(); ++it) {
            if (underscored(it.key()) == p.name) {
                v = &it.value();
            }
        }
        if (v && !v->is_null()) {
            c.parameters[p.name] = check_value(p, *v);
        } else if (!p.fallback.is_null() || p.optional) {
            c.parameters[p.name] = p.fallback;
        } else {
            throw ConfigError("missing required parameter '" + p.name + "' for " + command);
        }
    }
    if (format != "json" && format != "csv") {
        throw ConfigError("format must be json or csv");
    }
    if (command == "sweep") {
        // validates the sub-command name early
        spec_for(c.parameters.at("command").get<std::string>());
        if (c.parameters.at("command") == "sweep") {
            throw ConfigError("sweeps do not nest");
        }
    }
    c.seed = seed;
    c.format = std::move(format);
    c.output = std::move(output);
    return c;
}

Table execute(const RunConfig &config) {
    if (needs_seed(config.command, config.parameters) && !config.seed) {
        throw ConfigError("this command needs a seed");
    }
    return run_command(config.command, config.parameters, config.seed);
}

std::string render_csv(const Table &table) {
    std::string out;
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        out += (i ? "," : "") + table.columns[i];
    }
    out += "\n";
    for (const auto &row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out += (i ? "," : "") + format_cell(row[i]);
        }
        out += "\n";
    }
    return out;
}

std::string render_json(const RunConfig &config, const Table &table) {
    Json results;
    results["columns"] = table.columns;
    Json rows = Json::array();
    for (const auto &row : table.rows) {
        Json r = Json::object();
        for (std::size_t i = 0; i < row.size(); ++i) {
            r[table.columns[i]] = cell_json(row[i]);
        }
        rows.push_back(r);
    }
    results["rows"] = rows;
    for (auto it = table.detail.begin(); it != table.detail.end(); ++it) {
        results[it.key()] = it.value();
    }
    Json doc;
    doc["config"] = config.to_json();
    doc["results"] = results;
    doc["version"] = kVersion;
    return doc.dump(2) + "\n";
}

std::string render(const RunConfig &config, const Table &table) {
    return config.format == "csv" ? render_csv(table) : render_json(config, table);
}

namespace {

void build_app(CLI::App &app, std::map<std::string, CommandFlags> &flags) {
    app.require_subcommand(1);
    for (const std::string &name : commands()) {
        CLI::App *sub = app.add_subcommand(name, "run the " + name + " command");
        CommandFlags &f = flags[name];
        for (const Param &p : spec_for(name)) {
            std::string help = p.help;
            if (!p.fallback.is_null()) {
                help += " (default " + p.fallback.dump() + ")";
            }
            sub->add_option("--" + dashed(p.name), f.values[p.name], help);
        }
        sub->add_option("--config", f.config_path, "JSON config document; flags override it");
        sub->add_option("--seed", f.seed, "64-bit seed for randomized work");
        sub->add_option("--format", f.format, "json or csv (default json)");
        sub->add_option("--output", f.output, "output path (default stdout)");
    }
}

RunConfig config_from_flags(const std::string &name, CLI::App &sub, const CommandFlags &f) {
    RunConfig base;
    if (!f.config_path.empty()) {
        base = read_config_file(f.config_path);
        if (!base.command.empty() && base.command != name) {
            throw ConfigError("config file is for '" + base.command + "', not '" + name + "'");
        }
    }
    Json given = base.parameters;
    for (const Param &p : spec_for(name)) {
        if (sub.count("--" + dashed(p.name)) > 0) {
            given[p.name] = parse_flag(p, f.values.at(p.name));
        }
    }
    std::optional<std::uint64_t> seed = base.seed;
    if (sub.count("--seed") > 0) {
        std::int64_t s = parse_int("seed", f.seed);
        seed = static_cast<std::uint64_t>(s);
    }
    std::string format = sub.count("--format") > 0 ? f.format : base.format;
    std::string output = sub.count("--output") > 0 ? f.output : base.output;
    return resolve(name, given, seed, format, output);
}

}  // namespace

RunConfig parse_args(const std::vector<std::string> &args) {
    CLI::App app("distill");
    std::map<std::string, CommandFlags> flags;
    build_app(app, flags);
    std::vector<std::string> rev(args.rbegin(), args.rend());
    if (!rev.empty()) {
        rev.pop_back();
    }
    try {
        app.parse(rev);
    } catch (const CLI::ParseError &e) {
        throw ConfigError(e.what());
    }
    for (const std::string &name : commands()) {
        if (CLI::App *sub = app.get_subcommand(name); sub->parsed()) {
            return config_from_flags(name, *sub, flags[name]);
        }
    }
    throw ConfigError("no command given");
}

int main_entry(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app("Random bilocal Clifford entanglement distillation toolkit");
    std::map<std::string, CommandFlags> flags;
    build_app(app, flags);
    std::vector<std::string> rev(args.rbegin(), args.rend());
    if (!rev.empty()) {
        rev.pop_back();
    }
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError &e) {
        app.exit(e, out, err);
        return kConfigError;
    }
    try {
        RunConfig config;
        for (const std::string &name : commands()) {
            if (CLI::App *sub = app.get_subcommand(name); sub->parsed()) {
                config = config_from_flags(name, *sub, flags[name]);
            }
        }
        if (!config.seed && needs_seed(config.command, config.parameters)) {
            std::random_device rd;
            config.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
            err << "seed: " << *config.seed << "\n";
        }
        Table table = execute(config);
        std::string doc = render(config, table);
        if (config.output.empty()) {
            out << doc;
        } else {
            std::ofstream file(config.output, std::ios::binary);
            if (!file || !(file << doc)) {
                err << "error: cannot write '" << config.output << "'\n";
                return kConfigError;
            }
        }
        return kOk;
    } catch (const ConfigError &e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const DomainError &e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const InfeasibleError &e) {
        err << "infeasible: " << e.what() << "\n";
        return kInfeasible;
    } catch (const std::exception &e) {
        err << "internal error: " << e.what() << "\n";
        return kInternal;
    }
}

}  // namespace distill::cli

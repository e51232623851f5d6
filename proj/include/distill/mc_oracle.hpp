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

#ifndef DISTILL_MC_ORACLE_HPP
#define DISTILL_MC_ORACLE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <thread>
#include <vector>

#include "distill/errors.hpp"
#include "distill/markov.hpp"
#include "distill/pauli_dist.hpp"
#include "distill/pauli_frame.hpp"
#include "distill/rng.hpp"

namespace distill {

struct MCEstimate {
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;

    double p_hat() const { return trials == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(trials); }
    double standard_error() const {
        double p = p_hat();
        return trials == 0 ? 0.0 : std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    }
};

struct AcceptanceEstimate {
    MCEstimate accept;
    MCEstimate accept_and_phi;

    /// accept_and_phi / accept with a delta-method standard error.
    double block_fidelity() const {
        return accept.successes == 0 ? 0.0
                                     : static_cast<double>(accept_and_phi.successes) / static_cast<double>(accept.successes);
    }
    double block_fidelity_stderr() const {
        if (accept.successes == 0) {
            return 0.0;
        }
        double r = block_fidelity();
        return std::sqrt(r * (1.0 - r) / static_cast<double>(accept.successes));
    }
};

namespace detail {

struct TrialCounts {
    std::uint64_t accept = 0;
    std::uint64_t joint = 0;
    std::vector<std::uint64_t> histogram;

    TrialCounts &operator+=(const TrialCounts &o) {
        accept += o.accept;
        joint += o.joint;
        if (histogram.size() < o.histogram.size()) {
            histogram.resize(o.histogram.size(), 0);
        }
        for (std::size_t i = 0; i < o.histogram.size(); ++i) {
            histogram[i] += o.histogram[i];
        }
        return *this;
    }
};

inline unsigned resolve_threads(unsigned threads) {
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    return threads;
}

/// Runs trial(index, rng, acc) for every index with stream substream(seed, index).
/// Integer accumulators make the result independent of the thread count.
template <typename Acc, typename Trial>
Acc run_trials(std::uint64_t trials, std::uint64_t seed, unsigned threads, Acc init, Trial trial) {
    threads = static_cast<unsigned>(std::min<std::uint64_t>(resolve_threads(threads), std::max<std::uint64_t>(1, trials)));
    std::vector<Acc> partial(threads, init);
    auto work = [&](unsigned t) {
        std::uint64_t lo = trials * t / threads, hi = trials * (t + 1) / threads;
        for (std::uint64_t i = lo; i < hi; ++i) {
            SplitMix64 rng = SplitMix64::substream(seed, i);
            trial(i, rng, partial[t]);
        }
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back(work, t);
        }
        for (auto &th : pool) {
            th.join();
        }
    }
    Acc total = init;
    for (const Acc &a : partial) {
        total += a;
    }
    return total;
}

inline char random_nonidentity(SplitMix64 &rng) {
    static constexpr char kXYZ[] = {'X', 'Y', 'Z'};
    return kXYZ[rng.below(3)];
}

inline PauliFrame sample_iid(int n, double eps, SplitMix64 &rng) {
    PauliFrame p = PauliFrame::identity(n);
    for (int i = 0; i < n; ++i) {
        if (rng.bernoulli(eps)) {
            p.set(i, random_nonidentity(rng));
        }
    }
    return p;
}

/// Uniform string of the given weight: uniform support, then uniform letters.
inline PauliFrame sample_weight_class(int n, int w, SplitMix64 &rng) {
    std::vector<int> slots(n);
    for (int i = 0; i < n; ++i) {
        slots[i] = i;
    }
    PauliFrame p = PauliFrame::identity(n);
    for (int i = 0; i < w; ++i) {
        int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
        std::swap(slots[i], slots[j]);
        p.set(slots[i], random_nonidentity(rng));
    }
    return p;
}

inline int sample_index(const std::vector<double> &probs, SplitMix64 &rng) {
    double u = rng.uniform(), acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        if (u < acc) {
            return static_cast<int>(i);
        }
    }
    return static_cast<int>(probs.size()) - 1;
}

struct MeasureOutcome {
    bool accept;
    bool phi;
};

/// Syndrome = x bits of the first m slots; Phi = identity on the last n - m slots.
inline MeasureOutcome measure(const PauliFrame &p, int m) {
    bool accept = (p.x & low_mask(m)) == 0;
    bool phi = ((p.x | p.z) >> m) == 0;
    return {accept, accept && phi};
}

inline void check_trial_params(int n, int m, std::uint64_t trials) {
    require(n >= 2 && n <= kMaxFrameSlots, "Monte Carlo supports 2 <= n <= 64");
    require(m >= 1 && m <= n - 1, "m must lie in [1, n-1]");
    require(trials >= 1, "need at least one trial");
}

inline AcceptanceEstimate to_estimate(const TrialCounts &c, std::uint64_t trials) {
    return {{trials, c.accept}, {trials, c.joint}};
}

}  // namespace detail

/// Passive protocol, one fresh Clifford and one IID error per trial.
inline AcceptanceEstimate estimate_passive(int n, int m, double epsilon, std::uint64_t trials, std::uint64_t seed,
                                           unsigned threads = 0) {
    detail::check_trial_params(n, m, trials);
    detail::require(epsilon >= 0.0 && epsilon <= 1.0, "infidelity must lie in [0, 1]");
    auto c = detail::run_trials(trials, seed, threads, detail::TrialCounts{}, [&](std::uint64_t, SplitMix64 &rng, detail::TrialCounts &acc) {
        SymplecticClifford cl = sample_clifford(n, rng);
        PauliFrame p = detail::sample_iid(n, epsilon, rng);
        auto o = detail::measure(conjugate(cl, p), m);
        acc.accept += o.accept;
        acc.joint += o.phi;
    });
    return detail::to_estimate(c, trials);
}

/// E-active protocol: first-writer-wins lookup over the conjugated top E + 1 errors.
inline AcceptanceEstimate estimate_active(int n, int m, std::int64_t e, double epsilon, std::uint64_t trials,
                                          std::uint64_t seed, unsigned threads = 0) {
    detail::check_trial_params(n, m, trials);
    IIDDepolarizing model(n, epsilon);
    const std::vector<PauliFrame> table = enumerate_top_errors(model, e);
    const std::uint64_t mask = low_mask(m);
    auto c = detail::run_trials(trials, seed, threads, detail::TrialCounts{}, [&](std::uint64_t, SplitMix64 &rng, detail::TrialCounts &acc) {
        SymplecticClifford cl = sample_clifford(n, rng);
        PauliFrame p = conjugate(cl, detail::sample_iid(n, epsilon, rng));
        std::uint64_t s = p.x & mask;
        for (const PauliFrame &t : table) {
            PauliFrame tc = conjugate(cl, t);
            if ((tc.x & mask) == s) {
                acc.accept += 1;
                acc.joint += (((p.x ^ tc.x) | (p.z ^ tc.z)) >> m) == 0;
                return;
            }
        }
    });
    return detail::to_estimate(c, trials);
}

/// Channel acting on the two gate slots before each gate.
struct FiniteDepthNoise {
    enum class Kind { Ideal, Depolarizing };
    Kind kind = Kind::Ideal;
    double lambda = 0.0;

    static FiniteDepthNoise ideal() { return {}; }
    static FiniteDepthNoise depolarizing(double lambda) {
        detail::require(lambda >= 0.0 && lambda <= 1.0, "depolarizing strength must lie in [0, 1]");
        return {Kind::Depolarizing, lambda};
    }
    GateNoise parameters() const { return kind == Kind::Ideal ? GateNoise::ideal() : gate_noise_depolarizing(lambda); }
};

/// Initial errors: IID with `epsilon`, or drawn from `weights` uniformly within each class.
struct InitialErrors {
    double epsilon = 0.0;
    std::optional<WeightDistribution> weights;
};

struct FiniteDepthEstimate {
    AcceptanceEstimate acceptance;
    /// Counts of the error weight after the last gate.
    std::vector<std::uint64_t> weight_histogram;
};

namespace detail {

/// Two-slot sub-Pauli packed as 4 bits: x_i, x_j, z_i, z_j.
inline unsigned get_pair(const PauliFrame &p, int i, int j) {
    return static_cast<unsigned>(((p.x >> i) & 1) | (((p.x >> j) & 1) << 1) | (((p.z >> i) & 1) << 2) |
                                 (((p.z >> j) & 1) << 3));
}

inline void set_pair(PauliFrame &p, int i, int j, unsigned v) {
    std::uint64_t bi = 1ULL << i, bj = 1ULL << j;
    p.x = (p.x & ~(bi | bj)) | ((v & 1) ? bi : 0) | ((v & 2) ? bj : 0);
    p.z = (p.z & ~(bi | bj)) | ((v & 4) ? bi : 0) | ((v & 8) ? bj : 0);
}

}  // namespace detail

/// Gate-level finite-depth protocol: G random two-slot Cliffords on a random slot pair each.
inline FiniteDepthEstimate estimate_finite_depth(int n, int m, std::int64_t gates, const FiniteDepthNoise &noise,
                                                 const InitialErrors &init, std::uint64_t trials, std::uint64_t seed,
                                                 unsigned threads = 0) {
    detail::check_trial_params(n, m, trials);
    detail::require(gates >= 0, "gate count must be non-negative");
    if (init.weights) {
        detail::require(init.weights->n() == n, "initial weight distribution size mismatch");
    } else {
        detail::require(init.epsilon >= 0.0 && init.epsilon <= 1.0, "infidelity must lie in [0, 1]");
    }
    const bool noisy = noise.kind == FiniteDepthNoise::Kind::Depolarizing && noise.lambda > 0.0;
    detail::TrialCounts zero;
    zero.histogram.assign(n + 1, 0);
    auto c = detail::run_trials(trials, seed, threads, zero, [&](std::uint64_t, SplitMix64 &rng, detail::TrialCounts &acc) {
        PauliFrame p = init.weights ? detail::sample_weight_class(n, detail::sample_index(init.weights->probs, rng), rng)
                                    : detail::sample_iid(n, init.epsilon, rng);
        for (std::int64_t g = 0; g < gates; ++g) {
            int i = static_cast<int>(rng.below(n));
            int j = static_cast<int>(rng.below(n - 1));
            j += j >= i;
            unsigned v = detail::get_pair(p, i, j);
            if (noisy) {
                // independent channels on Alice's and Bob's halves
                for (int side = 0; side < 2; ++side) {
                    if (rng.bernoulli(noise.lambda)) {
                        v ^= 1 + static_cast<unsigned>(rng.below(15));
                    }
                }
            }
            if (v != 0) {
                v = 1 + static_cast<unsigned>(rng.below(15));
            }
            detail::set_pair(p, i, j, v);
        }
        acc.histogram[p.weight()] += 1;
        auto o = detail::measure(p, m);
        acc.accept += o.accept;
        acc.joint += o.phi;
    });
    return {detail::to_estimate(c, trials), c.histogram};
}

/// Empirical rate at which C P C^dag and C Q C^dag share the first-m syndrome.
inline MCEstimate estimate_syndrome_match(const PauliFrame &p, const PauliFrame &q, int m, std::uint64_t trials,
                                          std::uint64_t seed, unsigned threads = 0) {
    detail::require(p.n == q.n, "frame sizes differ");
    detail::check_trial_params(p.n, m, trials);
    const std::uint64_t mask = low_mask(m);
    auto c = detail::run_trials(trials, seed, threads, detail::TrialCounts{}, [&](std::uint64_t, SplitMix64 &rng, detail::TrialCounts &acc) {
        SymplecticClifford cl = sample_clifford(p.n, rng);
        acc.accept += ((conjugate(cl, p).x ^ conjugate(cl, q).x) & mask) == 0;
    });
    return {trials, c.accept};
}

}  // namespace distill

#endif

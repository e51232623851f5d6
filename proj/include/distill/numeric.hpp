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

#ifndef DISTILL_NUMERIC_HPP
#define DISTILL_NUMERIC_HPP

#include <cmath>
#include <limits>

namespace distill::numeric {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// log C(n, r); -inf outside 0 <= r <= n.
inline double log_binomial(long n, long r) {
    if (r < 0 || r > n || n < 0) {
        return kNegInf;
    }
    return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(r) + 1.0) -
           std::lgamma(static_cast<double>(n - r) + 1.0);
}

/// log of x^e with the convention 0^0 = 1.
inline double log_pow(double log_x, long e) {
    return e == 0 ? 0.0 : static_cast<double>(e) * log_x;
}

/// 2^-e without overflow for any non-negative e.
inline double pow2_neg(long e) { return std::ldexp(1.0, static_cast<int>(-e)); }

/// 1 - (1 - x)^(1/k), stable for tiny x.
inline double per_pair_infidelity(double block_infidelity, long k) {
    if (block_infidelity >= 1.0) {
        return 1.0;
    }
    if (block_infidelity <= 0.0) {
        return 0.0;
    }
    return -std::expm1(std::log1p(-block_infidelity) / static_cast<double>(k));
}

/// 1 - (1 - eps)^n.
inline double one_minus_pow_complement(double eps, long n) {
    return -std::expm1(static_cast<double>(n) * std::log1p(-eps));
}

}  // namespace distill::numeric

#endif

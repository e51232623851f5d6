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

#ifndef DISTILL_ERRORS_HPP
#define DISTILL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace distill {

/// Raised when an argument lies outside an operation's domain.
struct DomainError : std::invalid_argument {
    explicit DomainError(const std::string &what) : std::invalid_argument(what) {}
};

/// Raised when no parameter choice within the configured caps meets a target.
struct InfeasibleError : std::runtime_error {
    explicit InfeasibleError(const std::string &what) : std::runtime_error(what) {}
};

namespace detail {

inline void require(bool ok, const std::string &what) {
    if (!ok) {
        throw DomainError(what);
    }
}

}  // namespace detail
}  // namespace distill

#endif

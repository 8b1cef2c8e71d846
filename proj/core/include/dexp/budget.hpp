// Copyright 2026 The dexp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DEXP_BUDGET_HPP_
#define DEXP_BUDGET_HPP_

#include <chrono>
#include <cstdint>
#include <limits>

namespace dexp {

/// Work limits for a search. Node limits are applied deterministically
/// before work is split; the wall-clock limit is checked per work chunk and
/// truncates results to a clean prefix.
struct SearchBudget {
  std::uint64_t max_nodes = std::numeric_limits<std::uint64_t>::max();
  double max_seconds = std::numeric_limits<double>::infinity();
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  bool expired() const {
    if (max_seconds == std::numeric_limits<double>::infinity()) return false;
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    return elapsed.count() > max_seconds;
  }
};

}  // namespace dexp

#endif  // DEXP_BUDGET_HPP_

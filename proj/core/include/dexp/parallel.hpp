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

#ifndef DEXP_PARALLEL_HPP_
#define DEXP_PARALLEL_HPP_

// Deterministic parallel map. Every index is evaluated independently and
// results are merged back in index order, so the output never depends on
// the worker count or on scheduling.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <thread>
#include <utility>
#include <vector>

namespace dexp {

template <typename T>
struct PartialMap {
  std::vector<T> results;        // results[0..k) for the longest clean prefix
  std::exception_ptr error;      // exception of the first failing index
  std::size_t failed_index = 0;  // valid when error is set
};

template <typename T, typename Fn>
PartialMap<T> ParallelMapPartial(std::size_t count, int workers, Fn&& fn) {
  std::vector<std::optional<T>> slots(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto drain = [&] {
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads =
      std::min<std::size_t>(count, static_cast<std::size_t>(std::max(workers, 1)));
  if (threads <= 1) {
    drain();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads - 1);
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(drain);
    drain();
    for (auto& th : pool) th.join();
  }
  PartialMap<T> out;
  out.results.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (errors[i]) {
      out.error = errors[i];
      out.failed_index = i;
      break;
    }
    out.results.push_back(std::move(*slots[i]));
  }
  return out;
}

/// Rethrows the exception of the lowest failing index.
template <typename T, typename Fn>
std::vector<T> ParallelMap(std::size_t count, int workers, Fn&& fn) {
  PartialMap<T> partial = ParallelMapPartial<T>(count, workers, std::forward<Fn>(fn));
  if (partial.error) std::rethrow_exception(partial.error);
  return std::move(partial.results);
}

}  // namespace dexp

#endif  // DEXP_PARALLEL_HPP_

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


#ifndef DEXP_IDENTITIES_HPP_
#define DEXP_IDENTITIES_HPP_

// Randomised exact identity suites shared by `selftest` and the acceptance
// harness. Every case draws from its own seeded stream, so reports do not
// depend on the worker count.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dexp/exterior.hpp"
#include "dexp/rational.hpp"

namespace dexp {

/// Λ^j(h) w = Σ_I w_I (h e_{i1}) ∧ ... ∧ (h e_{ij}).
Multivector MatrixAction(const RationalMatrix& h, const Multivector& w);

/// Generator for case `index` of a suite.
std::mt19937_64 CaseStream(std::uint64_t seed, std::uint64_t suite, std::uint64_t index);

struct IdentityReport {
  std::string name;
  int cases = 0;
  int failures = 0;
  std::vector<std::string> failure_details;  // first few only
  double seconds = 0;
  bool passed() const { return cases > 0 && failures == 0; }
};

/// e_0 ∧ c(w)_0 = w - π(w) for random integer multivectors in ambient
/// dimension n + 1, n <= max_n.
IdentityReport ContractionIdentitySuite(int cases, int max_n, std::uint64_t seed, int workers);

/// g u_y w through the eigenspace formula equals Λ^j(g u_y) w through the
/// matrix, for every λ in `lambdas`.
IdentityReport TwoPathSuite(int cases, int max_n, const std::vector<Rational>& lambdas,
                            std::uint64_t seed, int workers);

/// For random rational A of shape up to max_rows × max_cols, the first-order
/// curve from the contraction norm equals the direct ‖Aq + p‖ curve.
IdentityReport FirstOrderEqualitySuite(int cases, int max_rows, int max_cols, long height,
                                       std::uint64_t seed, int workers);

RationalMatrix RandomRationalMatrix(std::mt19937_64& rng, int rows, int cols);

}  // namespace dexp

#endif  // DEXP_IDENTITIES_HPP_

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


#include "dexp/identities.hpp"

#include <gtest/gtest.h>

#include "dexp/flows.hpp"

namespace dexp {
namespace {

Rational Q(long a, long b = 1) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

RationalMatrix Mul(const RationalMatrix& a, const RationalMatrix& b) {
  RationalMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j)
      for (std::size_t k = 0; k < a.cols(); ++k) c(i, j) += a(i, k) * b(k, j);
  return c;
}

TEST(MatrixAction, DeterminantOnTopDegree) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const RationalMatrix h = RandomRationalMatrix(rng, 3, 3);
    const Multivector top = Multivector::Basis(IndexSet::FromIndices({0, 1, 2}, 3), 1);
    EXPECT_EQ(MatrixAction(h, top).coeff(IndexSet::FromIndices({0, 1, 2}, 3)), Determinant(h));
  }
}

TEST(MatrixAction, IsFunctorial) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const RationalMatrix a = RandomRationalMatrix(rng, 4, 4), b = RandomRationalMatrix(rng, 4, 4);
    Multivector w(4, 2);
    w.add_term(IndexSet::FromIndices({0, 2}, 4), Q(2));
    w.add_term(IndexSet::FromIndices({1, 3}, 4), Q(-1, 3));
    EXPECT_EQ(MatrixAction(Mul(a, b), w), MatrixAction(a, MatrixAction(b, w)));
  }
}

TEST(CaseStream, IndependentOfOrder) {
  auto a = CaseStream(1, 2, 3), b = CaseStream(1, 2, 3), c = CaseStream(1, 2, 4);
  EXPECT_EQ(a(), b());
  EXPECT_NE(CaseStream(1, 2, 3)(), c());
}

TEST(Suites, PassAndIgnoreWorkerCount) {
  const std::vector<Rational> lambdas = {Q(2), Q(3, 2)};
  for (int workers : {1, 3}) {
    EXPECT_TRUE(ContractionIdentitySuite(100, 4, 9, workers).passed());
    EXPECT_TRUE(TwoPathSuite(100, 3, lambdas, 9, workers).passed());
  }
  EXPECT_TRUE(FirstOrderEqualitySuite(5, 2, 2, 20, 9, 2).passed());
  EXPECT_FALSE(IdentityReport{}.passed());
}

}  // namespace
}  // namespace dexp

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


#include "dexp/exterior.hpp"

#include <gtest/gtest.h>

#include <random>

namespace dexp {
namespace {

Multivector Vec(std::vector<int> c) {
  std::vector<Rational> r(c.begin(), c.end());
  return Multivector::FromVector(r);
}

IndexSet Set(std::vector<int> idx, int dim) { return IndexSet::FromIndices(idx, dim); }

Multivector RandomVector(std::mt19937_64& rng, int dim) {
  std::uniform_int_distribution<int> d(-6, 6);
  std::vector<int> c(dim);
  for (int& x : c) x = d(rng);
  return Vec(c);
}

// 2x2 minor oracle: (u ∧ v)_{ab} = u_a v_b - u_b v_a.
TEST(Wedge, TwoVectorsMatchMinors) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const Multivector u = RandomVector(rng, 4), v = RandomVector(rng, 4);
    const Multivector w = Wedge(u, v);
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b) {
        const IndexSet ia = Set({a}, 4), ib = Set({b}, 4);
        EXPECT_EQ(w.coeff(Set({a, b}, 4)), u.coeff(ia) * v.coeff(ib) - u.coeff(ib) * v.coeff(ia));
      }
  }
}

TEST(Wedge, ThreeVectorsGiveDeterminant) {
  const Multivector w = Wedge(Wedge(Vec({1, 2, 3}), Vec({0, 1, 4})), Vec({5, 6, 0}));
  // det [[1,2,3],[0,1,4],[5,6,0]] = 1
  EXPECT_EQ(w.coeff(Set({0, 1, 2}, 3)), Rational(1));
}

TEST(Wedge, GradedAnticommutativeAndAssociative) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const Multivector a = RandomVector(rng, 5), b = RandomVector(rng, 5), c = RandomVector(rng, 5);
    EXPECT_EQ(Wedge(a, b), -Wedge(b, a));
    EXPECT_TRUE(Wedge(a, a).is_zero());
    EXPECT_EQ(Wedge(Wedge(a, b), c), Wedge(a, Wedge(b, c)));
    const Multivector ab = Wedge(a, b);
    // Degree 2 and degree 1 commute with sign (-1)^{2·1} = +1.
    EXPECT_EQ(Wedge(ab, c), Wedge(c, ab));
  }
}

TEST(Wedge, OverflowingDegreeIsZero) {
  const Multivector w = Wedge(Wedge(Vec({1, 0}), Vec({0, 1})), Vec({1, 1}));
  EXPECT_TRUE(w.is_zero());
}

TEST(InsertionSign, CountsElementsBelow) {
  EXPECT_EQ(InsertionSign(0, Set({1, 2}, 4)), 1);
  EXPECT_EQ(InsertionSign(2, Set({1, 3}, 4)), -1);
  EXPECT_EQ(InsertionSign(3, Set({0, 1}, 4)), 1);
  EXPECT_EQ(InsertionSign(1, Set({1, 3}, 4)), 0);
}

TEST(IndexSets, CountsAndOrder) {
  const auto all = AllIndexSets(5, 2);
  EXPECT_EQ(all.size(), 10u);
  for (std::size_t i = 1; i < all.size(); ++i) EXPECT_TRUE(all[i - 1] < all[i]);
  EXPECT_EQ(IndexSetsInRange(5, 2, 2, 4).size(), 3u);
}

TEST(Decomposable, WedgesAreAndSymplecticFormIsNot) {
  EXPECT_TRUE(IsDecomposable(Wedge(Vec({1, 2, 0, 1}), Vec({0, 3, 1, 1}))));
  Multivector omega(4, 2);
  omega.add_term(Set({0, 1}, 4), 1);
  omega.add_term(Set({2, 3}, 4), 1);
  EXPECT_FALSE(IsDecomposable(omega));
  // Every 2-vector in dimension 3 is decomposable.
  Multivector any(3, 2);
  any.add_term(Set({0, 1}, 3), 2);
  any.add_term(Set({1, 2}, 3), -5);
  any.add_term(Set({0, 2}, 3), 7);
  EXPECT_TRUE(IsDecomposable(any));
}

TEST(Projections, V0AndBullet) {
  Multivector w(4, 2);
  w.add_term(Set({0, 1}, 4), 3);
  w.add_term(Set({1, 2}, 4), 4);
  w.add_term(Set({2, 3}, 4), 5);
  Multivector v0(4, 2);
  v0.add_term(Set({1, 2}, 4), 4);
  v0.add_term(Set({2, 3}, 4), 5);
  EXPECT_EQ(ProjectV0(w), v0);
  Multivector bullet(4, 2);
  bullet.add_term(Set({2, 3}, 4), 5);
  EXPECT_EQ(ProjectVbullet(w, 1), bullet);
}

TEST(Contract, ComponentsFromInnerProducts) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const Multivector w = Wedge(RandomVector(rng, 4), RandomVector(rng, 4));
    const ContractionImage c = Contract(w);
    ASSERT_EQ(c.components.size(), 4u);
    for (int i = 0; i < 4; ++i)
      for (int jj = 1; jj < 4; ++jj) {
        // <e_i ∧ e_j, w> computed independently.
        const Multivector probe = Wedge(Vec({i == 0, i == 1, i == 2, i == 3}), Vec({jj == 0, jj == 1, jj == 2, jj == 3}));
        EXPECT_EQ(c.components[i].coeff(Set({jj}, 4)), Inner(probe, w));
      }
  }
}

TEST(Norms, SupAndEuclid) {
  Multivector w(3, 1);
  w.add_term(Set({0}, 3), Rational(-3));
  w.add_term(Set({2}, 3), Rational(4));
  EXPECT_EQ(SupNorm(w), 4);
  EXPECT_EQ(EuclidNormSq(w), 25);
}

TEST(TextForm, RoundTrip) {
  const Multivector w = ParseMultivector("0,1:3 1,2:-4/7", 3, 2);
  EXPECT_EQ(w.coeff(Set({0, 1}, 3)), 3);
  EXPECT_EQ(w.coeff(Set({1, 2}, 3)), Rational(-4, 7));
  EXPECT_EQ(ParseMultivector(FormatMultivector(w), 3, 2), w);
  EXPECT_THROW(ParseMultivector("0,0:1", 3, 2), std::invalid_argument);
  EXPECT_THROW(ParseMultivector("0,5:1", 3, 2), std::invalid_argument);
}

}  // namespace
}  // namespace dexp

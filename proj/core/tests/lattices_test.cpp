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


#include "dexp/lattices.hpp"

#include <gtest/gtest.h>

#include <random>

namespace dexp {
namespace {

IntegerMatrix IM(std::vector<std::vector<long>> rows) {
  IntegerMatrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

// Brute force over a coefficient box; enough when the box is large relative
// to the reduced basis, which the test keeps small.
Rational BruteShortest(const RationalMatrix& basis, int box) {
  const std::size_t k = basis.rows();
  std::vector<int> c(k, -box);
  Rational best = -1;
  while (true) {
    bool zero = true;
    for (int x : c) zero = zero && x == 0;
    if (!zero) {
      Rational n = 0;
      for (std::size_t col = 0; col < basis.cols(); ++col) {
        Rational v = 0;
        for (std::size_t i = 0; i < k; ++i) v += c[i] * basis(i, col);
        n += v * v;
      }
      if (best < 0 || n < best) best = n;
    }
    std::size_t i = 0;
    while (i < k && ++c[i] > box) c[i++] = -box;
    if (i == k) break;
  }
  return best;
}

TEST(Hnf, CanonicalFormAndPrimitivity) {
  const SublatticeBasis b = Hnf(IM({{2, 4, 6}, {1, 1, 1}}));
  EXPECT_EQ(b.rows(), IM({{1, 1, 1}, {0, 2, 4}}));
  EXPECT_FALSE(IsPrimitive(b));
  EXPECT_TRUE(IsPrimitive(Hnf(IM({{1, 2, 3}, {0, 1, 1}}))));
  EXPECT_THROW(Hnf(IM({{1, 2}, {2, 4}})), std::invalid_argument);
}

TEST(Hnf, InvariantUnderUnimodularRowOps) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> d(-4, 4);
  for (int trial = 0; trial < 40; ++trial) {
    IntegerMatrix m(2, 4);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 4; ++j) m(i, j) = d(rng);
    SublatticeBasis h;
    try {
      h = Hnf(m);
    } catch (const std::invalid_argument&) {
      continue;
    }
    IntegerMatrix mixed = m;
    const int t = d(rng);
    for (std::size_t j = 0; j < 4; ++j) mixed(0, j) += t * m(1, j);
    for (std::size_t j = 0; j < 4; ++j) std::swap(mixed(0, j), mixed(1, j));
    EXPECT_EQ(Hnf(mixed).rows(), h.rows());
    // Plücker coordinates agree up to sign.
    const Multivector a = Plucker(h), b = PluckerOfRows(m);
    EXPECT_TRUE(a == b || a == -b);
  }
}

TEST(Subgroups, RankOneCountMatchesVectorCount) {
  for (int k = 2; k <= 3; ++k)
    for (int h = 1; h <= 2; ++h) {
      long total = 1;
      for (int i = 0; i < k; ++i) total *= 2 * h + 1;
      EXPECT_EQ(static_cast<long>(ListSubgroups(k, 1, h).size()), (total - 1) / 2) << k << " " << h;
    }
  const auto list = ListSubgroups(2, 1, 1);
  ASSERT_EQ(list.size(), 4u);
  EXPECT_EQ(list[0].rows(), IM({{1, -1}}));
  EXPECT_EQ(list[3].rows(), IM({{0, 1}}));
}

TEST(Subgroups, FullRankCountIsProductOfPowerSums) {
  for (int k = 2; k <= 3; ++k)
    for (int h = 1; h <= 3; ++h) {
      long expect = 1;
      for (int i = 0; i < k; ++i) {
        long sum = 0;
        for (int d = 1; d <= h; ++d) {
          long p = 1;
          for (int e = 0; e < i; ++e) p *= d;
          sum += p;
        }
        expect *= sum;
      }
      EXPECT_EQ(static_cast<long>(ListSubgroups(k, k, h).size()), expect) << k << " " << h;
    }
}

TEST(Subgroups, EachListedOnceAndPrimitiveFilter) {
  const auto all = ListSubgroups(3, 2, 2);
  EXPECT_EQ(all.size(), 186u);
  for (std::size_t i = 1; i < all.size(); ++i) EXPECT_FALSE(all[i - 1].rows() == all[i].rows());
  SubgroupEnumerationOptions opt;
  opt.primitive_only = true;
  std::size_t primitive = 0;
  for (const auto& b : all) primitive += IsPrimitive(b);
  EXPECT_EQ(ListSubgroups(3, 2, 2, opt).size(), primitive);
}

TEST(ShortestVector, MatchesBruteForce) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> d(-9, 9);
  for (int trial = 0; trial < 30; ++trial) {
    const int k = 2 + trial % 2;
    RationalMatrix m(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        m(i, j) = Rational(d(rng), 3);
        m(i, j).canonicalize();
      }
    if (Rank(m) < static_cast<std::size_t>(k)) continue;
    const RationalMatrix reduced = LllReduce(m);
    const ShortVector sv = ShortestVector(RealLattice(m));
    EXPECT_EQ(sv.norm_sq, BruteShortest(reduced, 3));
    EXPECT_EQ(Rank(reduced), static_cast<std::size_t>(k));
    EXPECT_EQ(Abs(Determinant(reduced)), Abs(Determinant(m)));
  }
}

TEST(ShortestVector, FloatingLagrangeAgrees) {
  const RealLattice l(RationalMatrix::FromRows({{Rational(5), Rational(1)}, {Rational(9), Rational(2)}}));
  EXPECT_EQ(ShortestVector(l).norm_sq, 1);
  EXPECT_NEAR(ShortestNormSq2d(5, 1, 9, 2), 1.0, 1e-12);
}

TEST(ShortVectors, AllWithinBoundOnePerSign) {
  const RealLattice z2(RationalMatrix::FromRows({{Rational(1), Rational(0)}, {Rational(0), Rational(1)}}));
  // ±(1,0), ±(0,1), ±(1,±1) have norm² <= 2.
  EXPECT_EQ(ShortVectors(z2, 2).size(), 4u);
  EXPECT_EQ(ShortVectors(z2, 1).size(), 2u);
  EXPECT_TRUE(InKEps(z2, Rational(1)));
  EXPECT_FALSE(InKEps(z2, Rational(11, 10)));
}

TEST(Covolume, GramDeterminant) {
  const RealLattice l(RationalMatrix::FromRows({{Rational(1), Rational(2), Rational(2)}}));
  EXPECT_EQ(CovolumeSq(l), 9);
  const RationalMatrix h = RationalMatrix::FromRows({{Rational(2), Rational(0)}, {Rational(0), Rational(1, 2)}});
  EXPECT_EQ(CovolumeSq(RealLattice::FromTransform(h)), 1);
}

TEST(Minkowski, HoldsOnRandomSubgroups) {
  const RationalMatrix h = RationalMatrix::FromRows(
      {{Rational(8), Rational(8, 3), Rational(-8)}, {Rational(0), Rational(1, 2), Rational(0)}, {Rational(0), Rational(0), Rational(1, 2)}});
  for (const auto& g : ListSubgroups(3, 2, 1)) EXPECT_TRUE(MinkowskiCheck(g, h).holds);
}

}  // namespace
}  // namespace dexp

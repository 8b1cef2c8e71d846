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


#include "dexp/subspaces.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <optional>
#include <random>
#include <set>

namespace dexp {
namespace {

Rational Q(long a, long b = 1) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

RationalMatrix RandomA(std::mt19937_64& rng, int rows, int cols, int den) {
  std::uniform_int_distribution<int> num(-den, den);
  RationalMatrix a(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) a(i, j) = Q(num(rng), den);
  return a;
}

Multivector RandomIntegerWedge(std::mt19937_64& rng, int dim, int degree) {
  std::uniform_int_distribution<int> d(-3, 3);
  Multivector w;
  do {
    w = Multivector::Basis(IndexSet::FromMask(0, dim), 1);
    for (int k = 0; k < degree; ++k) {
      std::vector<Integer> v(dim);
      for (auto& x : v) x = d(rng);
      w = Wedge(w, Multivector::FromVector(v));
    }
  } while (w.is_zero());
  return w;
}

// Number of integers z with |z + x| < 1.
int NearCount(const Rational& x) { return x == Rational(Floor(x)) ? 1 : 2; }

TEST(Contraction, InnerAndMatrixPathsAgree) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 3, s = trial % n;
    const AffineSubspaceParam p(RandomA(rng, s + 1, n - s, 7));
    const int j = 1 + trial % (n - s);
    const Multivector w = RandomIntegerWedge(rng, n + 1, j);
    const RContractResult a = RContract(p, w), b = RContractMatrix(p, w);
    ASSERT_EQ(a.values.size(), b.values.size());
    for (std::size_t i = 0; i < a.values.size(); ++i) EXPECT_EQ(a.values[i].value, b.values[i].value);
    EXPECT_EQ(a.sup, b.sup);
  }
}

TEST(OrderCandidates, FirstOrderCountsMatchFormula) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + trial % 2, s = trial % 2 == 0 ? 0 : 1;
    const AffineSubspaceParam p(RandomA(rng, s + 1, n - s, 5));
    for (long h = 1; h <= 3; ++h) {
      long got = 0;
      ForEachOrderCandidate(p, 1, h, [&](const Multivector&, const Rational& sup) {
        EXPECT_LT(sup, 1);
        ++got;
      });
      // Bullet vectors of height h up to sign, times the integer choices per row.
      long expect = 0;
      const int m = n - s;
      std::vector<long> y(m, -h);
      while (true) {
        long height = 0;
        int first = 0;
        for (long v : y) {
          height = std::max(height, std::labs(v));
          if (first == 0 && v != 0) first = v > 0 ? 1 : -1;
        }
        if (height == h && first > 0) {
          long c = 1;
          for (int i = 0; i <= s; ++i) {
            Rational x = 0;
            for (int k = 0; k < m; ++k) x += p.matrix()(i, k) * y[k];
            c *= NearCount(x);
          }
          expect += c;
        }
        int i = 0;
        while (i < m && ++y[i] > h) y[i++] = -h;
        if (i == m) break;
      }
      EXPECT_EQ(got, expect) << trial << " h=" << h;
    }
  }
}

TEST(OrderCandidates, SecondOrderMatchesBoxSearch) {
  const AffineSubspaceParam p(RationalMatrix::FromRows({{Q(1, 5), Q(-1, 7)}, {Q(1, 9), Q(2, 11)}}));
  const std::vector<IndexSet> sets = AllIndexSets(4, 2);
  for (long h = 1; h <= 2; ++h) {
    std::set<std::string> got;
    ForEachOrderCandidate(p, 2, h, [&](const Multivector& w, const Rational&) {
      EXPECT_TRUE(got.insert(FormatMultivector(w)).second);
    });
    // Every candidate obeys the κ(1 + h) coordinate bound, so a box search finds all.
    const long box = Floor(Kappa(p) * (1 + h)).get_si();
    std::set<std::string> expect;
    std::vector<long> c(5, -box);
    while (true) {
      Multivector w(4, 2);
      int k = 0;
      for (const IndexSet& set : sets) {
        const long v = set.mask() == 0b1100u ? h : c[k++];
        if (v != 0) w.add_term(set, Rational(v));
      }
      if (IsDecomposable(w) && RContract(p, w).sup < 1) expect.insert(FormatMultivector(w));
      int i = 0;
      while (i < 5 && ++c[i] > box) c[i++] = -box;
      if (i == 5) break;
    }
    EXPECT_EQ(got, expect) << "h=" << h;
  }
}

TEST(CoordinateBound, BoundHoldsOnCandidates) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 6; ++trial) {
    const AffineSubspaceParam p(RandomA(rng, 2, 2, 4));
    for (int j = 1; j <= 2; ++j)
      ForEachOrderCandidate(p, j, 2, [&](const Multivector& w, const Rational&) {
        EXPECT_TRUE(CoordinateBound(p, w).holds);
      });
  }
  const AffineSubspaceParam p(RationalMatrix::FromRows({{Q(1, 2), Q(0)}}));
  EXPECT_THROW(CoordinateBound(p, Multivector::FromVector(std::vector<Integer>{5, 0, 0})), std::invalid_argument);
}

TEST(RestrictedNorms, NormComparisons) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const AffineSubspaceParam p(RandomA(rng, 2, 3, 6));  // n = 4, s = 1
    const Multivector w = RandomIntegerWedge(rng, 5, 2 + trial % 2);
    const RestrictedNormsReport r = RestrictedNorms(p, w);
    EXPECT_TRUE(r.extended_ok);
    EXPECT_TRUE(r.restricted_ok);
  }
}

TEST(RowOps, RowOperationsTransformWitnesses) {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> d(-3, 3), kl(1, 4);
  int done = 0;
  for (int trial = 0; done < 100; ++trial) {
    const AffineSubspaceParam p(RandomA(rng, 2, 2, 5));
    IntegerMatrix basis(2, 4);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 4; ++j) basis(i, j) = d(rng);
    RowOp op;
    if (trial % 2) {
      op.kind = RowOp::Kind::kAddRow1;
    } else {
      op.k = kl(rng) * (trial % 4 ? 1 : -1);
      op.l = kl(rng);
    }
    std::optional<RowOpResult> res;
    try {
      res = RowOpTransform(p, basis, op);
    } catch (const std::invalid_argument&) {
      continue;
    }
    ++done;
    const RowOpResult& r = *res;
    EXPECT_TRUE(r.integral);
    EXPECT_TRUE(r.decomposable);
    EXPECT_TRUE(r.norm_ok);
    EXPECT_TRUE(r.bullet_ok);
  }
}

TEST(RowRemoval, ProjectionDoesNotIncrease) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const AffineSubspaceParam p(RandomA(rng, 2, 2, 5));
    const RowRemovalResult r = RowRemovalProject(p, RandomIntegerWedge(rng, 4, 1 + trial % 2));
    EXPECT_TRUE(r.norm_ok);
    EXPECT_TRUE(r.bullet_equal);
    EXPECT_EQ(r.reduced.n(), 2);
  }
}

TEST(ClosedForm, FiveValuesAgree) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const RationalMatrix a = RandomA(rng, 2, 2, 9);
    const Multivector w = RandomIntegerWedge(rng, 4, 2);
    const ClosedFormValues x = Omega2ClosedForm(a, w), y = Omega2FromContraction(AffineSubspaceParam(a), w);
    for (int i = 0; i < 5; ++i) EXPECT_EQ(x.values[i], y.values[i]);
  }
}

TEST(ClosedForm, RecordCurvesAgree) {
  const RationalMatrix a = RationalMatrix::FromRows({{Q(2, 7), Q(3, 11)}, {Q(5, 13), Q(1, 3)}});
  const RecordCurve x = Omega2Records(a, 12, true), y = Omega2Records(a, 12, false);
  ASSERT_EQ(x.records.size(), y.records.size());
  for (std::size_t i = 0; i < x.records.size(); ++i) {
    EXPECT_EQ(x.records[i].height, y.records[i].height);
    EXPECT_EQ(x.records[i].residual, y.records[i].residual);
  }
}

TEST(SubspaceExponent, ProportionalRowsFlagged) {
  const AffineSubspaceParam p(RationalMatrix::FromRows({{Q(1, 3), Q(2, 3)}, {Q(1, 6), Q(1, 3)}}));
  const OrderExponentReport r = SubspaceExponent(p, 6);
  EXPECT_TRUE(r.rows_proportional);
  EXPECT_TRUE(r.equality_expected);
  EXPECT_EQ(r.curves.size(), 2u);
  EXPECT_GE(r.combined, 3);
}

TEST(Hausdorff, Endpoints) {
  EXPECT_EQ(HausdorffDimFormula(3, 1, {Q(3), false}), 4);
  EXPECT_EQ(HausdorffDimFormula(3, 1, ExtendedRational::Infinity()), 2);
  EXPECT_EQ(HausdorffDimFormula(2, 0, {Q(3), false}), Q(7, 4));
  EXPECT_THROW(HausdorffDimFormula(2, 0, {Q(1), false}), std::invalid_argument);
}

TEST(Kappa, Formulae) {
  const AffineSubspaceParam p(RationalMatrix::FromRows({{Q(1, 2), Q(-1, 2)}, {Q(0), Q(1, 4)}}));
  EXPECT_EQ(p.max_row_l1(), 1);
  EXPECT_EQ(Kappa(p), 4);
  EXPECT_EQ(KappaPrime(p), 16);
}

}  // namespace
}  // namespace dexp

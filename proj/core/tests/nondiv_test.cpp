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


#include "dexp/nondiv.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dexp/lattices.hpp"
#include "dexp/text_io.hpp"

namespace dexp {
namespace {

Rational Q(long a, long b = 1) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

// Definition check over every subset: a chain F whose members satisfy
// εη <= ψ <= η, and every element comparable with all of F lying outside F
// has ψ >= η.
bool BruteMarked(const WeightedPoset<long>& p, const std::vector<long>& psi, long eps) {
  const std::size_t n = p.size();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    bool ok = true;
    for (std::size_t a = 0; a < n && ok; ++a) {
      if (!((mask >> a) & 1)) continue;
      ok = eps * p.eta[a] <= psi[a] && psi[a] <= p.eta[a];
      for (std::size_t b = 0; b < n && ok; ++b)
        if (b != a && ((mask >> b) & 1)) ok = p.comparable(a, b);
    }
    for (std::size_t s = 0; s < n && ok; ++s) {
      if ((mask >> s) & 1) continue;
      bool all = true;
      for (std::size_t f = 0; f < n; ++f)
        if ((mask >> f) & 1) all = all && p.comparable(f, s);
      if (all && psi[s] < p.eta[s]) ok = false;
    }
    if (ok) return true;
  }
  return false;
}

TEST(Marking, SearchAgreesWithDefinition) {
  std::mt19937_64 rng(17);
  int marked = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = 1 + trial % 8;
    WeightedPoset<long> p;
    p.eta.resize(n);
    p.less.assign(n, std::vector<bool>(n, false));
    for (std::size_t a = 0; a < n; ++a) {
      p.eta[a] = 4 + rng() % 8;
      for (std::size_t b = a + 1; b < n; ++b) p.less[a][b] = rng() % 3 == 0;
    }
    for (std::size_t m = 0; m < n; ++m)  // transitive closure
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          if (p.less[a][m] && p.less[m][b]) p.less[a][b] = true;
    ASSERT_TRUE(p.IsStrictOrder());
    std::vector<long> psi(n);
    for (auto& x : psi) x = rng() % 16;
    const long eps = rng() % 2;
    const MarkingResult r = IsMarked(p, psi, eps);
    EXPECT_EQ(r.marked, BruteMarked(p, psi, eps)) << trial;
    marked += r.marked;
    if (r.marked) {
      for (std::size_t i = 1; i < r.flag.size(); ++i) EXPECT_TRUE(p.less[r.flag[i - 1]][r.flag[i]]);
    }
  }
  EXPECT_GT(marked, 20);
  EXPECT_LT(marked, 380);
}

TEST(Marking, PosetLength) {
  WeightedPoset<int> p{{1, 1, 1}, {{false, true, true}, {false, false, true}, {false, false, false}}};
  EXPECT_EQ(p.Length(), 3);
  EXPECT_EQ(p.Comparable({1}), (std::vector<std::size_t>{0, 2}));
}

TEST(Marking, InclusionHoldsOnSmallGrids) {
  for (int k = 2; k <= 3; ++k) {
    MarkingConfig c;
    c.k = k;
    c.lambda = 8;
    for (int i = 0; i < 15; ++i)
      for (int j = 0; j < (k == 3 ? 15 : 1); ++j) {
        RationalVector y{Q(i, 15)};
        if (k == 3) y.push_back(Q(j, 15));
        c.grid.push_back(y);
      }
    const MarkingReport r = MarkingInclusionCheck(c);
    EXPECT_TRUE(r.holds);
    EXPECT_TRUE(r.violations.empty());
    EXPECT_EQ(r.points, c.grid.size());
    EXPECT_GT(r.marked, 0u);
  }
}

TEST(Federer, ExactRatios) {
  EXPECT_EQ(FedererCheck(MeasureKind::kLebesgue, 1, 1, 4).sup_ratio, 3);
  EXPECT_EQ(FedererCheck(MeasureKind::kLebesgue, 2, 1, 4).sup_ratio, 9);
  const FedererReport c = FedererCheck(MeasureKind::kCantor, 1, 1, 5);
  EXPECT_EQ(c.sup_ratio, 2);
  EXPECT_FALSE(c.zero_mass_ball);
  EXPECT_EQ(CantorFunction(Q(2, 9)), Q(1, 4));
  EXPECT_NEAR(ToDouble(CantorFunction(Q(1, 4))), 1.0 / 3, 1e-12);
  EXPECT_EQ(CantorFunction(Q(1, 3)), Q(1, 2));
  EXPECT_EQ(CantorFunction(Q(1, 2)), Q(1, 2));
  EXPECT_EQ(CantorFunction(Q(7, 9)), Q(3, 4));
}

TEST(Goodness, LinearFunctionOnInterval) {
  const DiscretizedBall b = DiscretizedBall::Lebesgue({0.0}, 1.0, 4000);
  std::vector<double> v;
  for (const auto& x : b.points) v.push_back(x[0]);
  const std::vector<double> eps = {0.5, 0.1, 0.01};
  // μ{|x| < ε}/μ(B) = ε = ε/‖f‖, so C = 1 is sharp.
  const GoodnessReport ok = GoodnessCheck(b, v, {2, 1}, eps);
  EXPECT_TRUE(ok.holds);
  EXPECT_NEAR(ok.empirical_c, 1.0, 0.01);
  EXPECT_FALSE(GoodnessCheck(b, v, {0.5, 1}, eps).holds);
}

TEST(Goodness, CantorBallMass) {
  const DiscretizedBall b = DiscretizedBall::Cantor(0.0, 1.0, 8);
  EXPECT_NEAR(b.mass, 1.0, 1e-12);
  EXPECT_EQ(b.points.size(), 256u);
}

TEST(Nonplanarity, CurveAndLine) {
  std::vector<RationalVector> parabola, line;
  for (int i = 0; i < 5; ++i) {
    parabola.push_back({Q(i), Q(i * i)});
    line.push_back({Q(i), Q(2 * i + 1)});
  }
  EXPECT_TRUE(NonplanarityCheck(parabola).nonplanar);
  const NonplanarityReport l = NonplanarityCheck(line);
  EXPECT_FALSE(l.nonplanar);
  EXPECT_EQ(l.affine_dim, 1);
  const AffineSubspace s{{Q(0), Q(1)}, RationalMatrix::FromRows({{Q(1), Q(2)}})};
  EXPECT_EQ(NonplanarityCheck(line, s).nonplanar_in_subspace, std::optional<bool>(true));
}

TEST(PolynomialMapText, ParseAndErrors) {
  const PolynomialMap m = ParsePolynomialMap("dim 1\nbox 0 1\ncomponent 1:1\ncomponent 1:2 -1/2:0\n", "m");
  EXPECT_EQ(m.n(), 2);
  EXPECT_EQ(m.EvalExact({Q(3)}), (RationalVector{Q(3), Q(17, 2)}));
  EXPECT_NEAR(m.Eval({0.5})[1], -0.25, 1e-15);
  try {
    ParsePolynomialMap("dim 1\ncomponent 1:1\ncomponent 1/0:1\n", "bad.map");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.source(), "bad.map");
    EXPECT_EQ(e.line(), 3);
  }
  EXPECT_THROW(ParsePolynomialMap("dim 2\ncomponent 1:1\n", "x"), ParseError);
}

TEST(EscapeBound, ShortestNormMatchesExact) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> d(-20, 20);
  for (int trial = 0; trial < 30; ++trial) {
    const int k = 2 + trial % 2;
    std::vector<std::vector<double>> rows(k, std::vector<double>(k));
    RationalMatrix m(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        const int v = d(rng);
        rows[i][j] = v / 4.0;
        m(i, j) = Q(v, 4);
      }
    if (Rank(m) < static_cast<std::size_t>(k)) continue;
    EXPECT_NEAR(ShortestNormSqDouble(rows), ToDouble(ShortestVector(RealLattice(m)).norm_sq), 1e-9);
  }
}

TEST(EscapeBound, IdentityCurveRespectsBound) {
  EscapeBoundConfig c;
  c.map = ParsePolynomialMap("dim 1\ncomponent 1:1\n", "id");
  c.eps_grid = {0.125, 0.0625, 0.03125};
  c.samples = 100000;
  c.seed = 5;
  int count = 0;
  EXPECT_NEAR(EstimateRho(c.map, 3, 3, 64, &count), 1.0, 1e-12);
  EXPECT_GT(count, 0);
  const EscapeBoundReport r = EscapeBoundVerify(c);
  EXPECT_EQ(r.samples, 100000u);
  EXPECT_TRUE(r.bound_holds);
  // λ1 < ε forces |x - p/q| < ε e^{-t}/q-ish; the fraction is small but positive.
  EXPECT_GT(r.rows[0].fraction, 0);
  EXPECT_LT(r.rows[0].fraction, 0.1);
  c.workers = 3;
  const EscapeBoundReport again = EscapeBoundVerify(c);
  for (std::size_t i = 0; i < r.rows.size(); ++i) EXPECT_EQ(r.rows[i].escaped, again.rows[i].escaped);
}

}  // namespace
}  // namespace dexp

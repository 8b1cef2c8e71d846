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


#include "dexp/rational.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace dexp {
namespace {

TEST(ParseRational, AcceptsIntegersFractionsAndDecimals) {
  EXPECT_EQ(ParseRational("7"), Rational(7));
  EXPECT_EQ(ParseRational("-3/6"), Rational(-1, 2));
  EXPECT_EQ(ParseRational("0.25"), Rational(1, 4));
  EXPECT_EQ(ParseRational("-1.125"), Rational(-9, 8));
  // 0.1 must be exactly 1/10, not the nearest double.
  EXPECT_EQ(ParseRational("0.1"), Rational(1, 10));
}

TEST(ParseRational, RejectsMalformedTokens) {
  for (const char* bad : {"1/0", "", "abc", "1/", "/2", "1.2.3", "3/-0", "1e5"}) {
    EXPECT_THROW(ParseRational(bad), std::invalid_argument) << bad;
  }
}

TEST(RationalHelpers, FloorCeilNearest) {
  EXPECT_EQ(Floor(Rational(-7, 2)), -4);
  EXPECT_EQ(Ceil(Rational(-7, 2)), -3);
  EXPECT_EQ(Floor(Rational(7, 2)), 3);
  EXPECT_EQ(NearestInteger(Rational(7, 2)), 3);
  EXPECT_EQ(NearestInteger(Rational(-7, 2)), -3);
  EXPECT_EQ(NearestInteger(Rational(8, 3)), 3);
}

TEST(RationalHelpers, PowHandlesNegativeExponents) {
  EXPECT_EQ(Pow(Rational(2, 3), 3), Rational(8, 27));
  EXPECT_EQ(Pow(Rational(2, 3), -2), Rational(9, 4));
  EXPECT_EQ(Pow(Rational(5), 0), Rational(1));
}

TEST(RationalHelpers, LogAbsMatchesLibmAndHugeValues) {
  EXPECT_NEAR(LogAbs(Rational(-3, 7)), std::log(3.0 / 7.0), 1e-14);
  Integer big;
  mpz_ui_pow_ui(big.get_mpz_t(), 10, 400);
  EXPECT_NEAR(LogAbs(big), 400 * std::log(10.0), 1e-9);
  EXPECT_NEAR(LogAbs(Rational(1) / Rational(big)), -400 * std::log(10.0), 1e-9);
}

TEST(RationalHelpers, FromDoubleIsDyadic) {
  const Rational q = FromDouble(0.1, 20);
  EXPECT_EQ((Integer(1) << 20) % q.get_den(), 0);
  EXPECT_LE(Abs(q - Rational(1, 10)), Rational(1, Integer(1) << 21));
}

TEST(Matrix, DeterminantAgainstCofactorExpansion) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> d(-5, 5);
  for (int trial = 0; trial < 50; ++trial) {
    RationalMatrix m(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) {
        m(i, j) = Rational(d(rng), 1 + (d(rng) + 5) % 4);
        m(i, j).canonicalize();
      }
    const Rational cof = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
                         m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
                         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    EXPECT_EQ(Determinant(m), cof);
    EXPECT_EQ(Rank(m) == 3, cof != 0);
  }
}

TEST(Matrix, RankOfProportionalRows) {
  const RationalMatrix m = RationalMatrix::FromRows({{Rational(1), Rational(2)}, {Rational(1, 2), Rational(1)}});
  EXPECT_EQ(Rank(m), 1u);
  EXPECT_EQ(Determinant(m), 0);
}

}  // namespace
}  // namespace dexp

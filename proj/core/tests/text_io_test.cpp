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


#include "dexp/text_io.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

namespace dexp {
namespace {

Rational Q(long a, long b = 1) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

int LineOf(const std::string& text) {
  try {
    ParseMatrix(text, "m.txt");
  } catch (const ParseError& e) {
    EXPECT_EQ(e.source(), "m.txt");
    EXPECT_NE(std::string(e.what()).find("m.txt:" + std::to_string(e.line())), std::string::npos);
    return e.line();
  }
  return -1;
}

TEST(MatrixText, FractionsDecimalsAndComments) {
  const RationalMatrix m = ParseMatrix("# header\n1/2 0.25\n\n-3 7/21\r\n", "m");
  EXPECT_EQ(m, RationalMatrix::FromRows({{Q(1, 2), Q(1, 4)}, {Q(-3), Q(1, 3)}}));
}

TEST(MatrixText, ErrorsNameTheLine) {
  EXPECT_EQ(LineOf("1 2\n1/0 3\n"), 2);
  EXPECT_EQ(LineOf("1 2\n\n3\n"), 3);
  EXPECT_EQ(LineOf("# only a comment\n"), 0);
  EXPECT_EQ(LineOf("1 abc\n"), 1);
}

TEST(VectorText, SingleLine) {
  EXPECT_EQ(ParseVector("0.618 1\n", "v"), (RationalVector{Q(309, 500), Q(1)}));
  EXPECT_THROW(ParseVector("1\n2\n", "v"), ParseError);
}

TEST(MultivectorText, RoundTrip) {
  Multivector w(4, 2);
  w.add_term(IndexSet::FromIndices({0, 1}, 4), Q(3, 2));
  w.add_term(IndexSet::FromIndices({2, 3}, 4), Q(-5));
  EXPECT_EQ(ParseMultivectorText(FormatMultivector(w), 4, 2, "w"), w);
  EXPECT_THROW(ParseMultivectorText("nonsense", 4, 2, "w"), ParseError);
}

TEST(Files, MissingFileIsLineZero) {
  try {
    ReadMatrixFile("/nonexistent/x.mat");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 0);
  }
  const std::string path = ::testing::TempDir() + "v.vec";
  std::ofstream(path) << "1/3 2/3\n";
  EXPECT_EQ(ReadVectorFile(path), (RationalVector{Q(1, 3), Q(2, 3)}));
  std::remove(path.c_str());
}

}  // namespace
}  // namespace dexp

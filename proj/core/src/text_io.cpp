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

#include <fstream>
#include <sstream>
#include <vector>

namespace dexp {

ParseError::ParseError(std::string source, int line, const std::string& message)
    : std::invalid_argument(source + ":" + std::to_string(line) + ": " + message),
      source_(std::move(source)),
      line_(line) {}

namespace {

struct Line {
  int number;
  std::string text;
};

std::vector<Line> ContentLines(std::string_view text) {
  std::vector<Line> out;
  std::istringstream in{std::string(text)};
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const auto first = raw.find_first_not_of(" \t");
    if (first == std::string::npos || raw[first] == '#') continue;
    out.push_back({number, raw});
  }
  return out;
}

RationalVector ParseRow(const Line& line, const std::string& source) {
  RationalVector row;
  std::istringstream in(line.text);
  std::string token;
  while (in >> token) {
    try {
      row.push_back(ParseRational(token));
    } catch (const std::invalid_argument& e) {
      throw ParseError(source, line.number, "bad number '" + token + "': " + e.what());
    }
  }
  return row;
}

}  // namespace

RationalMatrix ParseMatrix(std::string_view text, const std::string& source) {
  std::vector<Line> lines = ContentLines(text);
  if (lines.empty()) throw ParseError(source, 0, "matrix has no rows");
  std::vector<RationalVector> rows;
  for (const Line& line : lines) {
    rows.push_back(ParseRow(line, source));
    if (rows.back().size() != rows.front().size()) {
      throw ParseError(source, line.number,
                       "row has " + std::to_string(rows.back().size()) + " entries, expected " +
                           std::to_string(rows.front().size()));
    }
  }
  return RationalMatrix::FromRows(rows);
}

RationalVector ParseVector(std::string_view text, const std::string& source) {
  std::vector<Line> lines = ContentLines(text);
  if (lines.empty()) throw ParseError(source, 0, "vector is empty");
  if (lines.size() > 1) throw ParseError(source, lines[1].number, "vector must be a single line");
  return ParseRow(lines.front(), source);
}

Multivector ParseMultivectorText(std::string_view text, int ambient_dim, int degree,
                                 const std::string& source) {
  Multivector w(ambient_dim, degree);
  for (const Line& line : ContentLines(text)) {
    std::istringstream in(line.text);
    std::string token;
    while (in >> token) {
      try {
        w += ParseMultivector(token, ambient_dim, degree);
      } catch (const std::invalid_argument& e) {
        throw ParseError(source, line.number, "bad entry '" + token + "': " + e.what());
      }
    }
  }
  return w;
}

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, 0, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RationalMatrix ReadMatrixFile(const std::string& path) { return ParseMatrix(ReadTextFile(path), path); }

RationalVector ReadVectorFile(const std::string& path) { return ParseVector(ReadTextFile(path), path); }

Multivector ReadMultivectorFile(const std::string& path, int ambient_dim, int degree) {
  return ParseMultivectorText(ReadTextFile(path), ambient_dim, degree, path);
}

}  // namespace dexp

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

#ifndef DEXP_TEXT_IO_HPP_
#define DEXP_TEXT_IO_HPP_

// Plain-text fixtures. Blank lines and lines starting with '#' are ignored.
//   matrix:      one row per line, whitespace-separated rationals
//   vector:      a single line of rationals
//   multivector: `I:coeff` entries

#include <stdexcept>
#include <string>
#include <string_view>

#include "dexp/exterior.hpp"
#include "dexp/rational.hpp"

namespace dexp {

/// what() reads "source:line: message".
class ParseError : public std::invalid_argument {
 public:
  ParseError(std::string source, int line, const std::string& message);
  const std::string& source() const { return source_; }
  int line() const { return line_; }

 private:
  std::string source_;
  int line_;
};

RationalMatrix ParseMatrix(std::string_view text, const std::string& source);
RationalVector ParseVector(std::string_view text, const std::string& source);
Multivector ParseMultivectorText(std::string_view text, int ambient_dim, int degree,
                                 const std::string& source);

/// Reads a whole file; a missing file is a ParseError at line 0.
std::string ReadTextFile(const std::string& path);

RationalMatrix ReadMatrixFile(const std::string& path);
RationalVector ReadVectorFile(const std::string& path);
Multivector ReadMultivectorFile(const std::string& path, int ambient_dim, int degree);

}  // namespace dexp

#endif  // DEXP_TEXT_IO_HPP_

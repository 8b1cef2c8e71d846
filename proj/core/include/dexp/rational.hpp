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

#ifndef DEXP_RATIONAL_HPP_
#define DEXP_RATIONAL_HPP_

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dexp {

using Integer = mpz_class;
using Rational = mpq_class;

using RationalVector = std::vector<Rational>;
using IntegerVector = std::vector<Integer>;

/// Dense row-major matrix with value semantics. Used for exact-rational and
/// integer matrices alike.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
      throw std::invalid_argument("Matrix: data size does not match shape");
    }
  }

  static Matrix FromRows(const std::vector<std::vector<T>>& rows) {
    if (rows.empty()) return Matrix();
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.cols_) {
        throw std::invalid_argument("Matrix: ragged rows");
      }
      for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::vector<T> row(std::size_t i) const {
    return std::vector<T>(data_.begin() + i * cols_,
                          data_.begin() + (i + 1) * cols_);
  }

  Matrix transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using RationalMatrix = Matrix<Rational>;
using IntegerMatrix = Matrix<Integer>;

/// num/den in lowest terms with a positive denominator.
Rational Ratio(const Integer& num, const Integer& den);

/// Parses `p/q`, a signed integer, or a decimal literal such as `-0.25`.
/// Decimals are converted exactly (d digits after the point give 10^d).
/// Throws std::invalid_argument on malformed input or a zero denominator.
Rational ParseRational(std::string_view token);

std::string ToString(const Rational& q);
std::string ToString(const Integer& z);

/// Natural log of |q| for q != 0, accurate for values far outside the range
/// of double.
double LogAbs(const Rational& q);
double LogAbs(const Integer& z);

double ToDouble(const Rational& q);

Integer Floor(const Rational& q);
Integer Ceil(const Rational& q);

/// Integer nearest to q; exact halves go to the one of smaller magnitude.
Integer NearestInteger(const Rational& q);

Rational Abs(const Rational& q);

/// Exact q^e for integer e (negative allowed for q != 0).
Rational Pow(const Rational& q, int e);

Integer Gcd(const Integer& a, const Integer& b);

/// Exact rational nearest to x with denominator 2^bits (round-half-even on
/// the scaled value). Used to ingest floating-point targets with provenance.
Rational FromDouble(double x, int bits = 53);

RationalMatrix ToRational(const IntegerMatrix& m);

/// Determinant by fraction-free Gaussian elimination over Q.
Rational Determinant(RationalMatrix m);

/// Rank over Q.
std::size_t Rank(RationalMatrix m);

}  // namespace dexp

#endif  // DEXP_RATIONAL_HPP_

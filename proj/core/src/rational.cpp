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

#include <cctype>
#include <cmath>
#include <utility>

namespace dexp {
namespace {

bool IsSignedDigits(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

Integer ParseInteger(std::string_view s) {
  if (!IsSignedDigits(s)) {
    throw std::invalid_argument("malformed integer '" + std::string(s) + "'");
  }
  if (s.front() == '+') s.remove_prefix(1);
  return Integer(std::string(s), 10);
}

}  // namespace

Rational Ratio(const Integer& num, const Integer& den) {
  if (den == 0) throw std::domain_error("Ratio: zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational ParseRational(std::string_view token) {
  if (token.empty()) throw std::invalid_argument("empty rational token");
  if (auto slash = token.find('/'); slash != std::string_view::npos) {
    Integer num = ParseInteger(token.substr(0, slash));
    std::string_view den_str = token.substr(slash + 1);
    if (!den_str.empty() && (den_str.front() == '-' || den_str.front() == '+')) {
      throw std::invalid_argument("signed denominator in '" +
                                  std::string(token) + "'");
    }
    Integer den = ParseInteger(den_str);
    if (den == 0) {
      throw std::invalid_argument("zero denominator in '" +
                                  std::string(token) + "'");
    }
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  if (auto dot = token.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = token.substr(0, dot);
    std::string_view frac_part = token.substr(dot + 1);
    bool negative = !int_part.empty() && int_part.front() == '-';
    std::string_view int_digits = int_part;
    if (!int_digits.empty() && (int_digits.front() == '-' || int_digits.front() == '+')) {
      int_digits.remove_prefix(1);
    }
    if ((int_digits.empty() && frac_part.empty()) ||
        (!int_digits.empty() && !IsSignedDigits(int_digits)) ||
        (!frac_part.empty() && !IsSignedDigits(frac_part)) ||
        (!frac_part.empty() && !std::isdigit(static_cast<unsigned char>(frac_part.front())))) {
      throw std::invalid_argument("malformed decimal '" + std::string(token) + "'");
    }
    std::string digits = std::string(int_digits) + std::string(frac_part);
    Integer num(digits.empty() ? std::string("0") : digits, 10);
    Integer den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_part.size());
    Rational q(negative ? Integer(-num) : num, den);
    q.canonicalize();
    return q;
  }
  return Rational(ParseInteger(token));
}

std::string ToString(const Rational& q) { return q.get_str(10); }
std::string ToString(const Integer& z) { return z.get_str(10); }

double LogAbs(const Integer& z) {
  if (z == 0) return -HUGE_VAL;
  long exp = 0;
  double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
  return std::log(std::fabs(mant)) + static_cast<double>(exp) * std::log(2.0);
}

double LogAbs(const Rational& q) {
  if (q == 0) return -HUGE_VAL;
  return LogAbs(Integer(q.get_num())) - LogAbs(Integer(q.get_den()));
}

double ToDouble(const Rational& q) { return q.get_d(); }

Integer Floor(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Integer Ceil(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Integer NearestInteger(const Rational& q) {
  Integer lo = Floor(q);
  Rational frac = q - Rational(lo);
  Rational half(1, 2);
  if (frac < half) return lo;
  if (frac > half) return lo + 1;
  // Tie: pick the candidate of smaller magnitude.
  Integer hi = lo + 1;
  return abs(lo) <= abs(hi) ? lo : hi;
}

Rational Abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

Rational Pow(const Rational& q, int e) {
  if (e < 0) {
    if (q == 0) throw std::domain_error("Pow: zero to a negative power");
    Rational inv = 1 / q;
    return Pow(inv, -e);
  }
  Integer num, den;
  mpz_pow_ui(num.get_mpz_t(), q.get_num_mpz_t(), static_cast<unsigned long>(e));
  mpz_pow_ui(den.get_mpz_t(), q.get_den_mpz_t(), static_cast<unsigned long>(e));
  return Rational(num, den);
}

Integer Gcd(const Integer& a, const Integer& b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

Rational FromDouble(double x, int bits) {
  if (!std::isfinite(x)) throw std::invalid_argument("FromDouble: non-finite");
  Rational exact(x);
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 2, static_cast<unsigned long>(bits));
  Rational scaled = exact * scale;
  Integer lo = Floor(scaled);
  Rational frac = scaled - Rational(lo);
  Integer rounded = lo;
  if (frac > Rational(1, 2) || (frac == Rational(1, 2) && mpz_odd_p(lo.get_mpz_t()))) {
    rounded = lo + 1;
  }
  Rational r(rounded, scale);
  r.canonicalize();
  return r;
}

RationalMatrix ToRational(const IntegerMatrix& m) {
  RationalMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = Rational(m(i, j));
  return r;
}

Rational Determinant(RationalMatrix m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("Determinant: not square");
  const std::size_t n = m.rows();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    while (pivot < n && m(pivot, c) == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(pivot, j), m(c, j));
      det = -det;
    }
    det *= m(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      if (m(r, c) == 0) continue;
      Rational f = m(r, c) / m(c, c);
      for (std::size_t j = c; j < n; ++j) m(r, j) -= f * m(c, j);
    }
  }
  return det;
}

std::size_t Rank(RationalMatrix m) {
  std::size_t rank = 0;
  for (std::size_t c = 0; c < m.cols() && rank < m.rows(); ++c) {
    std::size_t pivot = rank;
    while (pivot < m.rows() && m(pivot, c) == 0) ++pivot;
    if (pivot == m.rows()) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(pivot, j), m(rank, j));
    for (std::size_t r = rank + 1; r < m.rows(); ++r) {
      if (m(r, c) == 0) continue;
      Rational f = m(r, c) / m(rank, c);
      for (std::size_t j = c; j < m.cols(); ++j) m(r, j) -= f * m(rank, j);
    }
    ++rank;
  }
  return rank;
}

}  // namespace dexp

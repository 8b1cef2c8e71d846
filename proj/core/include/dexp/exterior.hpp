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

#ifndef DEXP_EXTERIOR_HPP_
#define DEXP_EXTERIOR_HPP_

// Exact exterior algebra over Q on Λ^j(R^k), k <= 31.
//
// Basis vectors e_I are indexed by strictly increasing index sets I and the
// inner product makes {e_I} orthonormal. For R^{n+1} the coordinate 0 is
// the distinguished direction: V_0 = span(e_1..e_n) and, for an affine
// subspace of dimension s, V_bullet = span(e_{s+1}..e_n).

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "dexp/rational.hpp"

namespace dexp {

class IndexSet {
 public:
  IndexSet() = default;

  /// Throws std::invalid_argument unless `indices` is strictly increasing and
  /// every index is < ambient_dim.
  static IndexSet FromIndices(const std::vector<int>& indices, int ambient_dim);
  static IndexSet FromMask(std::uint32_t mask, int ambient_dim);

  int ambient_dim() const { return ambient_dim_; }
  std::uint32_t mask() const { return mask_; }
  int size() const;
  bool contains(int i) const { return (mask_ >> i) & 1u; }
  bool empty() const { return mask_ == 0; }
  std::vector<int> indices() const;
  int min() const;

  IndexSet with(int i) const { return FromMask(mask_ | (1u << i), ambient_dim_); }
  IndexSet without(int i) const { return FromMask(mask_ & ~(1u << i), ambient_dim_); }

  /// Lexicographic order on the increasing index sequences.
  friend bool operator<(const IndexSet& a, const IndexSet& b);
  friend bool operator==(const IndexSet& a, const IndexSet& b) {
    return a.mask_ == b.mask_ && a.ambient_dim_ == b.ambient_dim_;
  }

 private:
  std::uint32_t mask_ = 0;
  int ambient_dim_ = 0;
};

/// Every j-subset of {0..k-1} in lexicographic order.
std::vector<IndexSet> AllIndexSets(int ambient_dim, int degree);

/// Every j-subset of {lo..hi} (inclusive) in lexicographic order.
std::vector<IndexSet> IndexSetsInRange(int ambient_dim, int degree, int lo, int hi);

/// Sign of e_i ∧ e_I relative to e_{I ∪ {i}}: +1 when an even number of
/// elements of I lie below i, -1 when odd, 0 when i ∈ I.
int InsertionSign(int i, const IndexSet& set);

class Multivector {
 public:
  using Terms = std::map<IndexSet, Rational>;

  Multivector() = default;
  Multivector(int ambient_dim, int degree);

  static Multivector Zero(int ambient_dim, int degree) {
    return Multivector(ambient_dim, degree);
  }
  static Multivector Basis(const IndexSet& set, Rational coeff = 1);
  /// Vector (degree 1) from coordinates.
  static Multivector FromVector(const std::vector<Rational>& coords);
  static Multivector FromVector(const std::vector<Integer>& coords);

  int ambient_dim() const { return ambient_dim_; }
  int degree() const { return degree_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  Rational coeff(const IndexSet& set) const;
  /// Adds `value` to the coefficient of e_I, erasing it if the sum is zero.
  void add_term(const IndexSet& set, const Rational& value);

  Multivector& operator+=(const Multivector& other);
  Multivector& operator-=(const Multivector& other);
  Multivector& operator*=(const Rational& scalar);

  friend Multivector operator+(Multivector a, const Multivector& b) { return a += b; }
  friend Multivector operator-(Multivector a, const Multivector& b) { return a -= b; }
  friend Multivector operator*(Multivector a, const Rational& s) { return a *= s; }
  friend Multivector operator*(const Rational& s, Multivector a) { return a *= s; }
  friend Multivector operator-(Multivector a) { return a *= Rational(-1); }
  friend bool operator==(const Multivector& a, const Multivector& b) {
    return a.ambient_dim_ == b.ambient_dim_ && a.degree_ == b.degree_ &&
           a.terms_ == b.terms_;
  }

  bool is_integral() const;

 private:
  void check_compatible(const Multivector& other, const char* op) const;

  int ambient_dim_ = 0;
  int degree_ = 0;
  Terms terms_;
};

/// Components c(w)_0..c(w)_n, each in Λ^{j-1}(V_0).
struct ContractionImage {
  std::vector<Multivector> components;
};

/// Bilinear, associative, graded-anticommutative. A degree sum above the
/// ambient dimension gives the zero multivector of that degree.
Multivector Wedge(const Multivector& u, const Multivector& v);

Rational Inner(const Multivector& u, const Multivector& v);

/// Orthogonal projection onto Λ^j(V_0): keeps terms whose index set avoids 0.
Multivector ProjectV0(const Multivector& w);

/// Projection onto Λ^j(V_bullet): keeps terms with every index in {s+1..n}.
Multivector ProjectVbullet(const Multivector& w, int s);

/// c(w)_i = Σ_{J ⊂ {1..n}, #J = j-1} <e_i ∧ e_J, w> e_J for i = 0..n.
ContractionImage Contract(const Multivector& w);

Rational SupNorm(const Multivector& w);
Rational EuclidNormSq(const Multivector& w);

/// True for w = 0, degree <= 1, and for every w = v_1 ∧ ... ∧ v_j.
/// Uses the criterion v ∧ w = 0 for all v = ι_α w, α ∈ Λ^{j-1}(V*).
bool IsDecomposable(const Multivector& w);

/// Text form: one `I:coeff` entry per line (or whitespace separated),
/// I a comma-separated index list. The empty index list is written `-`.
std::string FormatMultivector(const Multivector& w);
Multivector ParseMultivector(std::string_view text, int ambient_dim, int degree);

}  // namespace dexp

#endif  // DEXP_EXTERIOR_HPP_

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

#ifndef DEXP_LATTICES_HPP_
#define DEXP_LATTICES_HPP_

// Integer sublattices of Z^k and real lattices with exact rational bases.
// Lattice vectors are the ROWS of a basis matrix throughout.

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "dexp/exterior.hpp"
#include "dexp/rational.hpp"

namespace dexp {

struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Rank-j subgroup of Z^k in row-style Hermite normal form: pivots strictly
/// move right, are positive, and entries above a pivot lie in [0, pivot).
class SublatticeBasis {
 public:
  SublatticeBasis() = default;

  /// Canonicalizes `rows`. Throws std::invalid_argument on dependent rows.
  static SublatticeBasis FromRows(const IntegerMatrix& rows);

  int rank() const { return static_cast<int>(rows_.rows()); }
  int ambient_dim() const { return static_cast<int>(rows_.cols()); }
  const IntegerMatrix& rows() const { return rows_; }
  std::vector<int> pivots() const;

  /// max |entry|, the enumeration height.
  Integer height() const;

  friend bool operator==(const SublatticeBasis& a, const SublatticeBasis& b) {
    return a.rows_ == b.rows_;
  }

 private:
  friend SublatticeBasis Hnf(const IntegerMatrix& rows);
  IntegerMatrix rows_;
};

SublatticeBasis Hnf(const IntegerMatrix& rows);

/// gcd of all j×j minors equals 1.
bool IsPrimitive(const SublatticeBasis& basis);

/// Wedge of the basis rows.
Multivector Plucker(const SublatticeBasis& basis);
Multivector PluckerOfRows(const IntegerMatrix& rows);
Multivector PluckerOfRows(const RationalMatrix& rows);

/// Lattice in R^k spanned by the rows of `basis` (full rank or a subgroup).
class RealLattice {
 public:
  RealLattice() = default;
  explicit RealLattice(RationalMatrix basis);

  /// h Z^k, whose generators are the columns of h.
  static RealLattice FromTransform(const RationalMatrix& h);
  /// h Γ for an integer subgroup Γ.
  static RealLattice Image(const RationalMatrix& h, const SublatticeBasis& gamma);

  const RationalMatrix& basis() const { return basis_; }
  int rank() const { return static_cast<int>(basis_.rows()); }
  int ambient_dim() const { return static_cast<int>(basis_.cols()); }

 private:
  RationalMatrix basis_;
};

RationalMatrix Gram(const RationalMatrix& rows);

/// det of the Gram matrix. Throws std::invalid_argument on dependent rows.
Rational CovolumeSq(const RealLattice& lattice);

struct ShortVector {
  RationalVector vector;   // in ambient coordinates
  IntegerVector coeffs;    // with respect to the input basis rows
  Rational norm_sq;
};

struct EnumerationBudget {
  std::uint64_t max_nodes = 50'000'000;
};

/// Exact LLL (delta = 3/4) over Q. Returns the reduced basis.
RationalMatrix LllReduce(const RationalMatrix& basis);

/// Exact minimizer of the Euclidean norm over nonzero lattice vectors:
/// LLL reduction followed by Fincke-Pohst enumeration with rational
/// Gram-Schmidt data. Throws BudgetExceeded when the node cap is hit.
ShortVector ShortestVector(const RealLattice& lattice,
                           EnumerationBudget budget = {});

/// All nonzero vectors with norm² <= bound², one of each ±pair, as
/// coefficient vectors in the ORIGINAL basis.
std::vector<ShortVector> ShortVectors(const RealLattice& lattice,
                                      const Rational& bound_sq,
                                      EnumerationBudget budget = {});

/// Shortest-vector norm² >= eps².
bool InKEps(const RealLattice& lattice, const Rational& eps,
            EnumerationBudget budget = {});

/// Two-dimensional Lagrange-Gauss reduction in floating point; returns the
/// squared length of a shortest nonzero vector of the lattice spanned by
/// (b1, b2).
double ShortestNormSq2d(double b1x, double b1y, double b2x, double b2y);

/// λ1(gΓ) <= 2^j ||gΓ||^{1/j}; checked exactly as
/// λ1² ^ j <= 4^{j·j} · covolume².
struct MinkowskiReport {
  bool holds = false;
  Rational lambda1_sq;
  Rational covolume_sq;
};
MinkowskiReport MinkowskiCheck(const SublatticeBasis& gamma,
                               const RationalMatrix& transform,
                               EnumerationBudget budget = {});

struct SubgroupEnumerationOptions {
  bool primitive_only = false;
};

/// Calls `visit` for every rank-j subgroup of Z^k whose HNF entries are
/// bounded by H in absolute value, each exactly once, in a deterministic
/// order (pivot pattern lexicographic, then entries row-major ascending).
/// `visit` returns false to stop early.
void EnumerateSubgroups(int k, int j, const Integer& height,
                        const std::function<bool(const SublatticeBasis&)>& visit,
                        SubgroupEnumerationOptions options = {});

std::vector<SublatticeBasis> ListSubgroups(int k, int j, const Integer& height,
                                           SubgroupEnumerationOptions options = {});

}  // namespace dexp

#endif  // DEXP_LATTICES_HPP_

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

#ifndef DEXP_SUBSPACES_HPP_
#define DEXP_SUBSPACES_HPP_

// Affine subspaces x ↦ (x, x̃A) of R^n with x̃ = (1, x), and the exponents
// of A of higher order. Coordinates of R^{n+1} are indexed 0..n; indices
// 0..s carry (p_0, ..., p_s) and s+1..n carry q, so V_• = span(e_{s+1..n}).

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dexp/exponents.hpp"
#include "dexp/exterior.hpp"
#include "dexp/rational.hpp"

namespace dexp {

class AffineSubspaceParam {
 public:
  /// A is (s+1)×(n-s); row 0 is the translation part.
  explicit AffineSubspaceParam(RationalMatrix a);

  int n() const { return n_; }
  int s() const { return s_; }
  const RationalMatrix& matrix() const { return a_; }
  /// a_i = Σ_{k>s} a_{ik} e_k in R^{n+1}.
  const Multivector& row_vector(int i) const { return rows_[i]; }
  /// max_i ‖a_i‖_1
  Rational max_row_l1() const;

 private:
  RationalMatrix a_;
  int n_;
  int s_;
  std::vector<Multivector> rows_;
};

struct ContractionValue {
  int i = 0;      // row 0..s
  IndexSet j;     // J ⊂ {1..n}, #J = degree - 1
  Rational value; // <(e_i + a_i) ∧ e_J, w>
};

struct RContractResult {
  std::vector<ContractionValue> values;  // i ascending, then J in index-set order
  Rational sup;
};

/// Inner-product path.
RContractResult RContract(const AffineSubspaceParam& p, const Multivector& w);
/// R_A applied to the contraction image c(w).
RContractResult RContractMatrix(const AffineSubspaceParam& p, const Multivector& w);

/// π_•(w): terms whose indices all exceed s.
Multivector ProjectBullet(const AffineSubspaceParam& p, const Multivector& w);

/// Calls `visit` for every nonzero integer decomposable w of degree j with
/// ‖π_•(w)‖_∞ = h, sup-contraction < 1, and first nonzero coordinate of
/// π_•(w) positive. Every such w is produced exactly once.
void ForEachOrderCandidate(const AffineSubspaceParam& p, int j, long h,
                           const std::function<void(const Multivector& w, const Rational& sup)>& visit);

/// ω_j records: value v = j(-log‖R_A c(w)‖ / log‖π_•(w)‖) + j - 1.
RecordCurve OmegaJRecords(const AffineSubspaceParam& p, int j, const Integer& height,
                          const SearchOptions& options = {});

struct OrderExponentReport {
  std::map<int, RecordCurve> curves;
  double combined = 0;               // max(n, estimates)
  bool rows_proportional = false;
  bool columns_proportional = false;
  bool equality_expected = false;    // ω(L) = max(ω(A), n) holds when rows or columns are proportional
  std::string annotation;
};

/// Orders 1..n-s unless `orders` is given. Orders above n-s are computed
/// only when `allow_high_orders` is set.
OrderExponentReport SubspaceExponent(const AffineSubspaceParam& p, const Integer& height,
                                     const SearchOptions& options = {},
                                     std::vector<int> orders = {}, bool allow_high_orders = false);

/// κ(A) = (1 + max_i ‖a_i‖_1)^{s+1}
Rational Kappa(const AffineSubspaceParam& p);
/// κ'(A) = (s + 1)(1 + max_i ‖a_i‖_1)^{s+2}
Rational KappaPrime(const AffineSubspaceParam& p);

struct CoordinateBoundReport {
  Rational w_sup;
  Rational bullet_sup;
  Rational kappa;
  bool holds = false;
};
/// ‖w‖ <= κ(A)(1 + ‖π_•(w)‖) for integer w with ‖R_A c(w)‖ < 1. Throws
/// std::invalid_argument when the precondition fails.
CoordinateBoundReport CoordinateBound(const AffineSubspaceParam& p, const Multivector& w);

struct RestrictedNormsReport {
  Rational extended;    // J ⊂ {0..n}
  Rational core;        // J ⊂ {1..n}
  Rational restricted;  // J ⊂ {i+1..n}
  Rational kappa_prime;
  bool extended_ok = false;    // extended <= κ'·core
  bool restricted_ok = false;  // core <= κ'·restricted
};
/// Requires 2 <= deg w <= n - s.
RestrictedNormsReport RestrictedNorms(const AffineSubspaceParam& p, const Multivector& w);

/// Row operation on the top row of A.
struct RowOp {
  enum class Kind { kScale, kAddRow1 } kind = Kind::kScale;
  Integer k = 1;  // scale: a_0 ↦ (k/ℓ) a_0
  Integer l = 1;
};

RationalMatrix ApplyRowOp(const RationalMatrix& a, const RowOp& op);

struct RowOpResult {
  Multivector w_tilde;
  AffineSubspaceParam transformed;
  Rational before;          // ‖R_A c(w)‖
  Rational after;           // ‖R_{A'} c(w̃)‖
  Rational factor;          // max(|k|, |ℓ|) or 2
  bool integral = false;
  bool decomposable = false;
  bool norm_ok = false;     // after <= factor · before
  bool bullet_ok = false;   // π_•(w̃) = ℓπ_•(w) (scale) or π_•(w) (add)
};

/// w̃ = ℓw_0 + k e_0∧w' for a scaling, w̃ = w + e_0∧w_1' for adding row 1,
/// built from an integer basis of the subgroup and cross-checked against the
/// algebraic formula. Throws std::invalid_argument for k or ℓ zero, for the
/// add operation when s = 0, or for dependent basis rows.
RowOpResult RowOpTransform(const AffineSubspaceParam& p, const IntegerMatrix& basis_rows,
                               const RowOp& op);

struct RowRemovalResult {
  AffineSubspaceParam reduced;  // A without row 0, ambient dimension n
  Multivector projected;        // π(w) reindexed to R^n
  Rational before;
  Rational after;
  bool norm_ok = false;         // after <= before
  bool bullet_equal = false;
};
/// Requires s >= 1.
RowRemovalResult RowRemovalProject(const AffineSubspaceParam& p, const Multivector& w);

/// The five values |w02 - a03 q|, |w12 - a13 q|, |w03 + a02 q|,
/// |w13 + a12 q|, |p - det(A) q| for w = p e01 + Σ w_ij e_ij + q e23.
struct ClosedFormValues {
  Rational values[5];
  Rational sup;
};
ClosedFormValues Omega2ClosedForm(const RationalMatrix& a, const Multivector& w);
/// The same five values obtained from the general contraction values with
/// <(e0+a0)∧e1, w> recombined as v + a02·v(1,{2}) + a03·v(1,{3}).
ClosedFormValues Omega2FromContraction(const AffineSubspaceParam& p, const Multivector& w);

/// Order-2 record curves for a 2×2 A over candidates with five-value sup < 1,
/// valued by the closed form or by the general contraction path.
RecordCurve Omega2Records(const RationalMatrix& a, const Integer& height, bool closed_form,
                          const SearchOptions& options = {});

struct UniformApproximant {
  Integer p0;
  IntegerVector q;        // (p', q) ∈ Z^n
  Rational matrix_residual;
  bool norm_bound_ok = false;  // ‖p‖ <= (1 + max‖a_i‖_1)‖q‖
};

struct UniformApproximantsReport {
  std::vector<UniformApproximant> approximants;  // ascending height
  std::vector<RationalVector> sample_points;
  double v_prime = 0;
  // Per approximant: number of sample points violating |y·Q + p0| < ‖Q‖^{-v'}.
  std::vector<int> violations;
  // Violations only on an initial segment and none for the last approximant.
  bool holds = false;
};

/// Builds approximants from witnesses (p, q) of A with exponent >= v and
/// checks |y·Q + p0| < ‖Q‖^{-v_prime} on a grid of `grid` points per axis in
/// [-1, 1]^s. Throws std::invalid_argument when fewer than two witnesses
/// qualify.
UniformApproximantsReport UniformApproximants(const AffineSubspaceParam& p,
                                              const std::vector<Record>& witnesses, double v,
                                              double v_prime, int grid = 11);

/// (s+1)(n-s-1) + (n+1)/(v+1) for v > n, (s+1)(n-s) for v = n.
Rational HausdorffDimFormula(int n, int s, const ExtendedRational& v);

struct GapCandidate {
  RationalMatrix a;
  std::string family;
  RecordCurve order1;
  RecordCurve order2;
  std::optional<double> gap;  // ω̂_2 - max(3, ω̂_1), unset when indeterminate
};

struct GapSearchReport {
  std::vector<GapCandidate> candidates;
  std::optional<std::size_t> best;  // index of the largest gap
  bool budget_exhausted = false;
};

/// Random and det(A) = 0 families of 2×2 rational matrices; reports the
/// largest finite-height gap. Evidence only.
GapSearchReport GapSearch(int trials, const Integer& height, std::uint64_t seed,
                                 const SearchOptions& options = {});

}  // namespace dexp

#endif  // DEXP_SUBSPACES_HPP_

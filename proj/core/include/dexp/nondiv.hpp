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


#ifndef DEXP_NONDIV_HPP_
#define DEXP_NONDIV_HPP_

// Quantitative nondivergence: goodness, Federer and nonplanarity checks,
// marked points in weighted posets, and Monte Carlo measure bounds for
// h(x) = g_t u_f(x).

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dexp/budget.hpp"
#include "dexp/rational.hpp"

namespace dexp {

struct GoodnessParams {
  double c = 1;
  double alpha = 1;
};

struct SpaceParams {
  int besicovitch = 2;  // N
  double federer = 3;   // D
  int dim = 1;
};

enum class MeasureKind { kLebesgue, kCantor };

/// Weighted sample of a ball. Lebesgue balls are sup-norm cubes sampled on a
/// midpoint grid; Cantor balls (d = 1) carry the middle-thirds measure on
/// [0, 1], discretised by its level-m intervals.
struct DiscretizedBall {
  MeasureKind kind = MeasureKind::kLebesgue;
  std::vector<double> center;
  double radius = 0;
  std::vector<std::vector<double>> points;
  std::vector<double> weights;
  double mass = 0;  // μ(B) = Σ weights

  static DiscretizedBall Lebesgue(std::vector<double> center, double radius, int per_axis);
  static DiscretizedBall Cantor(double center, double radius, int depth);
};

struct GoodnessRow {
  double eps = 0;
  double empirical = 0;  // μ{|f| < ε} / μ(B)
  double bound = 0;      // C (ε/‖f‖)^α
  bool ok = false;
};

struct GoodnessReport {
  double sup = 0;  // ‖f‖_{μ,B} on the samples
  bool degenerate = false;
  double slack = 0;
  double empirical_c = 0;  // smallest C the samples allow for the given α
  std::vector<GoodnessRow> rows;
  bool holds = false;
};

/// `values[i]` is f at ball.points[i].
GoodnessReport GoodnessCheck(const DiscretizedBall& ball, const std::vector<double>& values,
                             const GoodnessParams& params, const std::vector<double>& eps_grid);

struct FedererReport {
  Rational sup_ratio;  // exact
  int balls = 0;
  bool zero_mass_ball = false;
};

/// Lebesgue on R^d: every ratio is exactly 3^d. Cantor: centres are the
/// left endpoints of the level-m intervals and r = 3^{-m}, m in [min_level,
/// max_level]; masses come from the exact Cantor function.
FedererReport FedererCheck(MeasureKind kind, int dim, int min_level, int max_level);

/// Cantor function at a rational point, exact when the ternary expansion
/// terminates (it always does for points with denominator 3^m).
Rational CantorFunction(const Rational& x);

struct NonplanarityReport {
  int ambient = 0;
  int affine_dim = -1;  // dimension of the affine span of the samples
  bool nonplanar = false;
  std::optional<bool> nonplanar_in_subspace;
};

/// Exact affine span of sample values. With `subspace` = {point, directions}
/// also decides nonplanarity inside that affine subspace.
struct AffineSubspace {
  RationalVector point;
  RationalMatrix directions;
};
NonplanarityReport NonplanarityCheck(const std::vector<RationalVector>& samples,
                                     const std::optional<AffineSubspace>& subspace = std::nullopt);

/// Finite poset with weights. `less[a][b]` is a strict order relation.
template <typename T>
struct WeightedPoset {
  std::vector<T> eta;
  std::vector<std::vector<bool>> less;

  std::size_t size() const { return eta.size(); }
  bool comparable(std::size_t a, std::size_t b) const { return less[a][b] || less[b][a]; }

  bool IsStrictOrder() const {
    const std::size_t n = size();
    for (std::size_t a = 0; a < n; ++a) {
      if (less[a][a]) return false;
      for (std::size_t b = 0; b < n; ++b) {
        if (less[a][b] && less[b][a]) return false;
        for (std::size_t c = 0; c < n; ++c)
          if (less[a][b] && less[b][c] && !less[a][c]) return false;
      }
    }
    return true;
  }

  /// Cardinality of a longest flag.
  int Length() const {
    const std::size_t n = size();
    std::vector<int> depth(n, 1);
    // n rounds of relaxation suffice on a DAG.
    for (std::size_t round = 0; round < n; ++round)
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          if (less[a][b]) depth[b] = std::max(depth[b], depth[a] + 1);
    int best = 0;
    for (int d : depth) best = std::max(best, d);
    return best;
  }

  /// Elements outside `flag` comparable with every element of it.
  std::vector<std::size_t> Comparable(const std::vector<std::size_t>& flag) const {
    std::vector<std::size_t> out;
    for (std::size_t s = 0; s < size(); ++s) {
      bool ok = true;
      for (std::size_t f : flag) {
        if (f == s || !comparable(f, s)) {
          ok = false;
          break;
        }
      }
      if (ok) out.push_back(s);
    }
    return out;
  }
};

struct MarkingResult {
  bool marked = false;
  std::vector<std::size_t> flag;  // increasing
};

/// Decides whether a point is ε-marked given |ψ_s| at it. Any monotone
/// transform of (ε, η, |ψ|) that preserves products works, so callers with
/// irrational norms pass squares.
template <typename T>
MarkingResult IsMarked(const WeightedPoset<T>& poset, const std::vector<T>& psi, const T& eps) {
  const std::size_t n = poset.size();
  std::vector<std::size_t> candidates;  // may enter the flag (M1)
  std::vector<std::size_t> low;         // |ψ| < η: must stay outside P(F)
  for (std::size_t s = 0; s < n; ++s) {
    if (eps * poset.eta[s] <= psi[s] && psi[s] <= poset.eta[s]) candidates.push_back(s);
    if (psi[s] < poset.eta[s]) low.push_back(s);
  }
  std::vector<std::size_t> flag;
  MarkingResult result;
  auto admissible = [&] {
    for (std::size_t s : low) {
      bool in_flag = false, all = true;
      for (std::size_t f : flag) {
        if (f == s) in_flag = true;
        else if (!poset.comparable(f, s)) all = false;
      }
      if (!in_flag && all) return false;
    }
    return true;
  };
  auto search = [&](auto&& self, std::size_t from) -> bool {
    if (admissible()) {
      result.marked = true;
      result.flag = flag;
      return true;
    }
    for (std::size_t c = from; c < candidates.size(); ++c) {
      const std::size_t s = candidates[c];
      bool chain = true;
      for (std::size_t f : flag) chain = chain && poset.comparable(f, s);
      if (!chain) continue;
      flag.push_back(s);
      if (self(self, c + 1)) return true;
      flag.pop_back();
    }
    return false;
  };
  search(search, 0);
  if (result.marked) {
    std::sort(result.flag.begin(), result.flag.end(),
              [&](std::size_t a, std::size_t b) { return poset.less[a][b]; });
  }
  return result;
}

struct MarkingConfig {
  int k = 2;               // 2 or 3
  Rational lambda = 4;     // g = diag(λ^{k-1}, λ^{-1}, ...)
  std::vector<RationalVector> grid;  // points y in R^{k-1}
  Rational rho = Rational(1, 2);
  Rational eps = Rational(1, 8);
  int workers = 1;
};

struct MarkingPoint {
  std::size_t index = 0;
  bool marked = false;
  bool escaped = false;       // λ1(h(y)Z^k) < ε
  std::size_t poset_size = 0;
  Rational lambda1_sq;        // only when some vector has norm <= ρ
};

struct MarkingReport {
  std::size_t points = 0;
  std::size_t marked = 0;
  std::size_t escaped = 0;
  std::size_t max_poset = 0;
  std::vector<std::size_t> violations;  // marked at ε/ρ yet escaped
  bool holds = false;
};

/// For every grid point builds the finite poset of primitive subgroups Γ with
/// ‖h(y)Γ‖ <= ρ^{rk Γ} (ranks 1 and k-1, the latter through the dual
/// lattice), decides ε/ρ-marking exactly and checks that marked points have
/// no lattice vector shorter than ε.
MarkingReport MarkingInclusionCheck(const MarkingConfig& config);

/// Polynomial map R^d -> R^n. Each component is a list of monomials.
struct Monomial {
  Rational coeff;
  std::vector<int> exponents;  // length d
};

struct PolynomialMap {
  int d = 1;
  std::vector<std::vector<Monomial>> components;
  std::vector<double> lo, hi;  // sampling box, length d

  int n() const { return static_cast<int>(components.size()); }
  std::vector<double> Eval(const std::vector<double>& x) const;
  RationalVector EvalExact(const RationalVector& x) const;
};

/// Text format:
///   dim D
///   box LO HI            (repeated per coordinate or once for all)
///   component c:e1,..,eD c:e1,..,eD ...
/// Throws ParseError naming `source` and the line.
PolynomialMap ParsePolynomialMap(const std::string& text, const std::string& source);

struct EscapeBoundConfig {
  PolynomialMap map;
  double t = 3;
  std::vector<double> eps_grid;
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 0;
  GoodnessParams goodness{2 * 1.4142135623730951, 1};
  SpaceParams space{2, 3, 1};
  int rho_height = 3;      // HNF height for the ρ estimate
  int rho_grid = 64;       // grid points per axis for sup over B
  int workers = 1;
  SearchBudget budget;
};

struct EscapeBoundRow {
  double eps = 0;
  std::uint64_t escaped = 0;
  double fraction = 0;
  double sigma = 0;
  double ci_low = 0, ci_high = 0;  // 95% normal interval
  double bound = 0;                // k C (N D²)^k (ε/ρ)^α
  bool applicable = false;         // ε <= ρ
  bool violation = false;          // fraction - 3σ > bound
};

struct EscapeBoundReport {
  int k = 0;
  double rho = 0;
  int rho_subgroups = 0;
  bool hypothesis_failed = false;  // ρ estimate is 0
  std::uint64_t samples = 0;       // actually drawn
  bool budget_exhausted = false;
  std::vector<EscapeBoundRow> rows;
  std::optional<double> slope;     // log-log fit over rows with escapes
  int slope_points = 0;
  bool bound_holds = false;
  bool slope_ok = false;
};

/// Largest ρ <= 1 with sup_B ‖h(·)Γ‖ >= ρ^{rk Γ} over primitive Γ of HNF
/// height <= rho_height; sup taken over a grid, so this is an upper estimate.
double EstimateRho(const PolynomialMap& map, double t, int height, int grid, int* count = nullptr);

/// λ1² of the lattice spanned by the rows of `basis` (floating point LLL and
/// enumeration; intended for k <= 5).
double ShortestNormSqDouble(std::vector<std::vector<double>> basis);

EscapeBoundReport EscapeBoundVerify(const EscapeBoundConfig& config);

}  // namespace dexp

#endif  // DEXP_NONDIV_HPP_

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

#ifndef DEXP_FLOWS_HPP_
#define DEXP_FLOWS_HPP_

// The lattice u_y Z^{n+1} pushed by the diagonal flow. Time is carried by
// the rational scale λ = e^{t/n}, so g = diag(λ^n, λ^{-1}, ..., λ^{-1}) and
// every action below is exact.

#include <optional>
#include <string>
#include <vector>

#include "dexp/exterior.hpp"
#include "dexp/lattices.hpp"
#include "dexp/rational.hpp"

namespace dexp {

struct ScaleParam {
  Rational lambda;
  int n = 1;
};

/// Rational or +∞.
struct ExtendedRational {
  Rational value;
  bool infinite = false;

  static ExtendedRational Infinity() { return {Rational(0), true}; }
  double ToDouble() const;
  std::string ToString() const;
  friend bool operator==(const ExtendedRational& a, const ExtendedRational& b) {
    return a.infinite == b.infinite && (a.infinite || a.value == b.value);
  }
};

/// [[1, y], [0, I_n]].
RationalMatrix UMatrix(const RationalVector& y);
/// diag(λ^n, λ^{-1}, ..., λ^{-1}).
RationalMatrix GMatrix(const ScaleParam& p);

/// u_y w = π(w) + e_0 ∧ ỹc(w), ỹ = (1, y).
Multivector UEmbed(const RationalVector& y, const Multivector& w);

/// λ^{-j} on Λ^j(V_0), λ^{n+1-j} on e_0 ∧ Λ^{j-1}(V_0).
Multivector GAct(const ScaleParam& p, const Multivector& w);

struct FullActionResult {
  Multivector image;          // g u_y w
  Rational expanding_sup;     // λ^{n+1-j} · sup|ỹc(w)|
  Rational contracting_sup;   // λ^{-j} · sup|π(w)|
};
FullActionResult FullAction(const ScaleParam& p, const RationalVector& y,
                            const SublatticeBasis& gamma);

/// g u_y Z^{n+1} as a real lattice.
RealLattice FlowLattice(const ScaleParam& p, const RationalVector& y);

struct TracePoint {
  Rational lambda;
  Rational delta2;
  IntegerVector coeffs;  // (p, q) of a shortest vector
  // Declared |y - y_exact| <= η: bounds on δ for the exact target.
  std::optional<std::pair<double, double>> delta_interval;
};

struct ExcursionTrace {
  RationalVector y;
  std::vector<TracePoint> points;  // λ strictly increasing
};

struct TraceOptions {
  EnumerationBudget budget;
  int workers = 1;
  std::optional<double> eta;
};

/// λ0, λ0·ratio, ..., count points.
std::vector<Rational> GeometricGrid(const Rational& lambda0, const Rational& ratio, int count);

/// Throws std::invalid_argument for a grid that is not strictly increasing
/// or has λ <= 1. On budget exhaustion the trace holds the clean prefix and
/// `exhausted` is set.
struct TraceResult {
  ExcursionTrace trace;
  bool exhausted = false;
};
TraceResult MakeExcursionTrace(const RationalVector& y, const std::vector<Rational>& grid,
                               const TraceOptions& options = {});

struct GammaRecord {
  Rational lambda;
  double t = 0;
  double c = 0;
};

struct GammaEstimate {
  std::vector<GammaRecord> records;  // strict running-max records
  std::vector<double> running_max;   // one per trace point
  double estimate = 0;
};

/// c = -log δ / t with t = n log λ.
GammaEstimate EstimateGamma(const ExcursionTrace& trace);

/// `lambda t delta2 c_record` rows, with a header line.
std::string FormatTrace(const ExcursionTrace& trace, const GammaEstimate& gamma);

/// c = (v - n)/(n(v + 1)); v = ∞ gives 1/n. Requires v >= n.
Rational CFromV(const ExtendedRational& v, int n);
/// v = n(1 + c)/(1 - nc); c >= 1/n gives ∞. Requires c >= 0.
ExtendedRational VFromC(const Rational& c, int n);
/// ω = n(1 + γ)/(1 - nγ) for 0 <= γ <= 1/n.
ExtendedRational OmegaFromGamma(const Rational& gamma, int n);

double CFromV(double v, int n);
double VFromC(double c, int n);
double OmegaFromGamma(double gamma, int n);

struct PlanePoint {
  double x = 0;
  double z = 0;
};

struct PlaneFlowOptions {
  double a = 1;
  double b = 1;
  double v = 2;
  double z_window = 1e6;     // inspect |z| <= z_window
  int max_multiple = 64;     // k·E for k = 1..max_multiple
  std::vector<double> t_grid;
};

struct PlaneFlowImplication {
  PlanePoint point;  // a [i] witness
  double t = 0;      // log|z| / (b - c)
  bool holds = false;
};

struct PlaneFlowReport {
  double c = 0;
  double v_back = 0;
  std::vector<PlanePoint> first_witnesses;                  // |x| <= |z|^{-v}, |z| > 1
  std::vector<std::pair<double, PlanePoint>> second_witnesses;  // per t in grid
  std::vector<PlaneFlowImplication> implications;
  bool implications_hold = true;
};

/// Windowed evaluation of both sides of the (x, z) ↔ flow equivalence.
/// Throws std::invalid_argument for empty E or v <= a/b.
PlaneFlowReport PlaneFlowCheck(const std::vector<PlanePoint>& generators,
                           const PlaneFlowOptions& options);

}  // namespace dexp

#endif  // DEXP_FLOWS_HPP_

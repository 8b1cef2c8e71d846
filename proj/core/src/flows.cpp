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

#include "dexp/flows.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "dexp/parallel.hpp"

namespace dexp {

double ExtendedRational::ToDouble() const {
  return infinite ? std::numeric_limits<double>::infinity() : dexp::ToDouble(value);
}

std::string ExtendedRational::ToString() const {
  return infinite ? std::string("inf") : dexp::ToString(value);
}

RationalMatrix UMatrix(const RationalVector& y) {
  const std::size_t n = y.size();
  RationalMatrix u(n + 1, n + 1);
  for (std::size_t i = 0; i <= n; ++i) u(i, i) = 1;
  for (std::size_t i = 0; i < n; ++i) u(0, i + 1) = y[i];
  return u;
}

RationalMatrix GMatrix(const ScaleParam& p) {
  if (p.lambda <= 0) throw std::invalid_argument("scale must be positive");
  RationalMatrix g(p.n + 1, p.n + 1);
  g(0, 0) = Pow(p.lambda, p.n);
  for (int i = 1; i <= p.n; ++i) g(i, i) = 1 / p.lambda;
  return g;
}

namespace {

// Σ_i ỹ_i c(w)_i
Multivector ContractWithY(const RationalVector& y, const Multivector& w) {
  ContractionImage c = Contract(w);
  Multivector acc = c.components[0];
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] != 0) acc += c.components[i + 1] * y[i];
  }
  return acc;
}

void CheckDims(const RationalVector& y, const Multivector& w) {
  if (static_cast<int>(y.size()) + 1 != w.ambient_dim()) {
    throw std::invalid_argument("dimension mismatch: y has " + std::to_string(y.size()) +
                                " entries, multivector lives in dimension " +
                                std::to_string(w.ambient_dim()));
  }
}

Multivector WedgeE0(const Multivector& u) {
  Multivector e0 = Multivector::Basis(IndexSet::FromIndices({0}, u.ambient_dim()));
  return Wedge(e0, u);
}

}  // namespace

Multivector UEmbed(const RationalVector& y, const Multivector& w) {
  CheckDims(y, w);
  if (w.degree() == 0) return w;
  return ProjectV0(w) + WedgeE0(ContractWithY(y, w));
}

Multivector GAct(const ScaleParam& p, const Multivector& w) {
  if (w.ambient_dim() != p.n + 1) throw std::invalid_argument("GAct: dimension mismatch");
  const int j = w.degree();
  const Rational contract = Pow(p.lambda, -j);
  const Rational expand = Pow(p.lambda, p.n + 1 - j);
  Multivector out(w.ambient_dim(), j);
  for (const auto& [set, c] : w.terms()) {
    out.add_term(set, c * (set.contains(0) ? expand : contract));
  }
  return out;
}

FullActionResult FullAction(const ScaleParam& p, const RationalVector& y,
                            const SublatticeBasis& gamma) {
  if (static_cast<int>(y.size()) != p.n || gamma.ambient_dim() != p.n + 1) {
    throw std::invalid_argument("FullAction: dimension mismatch");
  }
  const Multivector w = Plucker(gamma);
  const int j = w.degree();
  FullActionResult r;
  r.image = GAct(p, UEmbed(y, w));
  r.expanding_sup = Pow(p.lambda, p.n + 1 - j) * SupNorm(ContractWithY(y, w));
  r.contracting_sup = Pow(p.lambda, -j) * SupNorm(ProjectV0(w));
  return r;
}

RealLattice FlowLattice(const ScaleParam& p, const RationalVector& y) {
  if (static_cast<int>(y.size()) != p.n) throw std::invalid_argument("FlowLattice: dimension mismatch");
  RationalMatrix g = GMatrix(p);
  RationalMatrix u = UMatrix(y);
  RationalMatrix h(p.n + 1, p.n + 1);
  for (int i = 0; i <= p.n; ++i)
    for (int k = 0; k <= p.n; ++k) h(i, k) = g(i, i) * u(i, k);
  return RealLattice::FromTransform(h);
}

std::vector<Rational> GeometricGrid(const Rational& lambda0, const Rational& ratio, int count) {
  if (lambda0 <= 0 || ratio <= 1 || count < 0) {
    throw std::invalid_argument("GeometricGrid: need lambda0 > 0, ratio > 1, count >= 0");
  }
  std::vector<Rational> grid;
  Rational cur = lambda0;
  for (int i = 0; i < count; ++i) {
    grid.push_back(cur);
    cur *= ratio;
  }
  return grid;
}

TraceResult MakeExcursionTrace(const RationalVector& y, const std::vector<Rational>& grid,
                               const TraceOptions& options) {
  if (y.empty()) throw std::invalid_argument("excursion trace: empty y");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] <= 1) throw std::invalid_argument("excursion trace: lambda must exceed 1");
    if (i > 0 && grid[i] <= grid[i - 1]) {
      throw std::invalid_argument("excursion trace: lambda grid not strictly increasing");
    }
  }
  const int n = static_cast<int>(y.size());
  auto point_at = [&](std::size_t i) {
    ScaleParam p{grid[i], n};
    ShortVector sv = ShortestVector(FlowLattice(p, y), options.budget);
    TracePoint tp{grid[i], sv.norm_sq, sv.coeffs, std::nullopt};
    if (options.eta) {
      const double delta = std::sqrt(dexp::ToDouble(sv.norm_sq));
      const double log_lambda = LogAbs(grid[i]);
      double q1 = 0;
      for (std::size_t k = 1; k < sv.coeffs.size(); ++k) q1 += std::fabs(sv.coeffs[k].get_d());
      const double eta = *options.eta;
      const double hi = delta + std::exp(n * log_lambda) * eta * q1;
      const double lo = delta / (1 + std::sqrt(double(n)) * std::exp((n + 1) * log_lambda) * eta);
      tp.delta_interval = std::make_pair(lo, hi);
    }
    return tp;
  };
  PartialMap<TracePoint> partial =
      ParallelMapPartial<TracePoint>(grid.size(), options.workers, point_at);
  TraceResult result;
  result.trace.y = y;
  result.trace.points = std::move(partial.results);
  if (partial.error) {
    try {
      std::rethrow_exception(partial.error);
    } catch (const BudgetExceeded&) {
      result.exhausted = true;
    }
  }
  return result;
}

GammaEstimate EstimateGamma(const ExcursionTrace& trace) {
  const int n = static_cast<int>(trace.y.size());
  GammaEstimate g;
  bool first = true;
  for (const TracePoint& tp : trace.points) {
    const double t = n * LogAbs(tp.lambda);
    const double c = -0.5 * LogAbs(tp.delta2) / t;
    if (first || c > g.estimate) {
      g.records.push_back({tp.lambda, t, c});
      g.estimate = c;
      first = false;
    }
    g.running_max.push_back(g.estimate);
  }
  return g;
}

std::string FormatTrace(const ExcursionTrace& trace, const GammaEstimate& gamma) {
  std::ostringstream os;
  os << "# lambda t delta2 c_record\n";
  const int n = static_cast<int>(trace.y.size());
  char buf[128];
  for (std::size_t i = 0; i < trace.points.size(); ++i) {
    const TracePoint& tp = trace.points[i];
    std::snprintf(buf, sizeof buf, " %.12g %.17g %.12g", n * LogAbs(tp.lambda),
                  dexp::ToDouble(tp.delta2),
                  i < gamma.running_max.size() ? gamma.running_max[i] : 0.0);
    os << ToString(tp.lambda) << buf << '\n';
  }
  return os.str();
}

Rational CFromV(const ExtendedRational& v, int n) {
  if (n < 1) throw std::invalid_argument("CFromV: n must be positive");
  if (v.infinite) return Rational(1, n);
  if (v.value < n) throw std::invalid_argument("CFromV: requires v >= n");
  return (v.value - n) / (n * (v.value + 1));
}

ExtendedRational VFromC(const Rational& c, int n) {
  if (n < 1) throw std::invalid_argument("VFromC: n must be positive");
  if (c < 0) throw std::invalid_argument("VFromC: requires c >= 0");
  if (n * c >= 1) return ExtendedRational::Infinity();
  return {n * (1 + c) / (1 - n * c), false};
}

ExtendedRational OmegaFromGamma(const Rational& gamma, int n) {
  if (n < 1) throw std::invalid_argument("OmegaFromGamma: n must be positive");
  if (gamma < 0 || n * gamma > 1) {
    throw std::invalid_argument("OmegaFromGamma: gamma outside [0, 1/n]");
  }
  return VFromC(gamma, n);
}

double CFromV(double v, int n) {
  if (n < 1 || v < n) throw std::invalid_argument("CFromV: requires v >= n >= 1");
  if (std::isinf(v)) return 1.0 / n;
  return (v - n) / (n * (v + 1));
}

double VFromC(double c, int n) {
  if (n < 1 || c < 0) throw std::invalid_argument("VFromC: requires c >= 0, n >= 1");
  if (n * c >= 1) return std::numeric_limits<double>::infinity();
  return n * (1 + c) / (1 - n * c);
}

double OmegaFromGamma(double gamma, int n) {
  if (n < 1 || gamma < 0 || n * gamma > 1) {
    throw std::invalid_argument("OmegaFromGamma: gamma outside [0, 1/n]");
  }
  return VFromC(gamma, n);
}

PlaneFlowReport PlaneFlowCheck(const std::vector<PlanePoint>& generators,
                           const PlaneFlowOptions& o) {
  if (generators.empty()) throw std::invalid_argument("PlaneFlowCheck: empty point set");
  if (o.a <= 0 || o.b <= 0 || o.v <= o.a / o.b) {
    throw std::invalid_argument("PlaneFlowCheck: need a, b > 0 and v > a/b");
  }
  PlaneFlowReport r;
  r.c = (o.b * o.v - o.a) / (o.v + 1);
  r.v_back = (o.a + r.c) / (o.b - r.c);

  std::vector<PlanePoint> points;
  for (const PlanePoint& g : generators) {
    for (int k = 1; k <= o.max_multiple; ++k) {
      PlanePoint p{k * g.x, k * g.z};
      if (std::fabs(p.z) > o.z_window) break;
      if (p.x == 0 && p.z == 0) break;
      points.push_back(p);
    }
  }
  constexpr double kTol = 1e-9;
  // log of max(e^{at}|x|, e^{-bt}|z|) + ct, -inf for a zero coordinate.
  auto excess = [&](const PlanePoint& p, double t) {
    const double lx = p.x == 0 ? -INFINITY : o.a * t + std::log(std::fabs(p.x));
    const double lz = p.z == 0 ? -INFINITY : -o.b * t + std::log(std::fabs(p.z));
    return std::max(lx, lz) + r.c * t;
  };
  for (const PlanePoint& p : points) {
    const double az = std::fabs(p.z);
    if (az <= 1) continue;
    if (p.x == 0 || std::log(std::fabs(p.x)) <= -o.v * std::log(az) + kTol) {
      r.first_witnesses.push_back(p);
      const double t = std::log(az) / (o.b - r.c);
      const bool holds = excess(p, t) <= kTol;
      r.implications.push_back({p, t, holds});
      r.implications_hold = r.implications_hold && holds;
    }
  }
  for (double t : o.t_grid) {
    for (const PlanePoint& p : points) {
      if (excess(p, t) <= kTol) {
        r.second_witnesses.emplace_back(t, p);
        break;
      }
    }
  }
  return r;
}

}  // namespace dexp

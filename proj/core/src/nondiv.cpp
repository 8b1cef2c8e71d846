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


#include "dexp/nondiv.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "dexp/flows.hpp"
#include "dexp/lattices.hpp"
#include "dexp/parallel.hpp"
#include "dexp/text_io.hpp"

namespace dexp {

DiscretizedBall DiscretizedBall::Lebesgue(std::vector<double> center, double radius, int per_axis) {
  if (center.empty() || radius <= 0 || per_axis < 1) {
    throw std::invalid_argument("DiscretizedBall: need d >= 1, r > 0, per_axis >= 1");
  }
  DiscretizedBall b;
  b.kind = MeasureKind::kLebesgue;
  b.center = std::move(center);
  b.radius = radius;
  const std::size_t d = b.center.size();
  const double step = 2 * radius / per_axis;
  const double cell = std::pow(step, static_cast<double>(d));
  std::vector<int> idx(d, 0);
  while (true) {
    std::vector<double> x(d);
    for (std::size_t i = 0; i < d; ++i) x[i] = b.center[i] - radius + (idx[i] + 0.5) * step;
    b.points.push_back(std::move(x));
    b.weights.push_back(cell);
    std::size_t i = 0;
    while (i < d && ++idx[i] == per_axis) idx[i++] = 0;
    if (i == d) break;
  }
  b.mass = std::pow(2 * radius, static_cast<double>(d));
  return b;
}

DiscretizedBall DiscretizedBall::Cantor(double center, double radius, int depth) {
  if (radius <= 0 || depth < 0 || depth > 24) throw std::invalid_argument("DiscretizedBall: bad Cantor ball");
  DiscretizedBall b;
  b.kind = MeasureKind::kCantor;
  b.center = {center};
  b.radius = radius;
  const double piece = std::pow(3.0, -depth);
  const double w = std::pow(2.0, -depth);
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << depth); ++code) {
    double left = 0, scale = 1;
    for (int level = depth - 1; level >= 0; --level) {
      scale /= 3;
      if ((code >> level) & 1u) left += 2 * scale;
    }
    const double mid = left + piece / 2;
    if (std::fabs(mid - center) <= radius) {
      b.points.push_back({mid});
      b.weights.push_back(w);
      b.mass += w;
    }
  }
  return b;
}

GoodnessReport GoodnessCheck(const DiscretizedBall& ball, const std::vector<double>& values,
                             const GoodnessParams& params, const std::vector<double>& eps_grid) {
  if (values.size() != ball.points.size()) throw std::invalid_argument("GoodnessCheck: size mismatch");
  GoodnessReport r;
  double max_w = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    r.sup = std::max(r.sup, std::fabs(values[i]));
    max_w = std::max(max_w, ball.weights[i]);
  }
  if (ball.mass <= 0) throw std::invalid_argument("GoodnessCheck: empty ball");
  r.degenerate = r.sup == 0;
  // A sublevel set of a continuous function meets the grid up to one
  // boundary cell on each side per component; two cells cover intervals.
  r.slack = 2 * max_w / ball.mass;
  r.holds = !r.degenerate;
  for (double eps : eps_grid) {
    GoodnessRow row;
    row.eps = eps;
    double m = 0;
    for (std::size_t i = 0; i < values.size(); ++i)
      if (std::fabs(values[i]) < eps) m += ball.weights[i];
    row.empirical = m / ball.mass;
    if (!r.degenerate) {
      const double scaled = std::pow(eps / r.sup, params.alpha);
      row.bound = params.c * scaled;
      row.ok = row.empirical <= row.bound + r.slack;
      r.empirical_c = std::max(r.empirical_c, row.empirical / scaled);
    }
    r.holds = r.holds && row.ok;
    r.rows.push_back(row);
  }
  return r;
}

Rational CantorFunction(const Rational& x) {
  if (x <= 0) return 0;
  if (x >= 1) return 1;
  Rational y = x, out = 0, half = Rational(1, 2);
  for (int guard = 0; guard < 4096 && y > 0; ++guard) {
    y *= 3;
    const Integer digit = Floor(y);
    y -= Rational(digit);
    if (digit == 2) {
      out += half;
    } else if (digit == 1) {
      return out + half;
    }
    half /= 2;
  }
  return out;
}

FedererReport FedererCheck(MeasureKind kind, int dim, int min_level, int max_level) {
  if (dim < 1 || min_level < 1 || max_level < min_level || max_level > 16) {
    throw std::invalid_argument("FedererCheck: bad scale range");
  }
  FedererReport r;
  if (kind == MeasureKind::kLebesgue) {
    for (int m = min_level; m <= max_level; ++m) {
      // (2·3r)^d / (2r)^d for every centre; evaluated exactly per scale.
      const Rational r3 = Pow(Rational(1, 3), m);
      const Rational big = Pow(Rational(6 * r3), dim), small = Pow(Rational(2 * r3), dim);
      r.sup_ratio = std::max<Rational>(r.sup_ratio, big / small);
      ++r.balls;
    }
    return r;
  }
  if (dim != 1) throw std::invalid_argument("FedererCheck: Cantor measure is one-dimensional");
  for (int m = min_level; m <= max_level; ++m) {
    const Rational radius = Pow(Rational(1, 3), m);
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << m); ++code) {
      Rational left = 0, scale = 1;
      for (int level = m - 1; level >= 0; --level) {
        scale /= 3;
        if ((code >> level) & 1u) left += 2 * scale;
      }
      for (const Rational& x : {left, Rational(left + radius)}) {
        const Rational small = CantorFunction(x + radius) - CantorFunction(x - radius);
        const Rational big = CantorFunction(x + 3 * radius) - CantorFunction(x - 3 * radius);
        ++r.balls;
        if (small == 0) {
          r.zero_mass_ball = true;
          continue;
        }
        r.sup_ratio = std::max<Rational>(r.sup_ratio, big / small);
      }
    }
  }
  return r;
}

NonplanarityReport NonplanarityCheck(const std::vector<RationalVector>& samples,
                                     const std::optional<AffineSubspace>& subspace) {
  if (samples.empty()) throw std::invalid_argument("NonplanarityCheck: no samples");
  NonplanarityReport r;
  r.ambient = static_cast<int>(samples.front().size());
  if (samples.size() < static_cast<std::size_t>(r.ambient) + 1 && !subspace) {
    throw std::invalid_argument("NonplanarityCheck: need at least n + 1 samples");
  }
  RationalMatrix diffs(samples.size() - 1, r.ambient);
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (static_cast<int>(samples[i].size()) != r.ambient) throw std::invalid_argument("NonplanarityCheck: ragged samples");
    for (int c = 0; c < r.ambient; ++c) diffs(i - 1, c) = samples[i][c] - samples[0][c];
  }
  r.affine_dim = samples.size() == 1 ? 0 : static_cast<int>(Rank(diffs));
  r.nonplanar = r.affine_dim == r.ambient;
  if (subspace) {
    const RationalMatrix& dir = subspace->directions;
    const int l = static_cast<int>(Rank(dir));
    // Samples lie in L iff adding their offsets from L's point keeps the rank.
    RationalMatrix all(dir.rows() + samples.size(), r.ambient);
    for (std::size_t i = 0; i < dir.rows(); ++i)
      for (int c = 0; c < r.ambient; ++c) all(i, c) = dir(i, c);
    for (std::size_t i = 0; i < samples.size(); ++i)
      for (int c = 0; c < r.ambient; ++c) all(dir.rows() + i, c) = samples[i][c] - subspace->point[c];
    const bool inside = static_cast<int>(Rank(all)) == l;
    r.nonplanar_in_subspace = inside && r.affine_dim == l;
  }
  return r;
}

namespace {

bool PrimitiveCoeffs(const IntegerVector& v) {
  Integer g = 0;
  for (const Integer& x : v) g = Gcd(g, x);
  return g == 1;
}

Integer DotInt(const IntegerVector& a, const IntegerVector& b) {
  Integer s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Poset element: a rank-1 subgroup Zv, a rank-(k-1) subgroup w^⊥ ∩ Z^k, or Z^k.
struct Element {
  int rank = 0;
  IntegerVector coeffs;
};

MarkingPoint EvaluateMarking(const MarkingConfig& cfg, std::size_t index) {
  const int k = cfg.k;
  const ScaleParam sp{cfg.lambda, k - 1};
  const RationalVector& y = cfg.grid[index];
  const RationalMatrix g = GMatrix(sp), u = UMatrix(y);
  RationalMatrix h(k, k), dual(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) h(i, j) = g(i, i) * u(i, j);
  // h^{-T} = g^{-1} u_{-y}^T.
  RationalVector neg(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) neg[i] = -y[i];
  const RationalMatrix un = UMatrix(neg);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) dual(i, j) = un(j, i) / g(i, i);

  std::vector<Element> elems;
  std::vector<Rational> psi, eta;
  const Rational rho_sq = cfg.rho * cfg.rho;
  MarkingPoint pt;
  pt.index = index;
  bool any_short = false;
  for (const ShortVector& sv : ShortVectors(RealLattice::FromTransform(h), rho_sq)) {
    if (!PrimitiveCoeffs(sv.coeffs)) continue;
    elems.push_back({1, sv.coeffs});
    psi.push_back(sv.norm_sq);
    eta.push_back(rho_sq);
    if (!any_short || sv.norm_sq < pt.lambda1_sq) pt.lambda1_sq = sv.norm_sq;
    any_short = true;
  }
  if (k == 3) {
    const Rational bound = Pow(rho_sq, k - 1);
    for (const ShortVector& sv : ShortVectors(RealLattice::FromTransform(dual), bound)) {
      if (!PrimitiveCoeffs(sv.coeffs)) continue;
      elems.push_back({k - 1, sv.coeffs});
      psi.push_back(sv.norm_sq);
      eta.push_back(bound);
    }
  }
  const Rational top = Pow(rho_sq, k);
  if (top >= 1) {
    elems.push_back({k, {}});
    psi.push_back(1);
    eta.push_back(top);
  }
  WeightedPoset<Rational> poset;
  poset.eta = eta;
  poset.less.assign(elems.size(), std::vector<bool>(elems.size(), false));
  for (std::size_t a = 0; a < elems.size(); ++a)
    for (std::size_t b = 0; b < elems.size(); ++b) {
      const Element& x = elems[a];
      const Element& z = elems[b];
      if (x.rank >= z.rank) continue;
      if (z.rank == k) poset.less[a][b] = true;
      else if (x.rank == 1 && z.rank == k - 1) poset.less[a][b] = DotInt(x.coeffs, z.coeffs) == 0;
    }
  const Rational ratio = cfg.eps / cfg.rho;
  pt.marked = IsMarked(poset, psi, Rational(ratio * ratio)).marked;
  pt.escaped = any_short && pt.lambda1_sq < cfg.eps * cfg.eps;
  pt.poset_size = elems.size();
  return pt;
}

}  // namespace

MarkingReport MarkingInclusionCheck(const MarkingConfig& config) {
  if (config.k != 2 && config.k != 3) throw std::invalid_argument("MarkingInclusionCheck: k must be 2 or 3");
  if (config.eps <= 0 || config.rho < config.eps) throw std::invalid_argument("MarkingInclusionCheck: need 0 < eps <= rho");
  if (config.lambda <= 0) throw std::invalid_argument("MarkingInclusionCheck: lambda must be positive");
  for (const RationalVector& y : config.grid) {
    if (static_cast<int>(y.size()) != config.k - 1) throw std::invalid_argument("MarkingInclusionCheck: grid point dimension");
  }
  const std::vector<MarkingPoint> pts = ParallelMap<MarkingPoint>(
      config.grid.size(), config.workers, [&](std::size_t i) { return EvaluateMarking(config, i); });
  MarkingReport r;
  r.points = pts.size();
  for (const MarkingPoint& p : pts) {
    r.marked += p.marked;
    r.escaped += p.escaped;
    r.max_poset = std::max(r.max_poset, p.poset_size);
    if (p.marked && p.escaped) r.violations.push_back(p.index);
  }
  r.holds = r.violations.empty();
  return r;
}

std::vector<double> PolynomialMap::Eval(const std::vector<double>& x) const {
  std::vector<double> out;
  out.reserve(components.size());
  for (const auto& comp : components) {
    double acc = 0;
    for (const Monomial& m : comp) {
      double term = m.coeff.get_d();
      for (int i = 0; i < d; ++i) term *= std::pow(x[i], m.exponents[i]);
      acc += term;
    }
    out.push_back(acc);
  }
  return out;
}

RationalVector PolynomialMap::EvalExact(const RationalVector& x) const {
  RationalVector out;
  for (const auto& comp : components) {
    Rational acc = 0;
    for (const Monomial& m : comp) {
      Rational term = m.coeff;
      for (int i = 0; i < d; ++i) term *= Pow(x[i], m.exponents[i]);
      acc += term;
    }
    out.push_back(acc);
  }
  return out;
}

PolynomialMap ParsePolynomialMap(const std::string& text, const std::string& source) {
  PolynomialMap map;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool have_dim = false;
  std::vector<std::pair<double, double>> boxes;
  auto fail = [&](const std::string& msg) { throw ParseError(source, lineno, msg); };
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key) || key[0] == '#') continue;
    if (key == "dim") {
      if (have_dim || !(ls >> map.d) || map.d < 1 || map.d > 8) fail("expected 'dim D' with 1 <= D <= 8, once");
      have_dim = true;
    } else if (key == "box") {
      std::string lo, hi;
      if (!(ls >> lo >> hi)) fail("expected 'box LO HI'");
      try {
        boxes.emplace_back(ToDouble(ParseRational(lo)), ToDouble(ParseRational(hi)));
      } catch (const std::invalid_argument& e) {
        fail(e.what());
      }
      if (boxes.back().first >= boxes.back().second) fail("box needs LO < HI");
    } else if (key == "component") {
      if (!have_dim) fail("'dim' must precede components");
      std::vector<Monomial> comp;
      std::string tok;
      while (ls >> tok) {
        const auto colon = tok.find(':');
        if (colon == std::string::npos) fail("monomial '" + tok + "' needs coeff:exponents");
        Monomial m;
        try {
          m.coeff = ParseRational(tok.substr(0, colon));
        } catch (const std::invalid_argument& e) {
          fail(e.what());
        }
        std::istringstream es(tok.substr(colon + 1));
        std::string e;
        while (std::getline(es, e, ',')) {
          try {
            std::size_t used = 0;
            const int v = std::stoi(e, &used);
            if (used != e.size() || v < 0) fail("bad exponent '" + e + "'");
            m.exponents.push_back(v);
          } catch (const std::logic_error&) {
            fail("bad exponent '" + e + "'");
          }
        }
        if (static_cast<int>(m.exponents.size()) != map.d) fail("monomial '" + tok + "' needs " + std::to_string(map.d) + " exponents");
        comp.push_back(std::move(m));
      }
      if (comp.empty()) fail("empty component");
      map.components.push_back(std::move(comp));
    } else {
      fail("unknown directive '" + key + "'");
    }
  }
  lineno = 0;
  if (!have_dim) fail("missing 'dim'");
  if (map.components.empty()) fail("no components");
  if (boxes.empty()) boxes.emplace_back(0.0, 1.0);
  if (boxes.size() == 1) boxes.resize(map.d, boxes.front());
  if (static_cast<int>(boxes.size()) != map.d) fail("need one box line or one per coordinate");
  for (const auto& [lo, hi] : boxes) {
    map.lo.push_back(lo);
    map.hi.push_back(hi);
  }
  return map;
}

namespace {

// Rows h(x)e_0 = (e^t, 0, ...), h(x)e_i = (e^t f_i(x), e^{-t/n} e_i).
std::vector<std::vector<double>> FlowBasis(const std::vector<double>& fx, double t) {
  const std::size_t n = fx.size();
  std::vector<std::vector<double>> rows(n + 1, std::vector<double>(n + 1, 0.0));
  const double up = std::exp(t), down = std::exp(-t / static_cast<double>(n));
  rows[0][0] = up;
  for (std::size_t i = 0; i < n; ++i) {
    rows[i + 1][0] = up * fx[i];
    rows[i + 1][i + 1] = down;
  }
  return rows;
}

double GramDet(std::vector<std::vector<double>> m) {
  const std::size_t n = m.size();
  double det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::fabs(m[r][c]) > std::fabs(m[piv][c])) piv = r;
    if (m[piv][c] == 0) return 0;
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = m[r][c] / m[c][c];
      for (std::size_t j = c; j < n; ++j) m[r][j] -= f * m[c][j];
    }
  }
  return det;
}

std::vector<std::vector<double>> GridPoints(const PolynomialMap& map, int per_axis) {
  std::vector<std::vector<double>> pts;
  std::vector<int> idx(map.d, 0);
  while (true) {
    std::vector<double> x(map.d);
    for (int i = 0; i < map.d; ++i) {
      x[i] = per_axis == 1 ? (map.lo[i] + map.hi[i]) / 2
                           : map.lo[i] + (map.hi[i] - map.lo[i]) * idx[i] / (per_axis - 1);
    }
    pts.push_back(std::move(x));
    int i = 0;
    while (i < map.d && ++idx[i] == per_axis) idx[i++] = 0;
    if (i == map.d) break;
  }
  return pts;
}

}  // namespace

double EstimateRho(const PolynomialMap& map, double t, int height, int grid, int* count) {
  const int k = map.n() + 1;
  std::vector<std::vector<std::vector<double>>> bases;
  for (const auto& x : GridPoints(map, std::max(grid, 1))) bases.push_back(FlowBasis(map.Eval(x), t));
  double rho = 1;
  int seen = 0;
  for (int j = 1; j < k; ++j) {
    SubgroupEnumerationOptions opt;
    opt.primitive_only = true;
    EnumerateSubgroups(k, j, height, [&](const SublatticeBasis& gamma) {
      ++seen;
      double sup = 0;
      for (const auto& rows : bases) {
        std::vector<std::vector<double>> img(j, std::vector<double>(k, 0.0));
        for (int a = 0; a < j; ++a)
          for (int b = 0; b < k; ++b) {
            const double c = gamma.rows()(a, b).get_d();
            if (c == 0) continue;
            for (int col = 0; col < k; ++col) img[a][col] += c * rows[b][col];
          }
        std::vector<std::vector<double>> gram(j, std::vector<double>(j, 0.0));
        for (int a = 0; a < j; ++a)
          for (int b = 0; b < j; ++b)
            for (int col = 0; col < k; ++col) gram[a][b] += img[a][col] * img[b][col];
        sup = std::max(sup, std::sqrt(std::max(GramDet(gram), 0.0)));
      }
      rho = std::min(rho, std::pow(sup, 1.0 / j));
      return true;
    }, opt);
  }
  if (count) *count = seen;
  return rho;
}

double ShortestNormSqDouble(std::vector<std::vector<double>> b) {
  const std::size_t k = b.size();
  if (k == 0) throw std::invalid_argument("ShortestNormSqDouble: empty basis");
  if (k == 2 && b[0].size() == 2) return ShortestNormSq2d(b[0][0], b[0][1], b[1][0], b[1][1]);
  auto dot = [](const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
  };
  std::vector<std::vector<double>> mu(k, std::vector<double>(k, 0.0));
  std::vector<double> norm(k);
  auto gso = [&] {
    std::vector<std::vector<double>> star = b;
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        mu[i][j] = dot(b[i], star[j]) / norm[j];
        for (std::size_t c = 0; c < star[i].size(); ++c) star[i][c] -= mu[i][j] * star[j][c];
      }
      norm[i] = dot(star[i], star[i]);
    }
  };
  gso();
  for (std::size_t i = 1; i < k;) {
    for (std::size_t j = i; j-- > 0;) {
      const double r = std::round(mu[i][j]);
      if (r == 0) continue;
      for (std::size_t c = 0; c < b[i].size(); ++c) b[i][c] -= r * b[j][c];
      gso();
    }
    if (norm[i] < (0.75 - mu[i][i - 1] * mu[i][i - 1]) * norm[i - 1]) {
      std::swap(b[i], b[i - 1]);
      gso();
      i = std::max<std::size_t>(i - 1, 1);
    } else {
      ++i;
    }
  }
  double best = dot(b[0], b[0]);
  std::vector<double> x(k, 0.0);
  // Depth-first enumeration over coefficients, innermost index last.
  auto enumerate = [&](auto&& self, std::size_t level, double partial) -> void {
    double center = 0;
    for (std::size_t j = level + 1; j < k; ++j) center -= x[j] * mu[j][level];
    const double room = (best - partial) / norm[level];
    if (room < 0) return;
    const double span = std::sqrt(room);
    for (double v = std::ceil(center - span); v <= std::floor(center + span); v += 1) {
      x[level] = v;
      const double next = partial + (v - center) * (v - center) * norm[level];
      if (next > best * (1 + 1e-12)) continue;
      if (level == 0) {
        bool zero = true;
        for (double c : x) zero = zero && c == 0;
        if (!zero && next > 0) best = std::min(best, next);
      } else {
        self(self, level - 1, next);
      }
    }
    x[level] = 0;
  };
  enumerate(enumerate, k - 1, 0.0);
  return best;
}

EscapeBoundReport EscapeBoundVerify(const EscapeBoundConfig& cfg) {
  const PolynomialMap& map = cfg.map;
  if (map.n() < 1 || static_cast<int>(map.lo.size()) != map.d) throw std::invalid_argument("EscapeBoundVerify: incomplete map");
  if (cfg.eps_grid.empty() || cfg.samples == 0) throw std::invalid_argument("EscapeBoundVerify: need eps values and samples");
  for (double e : cfg.eps_grid)
    if (!(e > 0)) throw std::invalid_argument("EscapeBoundVerify: eps must be positive");
  EscapeBoundReport r;
  r.k = map.n() + 1;
  r.rho = EstimateRho(map, cfg.t, cfg.rho_height, cfg.rho_grid, &r.rho_subgroups);
  r.hypothesis_failed = !(r.rho > 0);

  constexpr std::uint64_t kChunk = 1 << 16;
  const std::uint64_t chunks = (cfg.samples + kChunk - 1) / kChunk;
  std::vector<double> eps_sq;
  for (double e : cfg.eps_grid) eps_sq.push_back(e * e);
  auto run_chunk = [&](std::size_t c) {
    if (cfg.budget.expired()) throw BudgetExceeded("EscapeBoundVerify: time budget");
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                      static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
    std::mt19937_64 rng(seq);
    std::vector<std::uniform_real_distribution<double>> axes;
    for (int i = 0; i < map.d; ++i) axes.emplace_back(map.lo[i], map.hi[i]);
    const std::uint64_t begin = c * kChunk, end = std::min(cfg.samples, begin + kChunk);
    std::vector<std::uint64_t> counts(eps_sq.size(), 0);
    std::vector<double> x(map.d);
    for (std::uint64_t s = begin; s < end; ++s) {
      for (int i = 0; i < map.d; ++i) x[i] = axes[i](rng);
      const double l1 = ShortestNormSqDouble(FlowBasis(map.Eval(x), cfg.t));
      for (std::size_t e = 0; e < eps_sq.size(); ++e) counts[e] += l1 < eps_sq[e];
    }
    counts.push_back(end - begin);
    return counts;
  };
  PartialMap<std::vector<std::uint64_t>> parts =
      ParallelMapPartial<std::vector<std::uint64_t>>(chunks, cfg.workers, run_chunk);
  if (parts.error) {
    try {
      std::rethrow_exception(parts.error);
    } catch (const BudgetExceeded&) {
      r.budget_exhausted = true;
    }
  }
  std::vector<std::uint64_t> total(eps_sq.size(), 0);
  for (const auto& part : parts.results) {
    for (std::size_t e = 0; e < eps_sq.size(); ++e) total[e] += part[e];
    r.samples += part.back();
  }

  const double k = r.k;
  const double nd2 = cfg.space.besicovitch * cfg.space.federer * cfg.space.federer;
  const double prefactor = k * cfg.goodness.c * std::pow(nd2, k);
  r.bound_holds = !r.hypothesis_failed && r.samples > 0;
  std::vector<double> lx, ly;
  for (std::size_t e = 0; e < eps_sq.size(); ++e) {
    EscapeBoundRow row;
    row.eps = cfg.eps_grid[e];
    row.escaped = total[e];
    if (r.samples > 0) {
      const double n = static_cast<double>(r.samples);
      row.fraction = row.escaped / n;
      row.sigma = std::sqrt(row.fraction * (1 - row.fraction) / n);
    }
    row.ci_low = std::max(0.0, row.fraction - 1.96 * row.sigma);
    row.ci_high = std::min(1.0, row.fraction + 1.96 * row.sigma);
    row.applicable = !r.hypothesis_failed && row.eps <= r.rho;
    row.bound = r.hypothesis_failed ? std::numeric_limits<double>::infinity()
                                    : prefactor * std::pow(row.eps / r.rho, cfg.goodness.alpha);
    row.violation = row.applicable && row.fraction - 3 * row.sigma > row.bound;
    r.bound_holds = r.bound_holds && !row.violation;
    if (row.escaped > 0) {
      lx.push_back(std::log(row.eps));
      ly.push_back(std::log(row.fraction));
    }
    r.rows.push_back(row);
  }
  r.slope_points = static_cast<int>(lx.size());
  if (lx.size() >= 2) {
    const double n = static_cast<double>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sx += lx[i];
      sy += ly[i];
      sxx += lx[i] * lx[i];
      sxy += lx[i] * ly[i];
    }
    const double den = n * sxx - sx * sx;
    if (den != 0) r.slope = (n * sxy - sx * sy) / den;
  }
  r.slope_ok = r.slope && std::fabs(*r.slope - cfg.goodness.alpha) <= 0.3;
  return r;
}

}  // namespace dexp

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

#include "dexp/lattices.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace dexp {
namespace {

void SwapRows(IntegerMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(a, c), m(b, c));
}

// row[dst] -= f * row[src]
void AddMultiple(IntegerMatrix& m, std::size_t dst, std::size_t src, const Integer& f) {
  if (f == 0) return;
  for (std::size_t c = 0; c < m.cols(); ++c) m(dst, c) -= f * m(src, c);
}

Integer FloorDiv(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

RationalVector RowOf(const RationalMatrix& m, std::size_t i) { return m.row(i); }

Rational Dot(const RationalVector& a, const RationalVector& b) {
  Rational acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

struct GramSchmidt {
  std::vector<Rational> norms;              // B_i = |b*_i|²
  std::vector<std::vector<Rational>> mu;    // mu[i][j], j < i
};

GramSchmidt ComputeGramSchmidt(const RationalMatrix& basis) {
  const std::size_t r = basis.rows();
  GramSchmidt gs;
  gs.norms.assign(r, 0);
  gs.mu.assign(r, std::vector<Rational>(r, 0));
  std::vector<RationalVector> star(r);
  for (std::size_t i = 0; i < r; ++i) {
    RationalVector v = RowOf(basis, i);
    RationalVector bi = v;
    for (std::size_t j = 0; j < i; ++j) {
      if (gs.norms[j] == 0) throw std::invalid_argument("lattice basis rows are dependent");
      gs.mu[i][j] = Dot(bi, star[j]) / gs.norms[j];
      for (std::size_t c = 0; c < v.size(); ++c) v[c] -= gs.mu[i][j] * star[j][c];
    }
    star[i] = std::move(v);
    gs.norms[i] = Dot(star[i], star[i]);
    if (gs.norms[i] == 0) throw std::invalid_argument("lattice basis rows are dependent");
  }
  return gs;
}

struct LllResult {
  RationalMatrix reduced;
  IntegerMatrix transform;  // reduced = transform * original
};

LllResult Lll(const RationalMatrix& basis) {
  const std::size_t r = basis.rows();
  const std::size_t k = basis.cols();
  LllResult res{basis, IntegerMatrix(r, r)};
  for (std::size_t i = 0; i < r; ++i) res.transform(i, i) = 1;
  if (r <= 1) {
    if (r == 1 && Dot(basis.row(0), basis.row(0)) == 0) {
      throw std::invalid_argument("lattice basis rows are dependent");
    }
    return res;
  }
  GramSchmidt gs = ComputeGramSchmidt(res.reduced);
  const Rational delta(3, 4);
  std::size_t idx = 1;
  while (idx < r) {
    for (std::size_t jj = idx; jj-- > 0;) {
      Integer q = NearestInteger(gs.mu[idx][jj]);
      if (q == 0) continue;
      for (std::size_t c = 0; c < k; ++c) res.reduced(idx, c) -= Rational(q) * res.reduced(jj, c);
      for (std::size_t c = 0; c < r; ++c) res.transform(idx, c) -= q * res.transform(jj, c);
      for (std::size_t l = 0; l < jj; ++l) gs.mu[idx][l] -= Rational(q) * gs.mu[jj][l];
      gs.mu[idx][jj] -= Rational(q);
    }
    const Rational& mu = gs.mu[idx][idx - 1];
    if (gs.norms[idx] >= (delta - mu * mu) * gs.norms[idx - 1]) {
      ++idx;
    } else {
      for (std::size_t c = 0; c < k; ++c) std::swap(res.reduced(idx, c), res.reduced(idx - 1, c));
      for (std::size_t c = 0; c < r; ++c) std::swap(res.transform(idx, c), res.transform(idx - 1, c));
      gs = ComputeGramSchmidt(res.reduced);
      idx = std::max<std::size_t>(idx - 1, 1);
    }
  }
  return res;
}

// Integers x with norm * (x - center)² <= rem.
std::pair<Integer, Integer> IntegerWindow(const Rational& center, const Rational& rem,
                                          const Rational& norm) {
  const double radius = std::sqrt(std::max(0.0, ToDouble(rem / norm)));
  const double c = ToDouble(center);
  Integer lo(std::floor(c - radius) - 1);
  Integer hi(std::ceil(c + radius) + 1);
  auto fits = [&](const Integer& x) {
    Rational d = Rational(x) - center;
    return norm * d * d <= rem;
  };
  while (lo <= hi && !fits(lo)) ++lo;
  while (hi >= lo && !fits(hi)) --hi;
  // Widen in case the floating estimate was too tight.
  while (fits(lo - 1)) --lo;
  while (fits(hi + 1)) ++hi;
  return {lo, hi};
}

struct Enumerator {
  Enumerator(const GramSchmidt& g, std::size_t rank, std::uint64_t cap, Rational radius_sq,
             bool shortest)
      : gs(g), r(rank), max_nodes(cap), bound(std::move(radius_sq)), shrink(shortest) {}

  const GramSchmidt& gs;
  std::size_t r;
  std::uint64_t max_nodes;
  std::uint64_t nodes = 0;
  Rational bound;          // current squared radius
  bool shrink;             // shortest-vector mode: tighten bound on success
  std::vector<Integer> x;
  std::vector<std::vector<Integer>> found;
  std::vector<Rational> found_norms;

  void Run() {
    x.assign(r, 0);
    Recurse(r, 0, true);
  }

  void Recurse(std::size_t level, const Rational& partial, bool all_zero_above) {
    if (++nodes > max_nodes) throw BudgetExceeded("lattice enumeration node cap exceeded");
    if (level == 0) {
      if (all_zero_above) return;
      if (shrink) {
        if (found.empty() || partial < bound) {
          found.assign(1, x);
          found_norms.assign(1, partial);
          bound = partial;
        }
      } else {
        found.push_back(x);
        found_norms.push_back(partial);
      }
      return;
    }
    const std::size_t i = level - 1;
    Rational center = 0;
    for (std::size_t j = i + 1; j < r; ++j) center -= gs.mu[j][i] * Rational(x[j]);
    Rational rem = bound - partial;
    if (rem < 0) return;
    auto [lo, hi] = IntegerWindow(center, rem, gs.norms[i]);
    if (all_zero_above && lo < 0) lo = 0;
    for (Integer v = lo; v <= hi; ++v) {
      Rational d = Rational(v) - center;
      Rational next = partial + gs.norms[i] * d * d;
      if (next > bound) continue;
      x[i] = v;
      Recurse(i, next, all_zero_above && v == 0);
    }
    x[i] = 0;
  }
};

ShortVector MakeShortVector(const LllResult& lll, const std::vector<Integer>& x,
                            const Rational& norm) {
  const std::size_t r = lll.reduced.rows();
  ShortVector sv;
  sv.norm_sq = norm;
  sv.vector.assign(lll.reduced.cols(), 0);
  sv.coeffs.assign(r, 0);
  for (std::size_t i = 0; i < r; ++i) {
    if (x[i] == 0) continue;
    for (std::size_t c = 0; c < lll.reduced.cols(); ++c) sv.vector[c] += Rational(x[i]) * lll.reduced(i, c);
    for (std::size_t c = 0; c < r; ++c) sv.coeffs[c] += x[i] * lll.transform(i, c);
  }
  return sv;
}

}  // namespace

// ---------------------------------------------------------------------------
// Hermite normal form

SublatticeBasis Hnf(const IntegerMatrix& input) {
  IntegerMatrix m = input;
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  std::size_t r = 0;
  std::vector<std::size_t> pivots;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    // Euclid on column c among rows r..end.
    while (true) {
      std::size_t best = rows;
      for (std::size_t i = r; i < rows; ++i) {
        if (m(i, c) != 0 && (best == rows || abs(m(i, c)) < abs(m(best, c)))) best = i;
      }
      if (best == rows) break;
      SwapRows(m, r, best);
      bool done = true;
      for (std::size_t i = r + 1; i < rows; ++i) {
        if (m(i, c) == 0) continue;
        Integer q;
        mpz_tdiv_q(q.get_mpz_t(), m(i, c).get_mpz_t(), m(r, c).get_mpz_t());
        AddMultiple(m, i, r, q);
        if (m(i, c) != 0) done = false;
      }
      if (done) break;
    }
    if (m(r, c) == 0) continue;
    if (m(r, c) < 0) {
      for (std::size_t j = 0; j < cols; ++j) m(r, j) = -m(r, j);
    }
    for (std::size_t i = 0; i < r; ++i) AddMultiple(m, i, r, FloorDiv(m(i, c), m(r, c)));
    pivots.push_back(c);
    ++r;
  }
  if (r != rows) throw std::invalid_argument("Hnf: rows are linearly dependent");
  SublatticeBasis out;
  out.rows_ = std::move(m);
  return out;
}

SublatticeBasis SublatticeBasis::FromRows(const IntegerMatrix& rows) { return Hnf(rows); }

std::vector<int> SublatticeBasis::pivots() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < rows_.rows(); ++i) {
    for (std::size_t c = 0; c < rows_.cols(); ++c) {
      if (rows_(i, c) != 0) {
        out.push_back(static_cast<int>(c));
        break;
      }
    }
  }
  return out;
}

Integer SublatticeBasis::height() const {
  Integer h = 0;
  for (std::size_t i = 0; i < rows_.rows(); ++i)
    for (std::size_t c = 0; c < rows_.cols(); ++c) h = std::max<Integer>(h, abs(rows_(i, c)));
  return h;
}

Multivector PluckerOfRows(const RationalMatrix& rows) {
  const int k = static_cast<int>(rows.cols());
  Multivector acc = Multivector::Basis(IndexSet::FromMask(0, k));
  for (std::size_t i = 0; i < rows.rows(); ++i) {
    acc = Wedge(acc, Multivector::FromVector(rows.row(i)));
  }
  return acc;
}

Multivector PluckerOfRows(const IntegerMatrix& rows) { return PluckerOfRows(ToRational(rows)); }

Multivector Plucker(const SublatticeBasis& basis) { return PluckerOfRows(basis.rows()); }

bool IsPrimitive(const SublatticeBasis& basis) {
  Integer g = 0;
  const Multivector p = Plucker(basis);
  for (const auto& [set, c] : p.terms()) g = Gcd(g, Integer(c.get_num()));
  return g == 1;
}

// ---------------------------------------------------------------------------
// Real lattices

RealLattice::RealLattice(RationalMatrix basis) : basis_(std::move(basis)) {}

RealLattice RealLattice::FromTransform(const RationalMatrix& h) {
  return RealLattice(h.transposed());
}

RealLattice RealLattice::Image(const RationalMatrix& h, const SublatticeBasis& gamma) {
  const auto& g = gamma.rows();
  RationalMatrix rows(g.rows(), h.rows());
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t a = 0; a < h.rows(); ++a) {
      Rational acc = 0;
      for (std::size_t b = 0; b < h.cols(); ++b) acc += h(a, b) * Rational(g(i, b));
      rows(i, a) = acc;
    }
  return RealLattice(std::move(rows));
}

RationalMatrix Gram(const RationalMatrix& rows) {
  RationalMatrix g(rows.rows(), rows.rows());
  for (std::size_t i = 0; i < rows.rows(); ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      Rational acc = 0;
      for (std::size_t c = 0; c < rows.cols(); ++c) acc += rows(i, c) * rows(j, c);
      g(i, j) = acc;
      g(j, i) = acc;
    }
  return g;
}

Rational CovolumeSq(const RealLattice& lattice) {
  Rational det = Determinant(Gram(lattice.basis()));
  if (det == 0) throw std::invalid_argument("CovolumeSq: dependent rows");
  return det;
}

RationalMatrix LllReduce(const RationalMatrix& basis) { return Lll(basis).reduced; }

ShortVector ShortestVector(const RealLattice& lattice, EnumerationBudget budget) {
  if (lattice.rank() == 0) throw std::invalid_argument("ShortestVector: empty lattice");
  LllResult lll = Lll(lattice.basis());
  GramSchmidt gs = ComputeGramSchmidt(lll.reduced);
  Enumerator e(gs, lll.reduced.rows(), budget.max_nodes,
               Dot(lll.reduced.row(0), lll.reduced.row(0)), true);
  e.Run();
  return MakeShortVector(lll, e.found.front(), e.found_norms.front());
}

std::vector<ShortVector> ShortVectors(const RealLattice& lattice, const Rational& bound_sq,
                                      EnumerationBudget budget) {
  if (lattice.rank() == 0) return {};
  LllResult lll = Lll(lattice.basis());
  GramSchmidt gs = ComputeGramSchmidt(lll.reduced);
  Enumerator e(gs, lll.reduced.rows(), budget.max_nodes, bound_sq, false);
  e.Run();
  std::vector<ShortVector> out;
  out.reserve(e.found.size());
  for (std::size_t i = 0; i < e.found.size(); ++i) {
    out.push_back(MakeShortVector(lll, e.found[i], e.found_norms[i]));
  }
  return out;
}

bool InKEps(const RealLattice& lattice, const Rational& eps, EnumerationBudget budget) {
  return ShortestVector(lattice, budget).norm_sq >= eps * eps;
}

double ShortestNormSq2d(double ax, double ay, double bx, double by) {
  double na = ax * ax + ay * ay;
  double nb = bx * bx + by * by;
  if (na > nb) {
    std::swap(ax, bx);
    std::swap(ay, by);
    std::swap(na, nb);
  }
  for (int iter = 0; iter < 200; ++iter) {
    double mu = std::nearbyint((ax * bx + ay * by) / na);
    if (mu != 0.0) {
      bx -= mu * ax;
      by -= mu * ay;
      nb = bx * bx + by * by;
    }
    if (nb >= na) break;
    std::swap(ax, bx);
    std::swap(ay, by);
    std::swap(na, nb);
  }
  return na;
}

MinkowskiReport MinkowskiCheck(const SublatticeBasis& gamma, const RationalMatrix& transform,
                               EnumerationBudget budget) {
  RealLattice image = RealLattice::Image(transform, gamma);
  MinkowskiReport report;
  report.lambda1_sq = ShortestVector(image, budget).norm_sq;
  report.covolume_sq = CovolumeSq(image);
  const int j = gamma.rank();
  Rational lhs = Pow(report.lambda1_sq, j);
  Integer four_pow;
  mpz_ui_pow_ui(four_pow.get_mpz_t(), 4, static_cast<unsigned long>(j * j));
  report.holds = lhs <= Rational(four_pow) * report.covolume_sq;
  return report;
}

// ---------------------------------------------------------------------------
// Subgroup enumeration

namespace {

struct SubgroupWalker {
  int k;
  int j;
  Integer height;
  SubgroupEnumerationOptions options;
  const std::function<bool(const SublatticeBasis&)>& visit;
  std::vector<int> pivots;
  IntegerMatrix rows;
  std::vector<std::pair<int, int>> free_cells;  // (row, col) filled in order
  bool stopped = false;

  void Start() {
    std::vector<int> cols(j);
    for (int i = 0; i < j; ++i) cols[i] = i;
    if (j > k) return;
    while (!stopped) {
      pivots = cols;
      WalkPivotValues(0);
      int pos = j - 1;
      while (pos >= 0 && cols[pos] == k - (j - pos)) --pos;
      if (pos < 0) break;
      ++cols[pos];
      for (int i = pos + 1; i < j; ++i) cols[i] = cols[i - 1] + 1;
    }
  }

  void WalkPivotValues(int i) {
    if (stopped) return;
    if (i == 0) {
      rows = IntegerMatrix(j, k);
      free_cells.clear();
      for (int r = 0; r < j; ++r)
        for (int c = pivots[r] + 1; c < k; ++c) free_cells.emplace_back(r, c);
    }
    if (i == j) {
      WalkCells(0);
      return;
    }
    for (Integer d = 1; d <= height && !stopped; ++d) {
      rows(i, pivots[i]) = d;
      WalkPivotValues(i + 1);
    }
  }

  void WalkCells(std::size_t idx) {
    if (stopped) return;
    if (idx == free_cells.size()) {
      SublatticeBasis b;
      b = SublatticeBasis::FromRows(rows);
      if (options.primitive_only && !IsPrimitive(b)) return;
      if (!visit(b)) stopped = true;
      return;
    }
    auto [r, c] = free_cells[idx];
    auto pivot_row = std::find(pivots.begin(), pivots.end(), c);
    Integer lo = -height, hi = height;
    if (pivot_row != pivots.end()) {
      const int pr = static_cast<int>(pivot_row - pivots.begin());
      lo = 0;
      hi = std::min<Integer>(height, rows(pr, c) - 1);
    }
    for (Integer v = lo; v <= hi && !stopped; ++v) {
      rows(r, c) = v;
      WalkCells(idx + 1);
    }
    rows(r, c) = 0;
  }
};

}  // namespace

void EnumerateSubgroups(int k, int j, const Integer& height,
                        const std::function<bool(const SublatticeBasis&)>& visit,
                        SubgroupEnumerationOptions options) {
  if (j < 1 || j > k || height < 1) return;
  SubgroupWalker walker{k, j, height, options, visit, {}, {}, {}};
  walker.Start();
}

std::vector<SublatticeBasis> ListSubgroups(int k, int j, const Integer& height,
                                           SubgroupEnumerationOptions options) {
  std::vector<SublatticeBasis> out;
  EnumerateSubgroups(k, j, height, [&](const SublatticeBasis& b) {
    out.push_back(b);
    return true;
  }, options);
  return out;
}

}  // namespace dexp

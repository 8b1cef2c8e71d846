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

#include "dexp/subspaces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace dexp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Integer AbsInt(const Integer& z) { return z < 0 ? Integer(-z) : z; }

void CheckAmbient(const AffineSubspaceParam& p, const Multivector& w) {
  if (w.ambient_dim() != p.n() + 1) {
    throw std::invalid_argument("multivector dimension " + std::to_string(w.ambient_dim()) +
                                " does not match n + 1 = " + std::to_string(p.n() + 1));
  }
}

// <(e_i + a_i) ∧ e_J, w>
Rational ShiftedInner(const AffineSubspaceParam& p, int i, const IndexSet& j, const Multivector& w) {
  Rational acc = 0;
  const int sign = InsertionSign(i, j);
  if (sign != 0) acc += sign * w.coeff(j.with(i));
  for (const auto& [set, a] : p.row_vector(i).terms()) {
    const int m = set.min();
    const int sm = InsertionSign(m, j);
    if (sm != 0) acc += sm * a * w.coeff(j.with(m));
  }
  return acc;
}

}  // namespace

AffineSubspaceParam::AffineSubspaceParam(RationalMatrix a) : a_(std::move(a)) {
  if (a_.rows() == 0 || a_.cols() == 0) throw std::invalid_argument("subspace matrix is empty");
  s_ = static_cast<int>(a_.rows()) - 1;
  n_ = s_ + static_cast<int>(a_.cols());
  if (n_ + 1 > 31) throw std::invalid_argument("subspace dimension too large");
  for (int i = 0; i <= s_; ++i) {
    Multivector v(n_ + 1, 1);
    for (int k = 0; k < static_cast<int>(a_.cols()); ++k) {
      v.add_term(IndexSet::FromMask(1u << (s_ + 1 + k), n_ + 1), a_(i, k));
    }
    rows_.push_back(std::move(v));
  }
}

Rational AffineSubspaceParam::max_row_l1() const {
  Rational m = 0;
  for (std::size_t i = 0; i < a_.rows(); ++i) {
    Rational r = 0;
    for (std::size_t k = 0; k < a_.cols(); ++k) r += Abs(a_(i, k));
    m = std::max(m, r);
  }
  return m;
}

RContractResult RContract(const AffineSubspaceParam& p, const Multivector& w) {
  CheckAmbient(p, w);
  if (w.degree() < 1) throw std::invalid_argument("RContract: degree must be positive");
  RContractResult r;
  const auto sets = IndexSetsInRange(p.n() + 1, w.degree() - 1, 1, p.n());
  for (int i = 0; i <= p.s(); ++i) {
    for (const IndexSet& j : sets) {
      Rational v = ShiftedInner(p, i, j, w);
      r.sup = std::max(r.sup, Abs(v));
      r.values.push_back({i, j, std::move(v)});
    }
  }
  return r;
}

RContractResult RContractMatrix(const AffineSubspaceParam& p, const Multivector& w) {
  CheckAmbient(p, w);
  if (w.degree() < 1) throw std::invalid_argument("RContractMatrix: degree must be positive");
  const ContractionImage c = Contract(w);
  const RationalMatrix& a = p.matrix();
  RContractResult r;
  const auto sets = IndexSetsInRange(p.n() + 1, w.degree() - 1, 1, p.n());
  for (int i = 0; i <= p.s(); ++i) {
    // (R_A c(w))_i = c(w)_i + Σ_k a_{ik} c(w)_{s+1+k}
    Multivector row = c.components[i];
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) != 0) row += c.components[p.s() + 1 + k] * a(i, k);
    }
    for (const IndexSet& j : sets) {
      Rational v = row.coeff(j);
      r.sup = std::max(r.sup, Abs(v));
      r.values.push_back({i, j, std::move(v)});
    }
  }
  return r;
}

Multivector ProjectBullet(const AffineSubspaceParam& p, const Multivector& w) {
  return ProjectVbullet(w, p.s());
}

namespace {

// Integers z with |z + x| < 1: nearest first, then smaller |z|, then ascending.
std::vector<Integer> LiftChoices(const Rational& x) {
  const Rational target = -x;
  Integer fl = Floor(target);
  std::vector<Integer> out;
  for (const Integer& z : {Integer(fl), Integer(fl + 1)}) {
    if (Abs(Rational(z) + x) < 1) out.push_back(z);
  }
  std::sort(out.begin(), out.end(), [&](const Integer& a, const Integer& b) {
    const Rational da = Abs(Rational(a) + x);
    const Rational db = Abs(Rational(b) + x);
    if (da != db) return da < db;
    if (AbsInt(a) != AbsInt(b)) return AbsInt(a) < AbsInt(b);
    return a < b;
  });
  return out;
}

}  // namespace

namespace {

Integer CommonDenominator(const RationalMatrix& a) {
  Integer d = 1;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Integer& den = a(i, k).get_den();
      Integer g = Gcd(d, den);
      d = d / g * den;
    }
  return d;
}

// Σ coeff·w[pos], everything scaled by the common denominator D of A.
struct LinearForm {
  std::vector<std::pair<int, Integer>> terms;

  void Eval(const std::vector<Integer>& w, Integer& out) const {
    out = 0;
    for (const auto& [pos, c] : terms) {
      if (w[pos] != 0) out += c * w[pos];
    }
  }
};

// Dense integer version of the lifting search over degree-j multivectors.
class OrderSearch {
 public:
  OrderSearch(const AffineSubspaceParam& p, int j) : p_(p), j_(j), dim_(p.n() + 1) {
    d_ = CommonDenominator(p.matrix());
    sets_ = AllIndexSets(dim_, j);
    pos_.assign(std::size_t{1} << dim_, -1);
    for (std::size_t i = 0; i < sets_.size(); ++i) pos_[sets_[i].mask()] = static_cast<int>(i);
    for (const IndexSet& b : IndexSetsInRange(dim_, j, p.s() + 1, p.n())) bullet_.push_back(pos_[b.mask()]);
    for (int i = 0; i <= p.s(); ++i) {
      for (const IndexSet& jset : IndexSetsInRange(dim_, j - 1, 1, p.n())) checks_.push_back(Form(i, jset, true));
    }
    const std::uint32_t low_mask = (1u << (p.s() + 1)) - 1u;
    std::vector<IndexSet> low;
    for (const IndexSet& set : sets_) {
      if (set.min() <= p.s()) low.push_back(set);
    }
    std::stable_sort(low.begin(), low.end(), [&](const IndexSet& x, const IndexSet& y) {
      return std::popcount(x.mask() & low_mask) < std::popcount(y.mask() & low_mask);
    });
    for (const IndexSet& set : low) {
      steps_.push_back({pos_[set.mask()], Form(set.min(), set.without(set.min()), false)});
    }
    // The trivially decomposable cases skip the wedge test.
    const int bullet_dim = p.n() - p.s();
    bullet_trivial_ = j <= 1 || j >= bullet_dim - 1;
    full_trivial_ = j <= 1 || j >= dim_ - 1;
  }

  std::size_t bullet_dim() const { return bullet_.size(); }
  std::size_t step_count() const { return steps_.size(); }
  const Integer& denominator() const { return d_; }

  Multivector ToMultivector(const std::vector<Integer>& w) const {
    Multivector out(dim_, j_);
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i] != 0) out.add_term(sets_[i], Rational(w[i]));
    }
    return out;
  }

  // visit(w, sup·D). With `prune`, branches that cannot beat *prune are cut.
  template <typename Visit>
  void Run(long h, Visit&& visit, const Integer* prune) {
    ForEachVectorAtHeight(static_cast<int>(bullet_.size()), h, [&](const std::vector<long>& coords) {
      w_.assign(sets_.size(), 0);
      for (std::size_t c = 0; c < coords.size(); ++c) w_[bullet_[c]] = coords[c];
      if (!bullet_trivial_ && !IsDecomposable(ToMultivector(w_))) return;
      Lift(0, Integer(0), visit, prune);
    });
  }

 private:
  // <(e_i + a_i) ∧ e_J, w>; with include_self false the e_i ∧ e_J term is left out.
  LinearForm Form(int i, const IndexSet& jset, bool include_self) const {
    LinearForm f;
    if (include_self) {
      const int sign = InsertionSign(i, jset);
      if (sign != 0) f.terms.emplace_back(pos_[jset.with(i).mask()], Integer(sign) * d_);
    }
    for (const auto& [mset, a] : p_.row_vector(i).terms()) {
      const int m = mset.min();
      const int sign = InsertionSign(m, jset);
      if (sign == 0) continue;
      Rational scaled = a * Rational(d_) * sign;
      f.terms.emplace_back(pos_[jset.with(m).mask()], scaled.get_num());
    }
    return f;
  }

  template <typename Visit>
  void Lift(std::size_t idx, const Integer& partial, Visit& visit, const Integer* prune) {
    if (idx == steps_.size()) {
      Integer sup = 0, v;
      for (const LinearForm& f : checks_) {
        f.Eval(w_, v);
        if (abs(v) > sup) sup = abs(v);
        if (sup >= d_ || (prune && sup >= *prune)) return;
      }
      if (!full_trivial_ && !IsDecomposable(ToMultivector(w_))) return;
      visit(w_, sup);
      return;
    }
    const auto& step = steps_[idx];
    Integer x;
    step.second.Eval(w_, x);
    // |D z + x| < D, nearest first, then smaller |z|, then ascending.
    Integer fl;
    mpz_fdiv_q(fl.get_mpz_t(), Integer(-x).get_mpz_t(), d_.get_mpz_t());
    Integer cand[2] = {fl, fl + 1};
    Integer dist[2] = {abs(d_ * cand[0] + x), abs(d_ * cand[1] + x)};
    int order[2] = {0, 1};
    if (dist[1] < dist[0] || (dist[1] == dist[0] && abs(cand[1]) < abs(cand[0]))) std::swap(order[0], order[1]);
    for (int o : order) {
      if (dist[o] >= d_) continue;
      const Integer next = dist[o] > partial ? dist[o] : partial;
      if (prune && next >= *prune) continue;
      w_[step.first] = cand[o];
      Lift(idx + 1, next, visit, prune);
    }
    w_[step.first] = 0;
  }

  const AffineSubspaceParam& p_;
  int j_;
  int dim_;
  Integer d_;
  std::vector<IndexSet> sets_;
  std::vector<int> pos_;
  std::vector<int> bullet_;
  std::vector<LinearForm> checks_;
  std::vector<std::pair<int, LinearForm>> steps_;
  bool bullet_trivial_ = false;
  bool full_trivial_ = false;
  std::vector<Integer> w_;
};

}  // namespace

void ForEachOrderCandidate(const AffineSubspaceParam& p, int j, long h,
                           const std::function<void(const Multivector&, const Rational&)>& visit) {
  if (j < 1 || j > p.n()) throw std::invalid_argument("order out of range");
  OrderSearch search(p, j);
  search.Run(h, [&](const std::vector<Integer>& w, const Integer& sup_scaled) {
    Rational sup(sup_scaled, search.denominator());
    sup.canonicalize();
    visit(search.ToMultivector(w), sup);
  }, nullptr);
}

RecordCurve OmegaJRecords(const AffineSubspaceParam& p, int j, const Integer& height,
                          const SearchOptions& options) {
  if (j < 1 || j > p.n()) throw std::invalid_argument("OmegaJRecords: order out of range");
  const int s = p.s();
  const OrderSearch plan(p, j);
  const double bullet_dim = static_cast<double>(plan.bullet_dim());
  const double lifts = std::pow(2.0, static_cast<double>(plan.step_count()));
  auto eval = [&](long h, CandidateSink& sink) {
    OrderSearch search = plan;
    std::optional<std::vector<Integer>> best_w;
    Integer best = search.denominator();  // scaled sup of the best so far
    search.Run(h, [&](const std::vector<Integer>& w, const Integer& sup_scaled) {
      best = sup_scaled;
      best_w = w;
    }, &best);
    if (!best_w) return;
    const Multivector w = search.ToMultivector(*best_w);
    Record r;
    r.height = h;
    r.residual = Ratio(best, search.denominator());
    r.residual.canonicalize();
    r.witness = w;
    if (j == 1) {
      for (int i = 0; i <= s; ++i) r.p.push_back(w.coeff(IndexSet::FromMask(1u << i, p.n() + 1)).get_num());
      for (int i = s + 1; i <= p.n(); ++i) r.q.push_back(w.coeff(IndexSet::FromMask(1u << i, p.n() + 1)).get_num());
    }
    bool defined = true;
    if (r.residual == 0) {
      r.value = kInf;
    } else if (h >= 2) {
      r.value = j * (-LogAbs(r.residual) / std::log(static_cast<double>(h))) + j - 1;
    } else {
      defined = false;
    }
    sink.Offer(std::move(r), defined);
  };
  return RunRecordSearch(height, options,
                         [&](long h) { return CandidatesAtHeight(static_cast<int>(bullet_dim), h) * lifts; }, eval);
}

OrderExponentReport SubspaceExponent(const AffineSubspaceParam& p, const Integer& height,
                                     const SearchOptions& options, std::vector<int> orders,
                                     bool allow_high_orders) {
  const int top = p.n() - p.s();
  if (orders.empty()) {
    for (int j = 1; j <= top; ++j) orders.push_back(j);
  }
  OrderExponentReport report;
  report.combined = p.n();
  for (int j : orders) {
    if (j < 1 || j > p.n() || (j > top && !allow_high_orders)) {
      throw std::invalid_argument("order " + std::to_string(j) + " outside 1.." + std::to_string(top));
    }
    RecordCurve c = OmegaJRecords(p, j, height, options);
    if (j <= top) report.combined = std::max(report.combined, c.estimate);
    report.curves.emplace(j, std::move(c));
  }
  const std::size_t rank = Rank(p.matrix());
  report.rows_proportional = p.s() == 0 || rank <= 1;
  report.columns_proportional = top == 1 || rank <= 1;
  report.equality_expected = report.rows_proportional || report.columns_proportional;
  report.annotation = report.equality_expected
                          ? "rows or columns of A are rationally proportional: omega(L) = max(omega(A), n) expected"
                          : "no proportionality: only omega(L) >= max(omega(A), n) is known";
  if (p.s() == 0) report.annotation += "; s = 0: omega_j(a) <= omega(a) expected";
  return report;
}

Rational Kappa(const AffineSubspaceParam& p) { return Pow(1 + p.max_row_l1(), p.s() + 1); }

Rational KappaPrime(const AffineSubspaceParam& p) {
  return Rational(p.s() + 1) * Pow(1 + p.max_row_l1(), p.s() + 2);
}

CoordinateBoundReport CoordinateBound(const AffineSubspaceParam& p, const Multivector& w) {
  CheckAmbient(p, w);
  if (!w.is_integral()) throw std::invalid_argument("CoordinateBound: w must be integral");
  if (RContract(p, w).sup >= 1) throw std::invalid_argument("CoordinateBound: needs ||R_A c(w)|| < 1");
  CoordinateBoundReport r;
  r.w_sup = SupNorm(w);
  r.bullet_sup = SupNorm(ProjectBullet(p, w));
  r.kappa = Kappa(p);
  r.holds = r.w_sup <= r.kappa * (1 + r.bullet_sup);
  return r;
}

RestrictedNormsReport RestrictedNorms(const AffineSubspaceParam& p, const Multivector& w) {
  CheckAmbient(p, w);
  const int j = w.degree();
  if (j < 2 || j > p.n() - p.s()) throw std::invalid_argument("RestrictedNorms: degree out of range");
  RestrictedNormsReport r;
  for (int i = 0; i <= p.s(); ++i) {
    for (const IndexSet& set : AllIndexSets(p.n() + 1, j - 1)) {
      const Rational v = Abs(ShiftedInner(p, i, set, w));
      r.extended = std::max(r.extended, v);
      if (!set.contains(0)) r.core = std::max(r.core, v);
      if (set.empty() || set.min() > i) r.restricted = std::max(r.restricted, v);
    }
  }
  r.kappa_prime = KappaPrime(p);
  r.extended_ok = r.extended <= r.kappa_prime * r.core;
  r.restricted_ok = r.core <= r.kappa_prime * r.restricted;
  return r;
}

RationalMatrix ApplyRowOp(const RationalMatrix& a, const RowOp& op) {
  RationalMatrix out = a;
  if (op.kind == RowOp::Kind::kScale) {
    if (op.k == 0 || op.l == 0) throw std::invalid_argument("row scaling needs nonzero k and l");
    const Rational f = Ratio(op.k, op.l);
    for (std::size_t c = 0; c < a.cols(); ++c) out(0, c) = a(0, c) * f;
  } else {
    if (a.rows() < 2) throw std::invalid_argument("adding row 1 needs at least two rows");
    for (std::size_t c = 0; c < a.cols(); ++c) out(0, c) = a(0, c) + a(1, c);
  }
  return out;
}

RowOpResult RowOpTransform(const AffineSubspaceParam& p, const IntegerMatrix& basis_rows,
                               const RowOp& op) {
  if (static_cast<int>(basis_rows.cols()) != p.n() + 1) {
    throw std::invalid_argument("RowOpTransform: basis dimension mismatch");
  }
  const RationalMatrix a2 = ApplyRowOp(p.matrix(), op);
  const Multivector w = PluckerOfRows(basis_rows);
  if (w.is_zero()) throw std::invalid_argument("RowOpTransform: dependent basis rows");

  // Integer basis in which only the first row meets e_0 (and, for the
  // addition, only the first two rows meet e_1).
  IntegerMatrix rows = Hnf(basis_rows).rows();
  if (PluckerOfRows(rows) == -w) {
    for (std::size_t c = 0; c < rows.cols(); ++c) rows(0, c) = -rows(0, c);
  }
  Multivector algebraic;
  Rational factor;
  const Multivector w0 = ProjectV0(w);
  if (op.kind == RowOp::Kind::kScale) {
    // (k a e_0 + ℓ b v_1) ∧ v_2 ∧ ... ∧ v_j
    for (std::size_t c = 0; c < rows.cols(); ++c) rows(0, c) *= (c == 0 ? op.k : op.l);
    algebraic = w0 * Rational(op.l) + (w - w0) * Rational(op.k);
    factor = Rational(std::max(AbsInt(op.k), AbsInt(op.l)));
  } else {
    // e_1 ↦ e_0 + e_1 on every basis vector
    for (std::size_t r = 0; r < rows.rows(); ++r) rows(r, 0) += rows(r, 1);
    algebraic = w;
    for (const auto& [set, c] : w.terms()) {
      if (set.contains(1) && !set.contains(0)) algebraic.add_term(set.without(1).with(0), c);
    }
    factor = 2;
  }
  RowOpResult r{PluckerOfRows(rows), AffineSubspaceParam(a2), 0, 0, factor};
  if (!(r.w_tilde == algebraic)) {
    throw std::logic_error("RowOpTransform: factored and algebraic forms disagree");
  }
  r.before = RContract(p, w).sup;
  r.after = RContract(r.transformed, r.w_tilde).sup;
  r.integral = r.w_tilde.is_integral();
  r.decomposable = IsDecomposable(r.w_tilde);
  r.norm_ok = r.after <= r.factor * r.before;
  const Multivector bullet = ProjectBullet(p, w);
  const Multivector bullet_tilde = ProjectBullet(r.transformed, r.w_tilde);
  r.bullet_ok = op.kind == RowOp::Kind::kScale ? bullet_tilde == bullet * Rational(op.l)
                                               : bullet_tilde == bullet;
  return r;
}

namespace {

// Shift every index down by one; the input must avoid index 0.
Multivector DropFirstAxis(const Multivector& w) {
  Multivector out(w.ambient_dim() - 1, w.degree());
  for (const auto& [set, c] : w.terms()) {
    out.add_term(IndexSet::FromMask(set.mask() >> 1, w.ambient_dim() - 1), c);
  }
  return out;
}

RationalMatrix WithoutFirstRow(const RationalMatrix& a) {
  RationalMatrix out(a.rows() - 1, a.cols());
  for (std::size_t i = 1; i < a.rows(); ++i)
    for (std::size_t c = 0; c < a.cols(); ++c) out(i - 1, c) = a(i, c);
  return out;
}

}  // namespace

RowRemovalResult RowRemovalProject(const AffineSubspaceParam& p, const Multivector& w) {
  CheckAmbient(p, w);
  if (p.s() < 1) throw std::invalid_argument("RowRemovalProject: needs at least two rows");
  RowRemovalResult r{AffineSubspaceParam(WithoutFirstRow(p.matrix())), DropFirstAxis(ProjectV0(w)), 0, 0};
  r.before = RContract(p, w).sup;
  r.after = RContract(r.reduced, r.projected).sup;
  r.norm_ok = r.after <= r.before;
  r.bullet_equal = ProjectBullet(r.reduced, r.projected) == DropFirstAxis(ProjectBullet(p, w));
  return r;
}

namespace {

void CheckTwoByTwo(const RationalMatrix& a) {
  if (a.rows() != 2 || a.cols() != 2) throw std::invalid_argument("closed form needs a 2x2 matrix");
}

Rational Coord(const Multivector& w, int i, int j) { return w.coeff(IndexSet::FromIndices({i, j}, 4)); }

ClosedFormValues FinishValues(ClosedFormValues v) {
  for (Rational& x : v.values) {
    x = Abs(x);
    v.sup = std::max(v.sup, x);
  }
  return v;
}

}  // namespace

ClosedFormValues Omega2ClosedForm(const RationalMatrix& a, const Multivector& w) {
  CheckTwoByTwo(a);
  if (w.ambient_dim() != 4 || w.degree() != 2) throw std::invalid_argument("closed form needs w in degree 2 of R^4");
  const Rational q = Coord(w, 2, 3);
  const Rational det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  ClosedFormValues v;
  v.values[0] = Coord(w, 0, 2) - a(0, 1) * q;
  v.values[1] = Coord(w, 1, 2) - a(1, 1) * q;
  v.values[2] = Coord(w, 0, 3) + a(0, 0) * q;
  v.values[3] = Coord(w, 1, 3) + a(1, 0) * q;
  v.values[4] = Coord(w, 0, 1) - det * q;
  return FinishValues(v);
}

ClosedFormValues Omega2FromContraction(const AffineSubspaceParam& p, const Multivector& w) {
  if (p.n() != 3 || p.s() != 1 || w.degree() != 2) {
    throw std::invalid_argument("contraction form needs n = 3, s = 1, degree 2");
  }
  auto value = [&](int i, int m) {
    return ShiftedInner(p, i, IndexSet::FromIndices({m}, 4), w);
  };
  const RationalMatrix& a = p.matrix();
  ClosedFormValues v;
  v.values[0] = value(0, 2);
  v.values[1] = value(1, 2);
  v.values[2] = value(0, 3);
  v.values[3] = value(1, 3);
  v.values[4] = value(0, 1) + a(0, 0) * v.values[1] + a(0, 1) * v.values[3];
  return FinishValues(v);
}

RecordCurve Omega2Records(const RationalMatrix& a, const Integer& height, bool closed_form,
                          const SearchOptions& options) {
  CheckTwoByTwo(a);
  const AffineSubspaceParam param(a);
  const Rational det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  auto eval = [&](long h, CandidateSink& sink) {
    const Rational q(h);
    const auto c02 = LiftChoices(-a(0, 1) * q);
    const auto c03 = LiftChoices(a(0, 0) * q);
    const auto c12 = LiftChoices(-a(1, 1) * q);
    const auto c13 = LiftChoices(a(1, 0) * q);
    const auto c01 = LiftChoices(-det * q);
    for (const Integer& w02 : c02)
      for (const Integer& w03 : c03)
        for (const Integer& w12 : c12)
          for (const Integer& w13 : c13)
            for (const Integer& w01 : c01) {
              if (w01 * h - w02 * w13 + w03 * w12 != 0) continue;
              Multivector w(4, 2);
              w.add_term(IndexSet::FromIndices({0, 1}, 4), Rational(w01));
              w.add_term(IndexSet::FromIndices({0, 2}, 4), Rational(w02));
              w.add_term(IndexSet::FromIndices({0, 3}, 4), Rational(w03));
              w.add_term(IndexSet::FromIndices({1, 2}, 4), Rational(w12));
              w.add_term(IndexSet::FromIndices({1, 3}, 4), Rational(w13));
              w.add_term(IndexSet::FromIndices({2, 3}, 4), q);
              const ClosedFormValues v =
                  closed_form ? Omega2ClosedForm(a, w) : Omega2FromContraction(param, w);
              Record r;
              r.height = h;
              r.residual = v.sup;
              r.witness = w;
              bool defined = true;
              if (v.sup == 0) {
                r.value = kInf;
              } else if (h >= 2) {
                r.value = 2 * (-LogAbs(v.sup) / std::log(static_cast<double>(h))) + 1;
              } else {
                defined = false;
              }
              sink.Offer(std::move(r), defined);
            }
  };
  return RunRecordSearch(height, options, [](long) { return 32.0; }, eval);
}

UniformApproximantsReport UniformApproximants(const AffineSubspaceParam& p,
                                              const std::vector<Record>& witnesses, double v,
                                              double v_prime, int grid) {
  const int s = p.s();
  const int n = p.n();
  const Rational bound_factor = 1 + p.max_row_l1();
  UniformApproximantsReport report;
  report.v_prime = v_prime;
  for (const Record& w : witnesses) {
    if (w.value < v) continue;
    if (static_cast<int>(w.p.size()) != s + 1 || static_cast<int>(w.q.size()) != n - s) {
      throw std::invalid_argument("UniformApproximants: witness shape does not match A");
    }
    UniformApproximant u;
    u.p0 = w.p[0];
    for (int i = 1; i <= s; ++i) u.q.push_back(w.p[i]);
    for (const Integer& x : w.q) u.q.push_back(x);
    u.matrix_residual = w.residual;
    Integer pmax = 0, qmax = 0;
    for (const Integer& x : w.p) pmax = std::max<Integer>(pmax, AbsInt(x));
    for (const Integer& x : w.q) qmax = std::max<Integer>(qmax, AbsInt(x));
    u.norm_bound_ok = Rational(pmax) <= bound_factor * Rational(qmax);
    report.approximants.push_back(std::move(u));
  }
  if (report.approximants.size() < 2) {
    throw std::invalid_argument("UniformApproximants: fewer than two witnesses reach the exponent");
  }
  // Grid on [-1, 1]^s.
  const int per_axis = std::max(grid, 2);
  std::vector<int> idx(s, 0);
  while (true) {
    RationalVector x(s);
    for (int i = 0; i < s; ++i) x[i] = Ratio(2 * idx[i], per_axis - 1) - 1;
    report.sample_points.push_back(x);
    int pos = s - 1;
    while (pos >= 0 && idx[pos] == per_axis - 1) idx[pos--] = 0;
    if (pos < 0) break;
    ++idx[pos];
  }
  const RationalMatrix& a = p.matrix();
  for (const UniformApproximant& u : report.approximants) {
    Integer qnorm = 0;
    for (const Integer& x : u.q) qnorm = std::max<Integer>(qnorm, AbsInt(x));
    int bad = 0;
    for (const RationalVector& x : report.sample_points) {
      // y = (x, x̃A), x̃ = (1, x)
      Rational acc = u.p0;
      for (int i = 0; i < s; ++i) acc += x[i] * Rational(u.q[i]);
      for (int k = 0; k < n - s; ++k) {
        Rational yk = a(0, k);
        for (int i = 0; i < s; ++i) yk += x[i] * a(i + 1, k);
        acc += yk * Rational(u.q[s + k]);
      }
      const bool ok = acc == 0 || (qnorm >= 2 && -LogAbs(acc) > v_prime * LogAbs(qnorm));
      if (!ok) ++bad;
    }
    report.violations.push_back(bad);
  }
  std::size_t first_clean = 0;
  while (first_clean < report.violations.size() && report.violations[first_clean] > 0) ++first_clean;
  report.holds = report.violations.back() == 0 &&
                 std::all_of(report.violations.begin() + first_clean, report.violations.end(),
                             [](int b) { return b == 0; });
  return report;
}

Rational HausdorffDimFormula(int n, int s, const ExtendedRational& v) {
  if (s < 0 || s >= n) throw std::invalid_argument("HausdorffDimFormula: need 0 <= s < n");
  if (v.infinite) return Rational((s + 1) * (n - s - 1));
  if (v.value < n) throw std::invalid_argument("HausdorffDimFormula: needs v >= n");
  if (v.value == n) return Rational((s + 1) * (n - s));
  return Rational((s + 1) * (n - s - 1)) + Rational(n + 1) / (v.value + 1);
}

namespace {

Rational RandomRational(std::mt19937_64& rng, int max_den) {
  std::uniform_int_distribution<int> den(1, max_den);
  const int d = den(rng);
  std::uniform_int_distribution<int> num(-2 * d, 2 * d);
  Rational r(num(rng), d);
  r.canonicalize();
  return r;
}

}  // namespace

GapSearchReport GapSearch(int trials, const Integer& height, std::uint64_t seed,
                                 const SearchOptions& options) {
  GapSearchReport report;
  for (int t = 0; t < trials; ++t) {
    if (options.budget.expired()) {
      report.budget_exhausted = true;
      break;
    }
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(t)};
    std::mt19937_64 rng(seq);
    GapCandidate c;
    c.a = RationalMatrix(2, 2);
    switch (t % 3) {
      case 0:
        c.family = "random";
        for (int i = 0; i < 2; ++i)
          for (int k = 0; k < 2; ++k) c.a(i, k) = RandomRational(rng, 97);
        break;
      case 1: {
        // det(A) = 0 with an irrational-looking ratio between the rows.
        c.family = "det0";
        std::uniform_int_distribution<int> prime_pick(0, 5);
        static const int primes[] = {2, 3, 5, 7, 11, 13};
        const double root = std::sqrt(static_cast<double>(primes[prime_pick(rng)]));
        const Rational ratio = FromDouble(root - std::floor(root), 24);
        for (int k = 0; k < 2; ++k) {
          c.a(0, k) = RandomRational(rng, 97);
          c.a(1, k) = c.a(0, k) * ratio;
        }
        break;
      }
      default:
        c.family = "proportional";
        for (int k = 0; k < 2; ++k) c.a(0, k) = RandomRational(rng, 97);
        {
          const Rational ratio = RandomRational(rng, 7);
          for (int k = 0; k < 2; ++k) c.a(1, k) = c.a(0, k) * ratio;
        }
        break;
    }
    const AffineSubspaceParam param(c.a);
    c.order1 = OmegaJRecords(param, 1, height, options);
    c.order2 = OmegaJRecords(param, 2, height, options);
    report.budget_exhausted = report.budget_exhausted || c.order1.budget_exhausted ||
                              c.order2.budget_exhausted;
    if (!c.order1.infinite() && !c.order2.infinite()) {
      c.gap = c.order2.estimate - std::max(3.0, c.order1.estimate);
    }
    report.candidates.push_back(std::move(c));
    const auto& last = report.candidates.back();
    if (last.gap && (!report.best || *last.gap > *report.candidates[*report.best].gap)) {
      report.best = report.candidates.size() - 1;
    }
  }
  return report;
}

}  // namespace dexp

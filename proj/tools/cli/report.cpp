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


#include "report.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <sstream>

namespace dexp::cli {

Json Number(double x) {
  if (std::isnan(x)) return nullptr;
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

Json Estimate(double value, const char* label) { return Json{{"value", Number(value)}, {"label", label}}; }

Json ToJson(const Rational& q) { return ToString(q); }
Json ToJson(const Integer& z) { return ToString(z); }

Json ToJson(const IntegerVector& v) {
  Json a = Json::array();
  for (const Integer& z : v) a.push_back(ToString(z));
  return a;
}

Json ToJson(const RationalMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(ToString(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

std::vector<IntegerVector> EchelonBasis(const Multivector& w) {
  const int dim = w.ambient_dim(), j = w.degree();
  if (w.is_zero() || j == 0) return {};
  // Rows ι_{e_J*} w span the subspace of a decomposable w.
  std::vector<std::vector<Rational>> rows;
  for (const IndexSet& set : AllIndexSets(dim, j - 1)) {
    std::vector<Rational> v(dim);
    bool nonzero = false;
    for (int i = 0; i < dim; ++i) {
      if (set.contains(i)) continue;
      const int sign = ((j - 1) % 2 ? -1 : 1) * InsertionSign(i, set);
      v[i] = sign * w.coeff(set.with(i));
      nonzero = nonzero || v[i] != 0;
    }
    if (nonzero) rows.push_back(std::move(v));
  }
  // Reduced row echelon form over Q.
  std::size_t lead = 0;
  std::vector<std::vector<Rational>> out;
  for (int col = 0; col < dim && lead < rows.size(); ++col) {
    std::size_t piv = lead;
    while (piv < rows.size() && rows[piv][col] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[lead]);
    const Rational inv = 1 / rows[lead][col];
    for (Rational& x : rows[lead]) x *= inv;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == lead || rows[r][col] == 0) continue;
      const Rational f = rows[r][col];
      for (int c = 0; c < dim; ++c) rows[r][c] -= f * rows[lead][c];
    }
    ++lead;
  }
  std::vector<IntegerVector> basis;
  for (std::size_t r = 0; r < lead; ++r) {
    Integer den = 1, g = 0;
    for (const Rational& x : rows[r]) den = den / Gcd(den, x.get_den()) * x.get_den();
    IntegerVector v;
    for (const Rational& x : rows[r]) {
      v.push_back(x.get_num() * (den / x.get_den()));
      g = Gcd(g, v.back());
    }
    if (g > 1)
      for (Integer& z : v) z /= g;
    basis.push_back(std::move(v));
  }
  return basis;
}

Json ToJson(const Record& r) {
  Json j{{"height", ToJson(r.height)}, {"residual", ToJson(r.residual)}, {"value", Number(r.value)}};
  if (!r.q.empty()) j["q"] = ToJson(r.q);
  if (!r.p.empty()) j["p"] = ToJson(r.p);
  if (!r.witness.is_zero()) {
    j["witness"] = FormatMultivector(r.witness);
    Json basis = Json::array();
    for (const IntegerVector& v : EchelonBasis(r.witness)) basis.push_back(ToJson(v));
    j["span_basis"] = basis;
  }
  return j;
}

Json ToJson(const RecordCurve& c) {
  Json records = Json::array(), best = Json::array();
  for (const Record& r : c.records) records.push_back(ToJson(r));
  for (const Record& r : c.best_approximations) best.push_back(ToJson(r));
  return Json{{"estimate", Estimate(c.estimate, "lower-bound")},
              {"tail_estimate", Estimate(c.tail_estimate, "finite-height")},
              {"infinite", c.infinite()},
              {"exhausted_height", ToJson(c.exhausted_height)},
              {"budget_exhausted", c.budget_exhausted},
              {"records", records},
              {"best_approximations", best}};
}

Json ToJson(const OrderExponentReport& r) {
  Json curves = Json::object();
  for (const auto& [order, curve] : r.curves) curves[std::to_string(order)] = ToJson(curve);
  return Json{{"curves", curves},
              {"combined", Estimate(r.combined, "lower-bound")},
              {"rows_proportional", r.rows_proportional},
              {"columns_proportional", r.columns_proportional},
              {"equality_expected", r.equality_expected},
              {"annotation", r.annotation}};
}

Json ToJson(const GapSearchReport& r) {
  Json cands = Json::array();
  for (const GapCandidate& c : r.candidates) {
    cands.push_back(Json{{"family", c.family},
                         {"matrix", ToJson(c.a)},
                         {"omega1", Estimate(c.order1.estimate, "lower-bound")},
                         {"omega2", Estimate(c.order2.estimate, "lower-bound")},
                         {"gap", c.gap ? Number(*c.gap) : Json(nullptr)}});
  }
  Json j{{"candidates", cands}, {"budget_exhausted", r.budget_exhausted}, {"label", "evidence-only"}};
  j["best"] = r.best ? Json(*r.best) : Json(nullptr);
  return j;
}

Json ToJson(const TraceResult& t, const GammaEstimate& g) {
  Json points = Json::array();
  const int n = static_cast<int>(t.trace.y.size());
  for (std::size_t i = 0; i < t.trace.points.size(); ++i) {
    const TracePoint& p = t.trace.points[i];
    Json pt{{"lambda", ToJson(p.lambda)}, {"delta2", ToJson(p.delta2)}, {"coeffs", ToJson(p.coeffs)},
            {"running_max", Number(g.running_max[i])}};
    if (p.delta_interval) pt["delta_interval"] = Json::array({Number(p.delta_interval->first), Number(p.delta_interval->second)});
    points.push_back(pt);
  }
  Json recs = Json::array();
  for (const GammaRecord& r : g.records) recs.push_back(Json{{"lambda", ToJson(r.lambda)}, {"t", Number(r.t)}, {"c", Number(r.c)}});
  return Json{{"points", points},
              {"gamma_records", recs},
              {"gamma", Estimate(g.estimate, "lower-bound")},
              {"omega_from_gamma", Estimate(VFromC(std::max(g.estimate, 0.0), n), "lower-bound")},
              {"exhausted", t.exhausted}};
}

Json ToJson(const IdentityReport& r) {
  return Json{{"name", r.name}, {"cases", r.cases}, {"failures", r.failures},
              {"details", r.failure_details}, {"label", "exact"}, {"passed", r.passed()}};
}

Json ToJson(const EscapeBoundReport& r, const EscapeBoundConfig& cfg) {
  Json rows = Json::array();
  for (const EscapeBoundRow& row : r.rows) {
    rows.push_back(Json{{"eps", Number(row.eps)},
                        {"escaped", row.escaped},
                        {"fraction", Number(row.fraction)},
                        {"sigma", Number(row.sigma)},
                        {"ci95", Json::array({Number(row.ci_low), Number(row.ci_high)})},
                        {"label", "monte-carlo-with-ci"},
                        {"bound", Number(row.bound)},
                        {"applicable", row.applicable},
                        {"violation", row.violation}});
  }
  return Json{{"k", r.k},
              {"t", Number(cfg.t)},
              {"constants", Json{{"C", Number(cfg.goodness.c)}, {"alpha", Number(cfg.goodness.alpha)},
                                 {"N", cfg.space.besicovitch}, {"D", Number(cfg.space.federer)}}},
              {"rho", Json{{"value", Number(r.rho)}, {"label", "upper-estimate"},
                           {"subgroups", r.rho_subgroups}, {"height_cutoff", cfg.rho_height},
                           {"grid", cfg.rho_grid}}},
              {"hypothesis_failed", r.hypothesis_failed},
              {"samples", r.samples},
              {"budget_exhausted", r.budget_exhausted},
              {"rows", rows},
              {"slope", r.slope ? Number(*r.slope) : Json(nullptr)},
              {"slope_points", r.slope_points},
              {"bound_holds", r.bound_holds},
              {"slope_ok", r.slope_ok}};
}

Json ToJson(const MarkingReport& r, const MarkingConfig& cfg) {
  return Json{{"k", cfg.k},
              {"lambda", ToJson(cfg.lambda)},
              {"rho", ToJson(cfg.rho)},
              {"eps", ToJson(cfg.eps)},
              {"points", r.points},
              {"marked", r.marked},
              {"escaped", r.escaped},
              {"max_poset", r.max_poset},
              {"violations", r.violations},
              {"label", "exact"},
              {"holds", r.holds}};
}

std::string Sha256Hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  std::ostringstream s;
  for (unsigned int i = 0; i < len; ++i) s << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return s.str();
}

std::string UtcNow() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

std::string Dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace dexp::cli

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


#include "dexp/identities.hpp"

#include <chrono>
#include <sstream>
#include <stdexcept>

#include "dexp/exponents.hpp"
#include "dexp/flows.hpp"
#include "dexp/parallel.hpp"
#include "dexp/subspaces.hpp"

namespace dexp {
namespace {

constexpr int kMaxDetails = 5;

struct CaseOutcome {
  bool ok = true;
  std::string detail;
};

template <typename Fn>
IdentityReport RunSuite(std::string name, int cases, int workers, Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<CaseOutcome> out =
      ParallelMap<CaseOutcome>(static_cast<std::size_t>(cases), workers, std::forward<Fn>(fn));
  IdentityReport r;
  r.name = std::move(name);
  r.cases = cases;
  for (const CaseOutcome& c : out) {
    if (c.ok) continue;
    ++r.failures;
    if (r.failure_details.size() < kMaxDetails) r.failure_details.push_back(c.detail);
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

int Uniform(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

Multivector RandomMultivector(std::mt19937_64& rng, int dim, int degree) {
  Multivector w(dim, degree);
  for (const IndexSet& set : AllIndexSets(dim, degree)) {
    if (Uniform(rng, 0, 1) == 0) continue;
    w.add_term(set, Rational(Uniform(rng, -9, 9)));
  }
  return w;
}

RationalVector RandomVector(std::mt19937_64& rng, int n) {
  RationalVector y(n);
  for (Rational& v : y) {
    v = Ratio(Uniform(rng, -20, 20), Uniform(rng, 1, 9));
    v.canonicalize();
  }
  return y;
}

bool SameWitness(const Record& a, const Record& b) {
  if (a.q == b.q && a.p == b.p) return true;
  if (a.q.size() != b.q.size() || a.p.size() != b.p.size()) return false;
  for (std::size_t i = 0; i < a.q.size(); ++i)
    if (a.q[i] != -b.q[i]) return false;
  for (std::size_t i = 0; i < a.p.size(); ++i)
    if (a.p[i] != -b.p[i]) return false;
  return true;
}

std::string CompareRecords(const std::vector<Record>& x, const std::vector<Record>& y, const char* what) {
  if (x.size() != y.size()) return std::string(what) + " lengths differ";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].height != y[i].height) return std::string(what) + " heights differ at " + std::to_string(i);
    if (x[i].residual != y[i].residual) return std::string(what) + " residuals differ at " + std::to_string(i);
    if (!SameWitness(x[i], y[i])) return std::string(what) + " witnesses differ at " + std::to_string(i);
  }
  return {};
}

}  // namespace

Multivector MatrixAction(const RationalMatrix& h, const Multivector& w) {
  const int dim = w.ambient_dim();
  if (static_cast<int>(h.rows()) != dim || static_cast<int>(h.cols()) != dim) {
    throw std::invalid_argument("MatrixAction: dimension mismatch");
  }
  std::vector<Multivector> columns;
  for (int c = 0; c < dim; ++c) {
    std::vector<Rational> col(dim);
    for (int r = 0; r < dim; ++r) col[r] = h(r, c);
    columns.push_back(Multivector::FromVector(col));
  }
  Multivector out(dim, w.degree());
  for (const auto& [set, coeff] : w.terms()) {
    const std::vector<int> idx = set.indices();
    if (idx.empty()) {
      out.add_term(set, coeff);
      continue;
    }
    Multivector acc = columns[idx[0]];
    for (std::size_t i = 1; i < idx.size(); ++i) acc = Wedge(acc, columns[idx[i]]);
    out += acc * coeff;
  }
  return out;
}

std::mt19937_64 CaseStream(std::uint64_t seed, std::uint64_t suite, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(suite), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

RationalMatrix RandomRationalMatrix(std::mt19937_64& rng, int rows, int cols) {
  // One shared denominator keeps the sup-norm search on machine integers.
  const int den = Uniform(rng, 50, 400);
  RationalMatrix a(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      a(i, j) = Ratio(Uniform(rng, -den, den), den);
      a(i, j).canonicalize();
    }
  return a;
}

IdentityReport ContractionIdentitySuite(int cases, int max_n, std::uint64_t seed, int workers) {
  return RunSuite("contraction_identity", cases, workers, [=](std::size_t i) {
    std::mt19937_64 rng = CaseStream(seed, 1, i);
    const int n = Uniform(rng, 1, max_n);
    const int j = Uniform(rng, 1, n + 1);
    const Multivector w = RandomMultivector(rng, n + 1, j);
    const ContractionImage c = Contract(w);
    const Multivector lhs = Wedge(Multivector::Basis(IndexSet::FromIndices({0}, n + 1)), c.components[0]);
    CaseOutcome o;
    o.ok = lhs == w - ProjectV0(w);
    if (!o.ok) o.detail = "w = " + FormatMultivector(w);
    return o;
  });
}

IdentityReport TwoPathSuite(int cases, int max_n, const std::vector<Rational>& lambdas,
                            std::uint64_t seed, int workers) {
  return RunSuite("two_path_action", cases, workers, [=](std::size_t i) {
    std::mt19937_64 rng = CaseStream(seed, 2, i);
    const int n = Uniform(rng, 1, max_n);
    const int j = Uniform(rng, 1, n + 1);
    const Multivector w = RandomMultivector(rng, n + 1, j);
    const RationalVector y = RandomVector(rng, n);
    CaseOutcome o;
    for (const Rational& lambda : lambdas) {
      const ScaleParam p{lambda, n};
      const RationalMatrix g = GMatrix(p), u = UMatrix(y);
      RationalMatrix h(n + 1, n + 1);
      for (int r = 0; r <= n; ++r)
        for (int c = 0; c <= n; ++c) h(r, c) = g(r, r) * u(r, c);
      if (GAct(p, UEmbed(y, w)) != MatrixAction(h, w)) {
        o.ok = false;
        o.detail = "lambda = " + ToString(lambda) + ", w = " + FormatMultivector(w);
        break;
      }
    }
    return o;
  });
}

IdentityReport FirstOrderEqualitySuite(int cases, int max_rows, int max_cols, long height,
                                       std::uint64_t seed, int workers) {
  return RunSuite("first_order_equality", cases, workers, [=](std::size_t i) {
    std::mt19937_64 rng = CaseStream(seed, 3, i);
    const int rows = Uniform(rng, 1, max_rows);
    const int cols = Uniform(rng, 1, max_cols);
    const RationalMatrix a = RandomRationalMatrix(rng, rows, cols);
    SearchOptions opt;
    const RecordCurve direct = OmegaRecords(a, height, opt);
    const RecordCurve lifted = OmegaJRecords(AffineSubspaceParam(a), 1, height, opt);
    CaseOutcome o;
    std::string diff = CompareRecords(direct.records, lifted.records, "records");
    if (diff.empty()) diff = CompareRecords(direct.best_approximations, lifted.best_approximations, "best");
    if (!diff.empty()) {
      o.ok = false;
      std::ostringstream s;
      s << rows << "x" << cols << " case " << i << ": " << diff;
      o.detail = s.str();
    }
    return o;
  });
}

}  // namespace dexp

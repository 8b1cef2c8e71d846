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

#ifndef DEXP_EXPONENTS_HPP_
#define DEXP_EXPONENTS_HPP_

// Record searches for Diophantine exponents. Every estimate produced here is
// a lower bound at finite height: ω is a limsup and nothing finite certifies
// an upper bound.

#include <functional>
#include <optional>
#include <vector>

#include "dexp/budget.hpp"
#include "dexp/flows.hpp"
#include "dexp/rational.hpp"

namespace dexp {

enum class Norm { kSup, kEuclid };

struct Record {
  Integer height;       // ‖q‖_∞ (|q| for the simultaneous search)
  IntegerVector q;
  IntegerVector p;
  Rational residual;    // sup norm of the approximation error, exact
  double value = 0;     // +∞ for a zero residual
  Multivector witness;  // higher-order searches only
};

struct RecordCurve {
  std::vector<Record> records;              // heights and values strictly increasing
  std::vector<Record> best_approximations;  // residuals strictly decreasing
  double estimate = 0;                      // last record value (0 when none)
  double tail_estimate = 0;                 // value at the last best approximation
  Integer exhausted_height = 0;             // every height up to here was searched
  bool budget_exhausted = false;

  bool infinite() const;
};

/// Interleaves two curves over disjoint height ranges and re-filters.
RecordCurve MergeCurves(const RecordCurve& a, const RecordCurve& b);

struct SearchOptions {
  int workers = 1;
  SearchBudget budget;
  Norm norm = Norm::kSup;
  Integer min_height = 1;  // search heights min_height..H
};

/// Receives the candidates of one height. `value_defined` is false for
/// candidates that may improve the residual but carry no exponent value.
class CandidateSink {
 public:
  virtual ~CandidateSink() = default;
  virtual void Offer(Record record, bool value_defined) = 0;
};

using HeightEvaluator = std::function<void(long height, CandidateSink& sink)>;

/// Runs `evaluate` over heights options.min_height..H and folds the results
/// into a curve. `count(h)` is the number of candidates at height h and is
/// charged against the node budget before any work starts.
RecordCurve RunRecordSearch(const Integer& height, const SearchOptions& options,
                            const std::function<double(long)>& count,
                            const HeightEvaluator& evaluate);

/// Integer vectors of dimension n with ‖q‖_∞ = h and first nonzero entry
/// positive, in lexicographic order.
void ForEachVectorAtHeight(int n, long h, const std::function<void(const std::vector<long>&)>& fn);
double CandidatesAtHeight(int n, long h);

/// ‖Aq + p‖ < ‖q‖^{-v}: q over 0 < ‖q‖_∞ <= H with first nonzero entry
/// positive, height then lexicographic order; p nearest to -Aq. Finite values
/// need height >= 2; a zero residual is recorded as +∞ at any height.
RecordCurve OmegaRecords(const RationalMatrix& a, const Integer& height,
                         const SearchOptions& options = {});

/// |yq + p| < Π_+(q)^{-v/n}, Π_+(q) the product of the nonzero |q_i|.
RecordCurve OmegaMultRecords(const RationalVector& y, const Integer& height,
                             const SearchOptions& options = {});

/// ‖qy + p‖ < |q|^{-v} for q = 1..H.
RecordCurve SigmaRecords(const RationalVector& y, const Integer& height,
                         const SearchOptions& options = {});

/// Candidate value of a single q against A, for checks and tests.
Record EvaluateCandidate(const RationalMatrix& a, const IntegerVector& q, Norm norm = Norm::kSup);

struct TransferenceReport {
  double upper = 0;        // (ω - n + 1)/n
  double lower = 0;        // 1/(n - 1 + n/ω)
  double upper_slack = 0;  // upper - σ
  double lower_slack = 0;  // σ - lower
  bool holds = false;
};
TransferenceReport TransferenceCheck(double omega, double sigma, int n, double tolerance = 1e-9);

struct Certificate {
  IntegerVector q;
  IntegerVector p;
  Rational residual;           // exact sup-norm residual
  Rational certified_exponent; // residual <= ‖q‖^{-certified_exponent}, checked exactly
  double exponent = 0;         // exact value -log residual / log ‖q‖
};

struct CertifiedInstance {
  RationalMatrix entries;
  std::vector<Integer> exponents;  // c_1 < c_2 < ...: the series is Σ 2^{-c_k}
  std::vector<Certificate> certificates;
  ExtendedRational target;
};

/// Lacunary series Σ_{k<=K} 2^{-c_k} with c_1 = 1 and c_{k+1} = ⌈(v+1)c_k⌉,
/// or c_k = k! for v = ∞. Column 0 holds (i+1) times the series; the other
/// columns are fixed generic truncations. Certificates use q = 2^{c_k} e_0.
/// Throws std::invalid_argument when v <= n/m or K < 2.
CertifiedInstance BuildLiouville(int m, int n, const ExtendedRational& v, int depth);

/// Re-checks every certificate of `inst` exactly.
bool ValidateCertificates(const CertifiedInstance& inst);

}  // namespace dexp

#endif  // DEXP_EXPONENTS_HPP_

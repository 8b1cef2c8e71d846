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

#include "dexp/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <functional>
#include <limits>
#include <stdexcept>

#include "dexp/lattices.hpp"
#include "dexp/parallel.hpp"

namespace dexp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct HeightResult final : CandidateSink {
  std::optional<Record> best_value;
  std::optional<Record> best_residual;

  void Offer(Record r, bool value_defined) override {
    if (value_defined && (!best_value || r.value > best_value->value)) best_value = r;
    if (!best_residual || r.residual < best_residual->residual) best_residual = std::move(r);
  }
};


RecordCurve Refilter(const std::vector<const Record*>& by_value,
                     const std::vector<const Record*>& by_residual) {
  RecordCurve curve;
  double best = -kInf;
  for (const Record* r : by_value) {
    if (r->value > best) {
      curve.records.push_back(*r);
      best = r->value;
    }
  }
  if (!curve.records.empty()) curve.estimate = curve.records.back().value;
  for (const Record* r : by_residual) {
    if (curve.best_approximations.empty() || r->residual < curve.best_approximations.back().residual) {
      curve.best_approximations.push_back(*r);
    }
  }
  for (auto it = curve.best_approximations.rbegin(); it != curve.best_approximations.rend(); ++it) {
    if (it->residual == 0 || it->height >= 2) {
      curve.tail_estimate = it->value;
      break;
    }
  }
  return curve;
}

long ToLong(const Integer& h) {
  if (!h.fits_slong_p()) throw std::invalid_argument("height too large");
  return h.get_si();
}

}  // namespace

RecordCurve RunRecordSearch(const Integer& height, const SearchOptions& options,
                            const std::function<double(long)>& count,
                            const HeightEvaluator& evaluate) {
  if (height < 1) throw std::invalid_argument("height must be at least 1");
  const long lo = std::max<long>(1, ToLong(options.min_height));
  long hi = ToLong(height);
  bool exhausted = false;
  // Node cap: fixed before any work is split, so results never depend on
  // the worker count.
  double nodes = 0;
  for (long h = lo; h <= hi; ++h) {
    nodes += count(h);
    if (nodes > static_cast<double>(options.budget.max_nodes)) {
      hi = h - 1;
      exhausted = true;
      break;
    }
  }
  const long span = std::max<long>(0, hi - lo + 1);
  const long chunk = std::max<long>(1, std::min<long>(4096, span / (16L * std::max(options.workers, 1)) + 1));
  const std::size_t chunks = static_cast<std::size_t>((span + chunk - 1) / chunk);
  const SearchBudget& budget = options.budget;
  auto run_chunk = [&](std::size_t c) {
    if (budget.expired()) throw BudgetExceeded("time budget exhausted");
    std::vector<HeightResult> out;
    const long first = lo + static_cast<long>(c) * chunk;
    const long last = std::min(hi, first + chunk - 1);
    for (long h = first; h <= last; ++h) {
      out.emplace_back();
      evaluate(h, out.back());
    }
    return out;
  };
  PartialMap<std::vector<HeightResult>> partial =
      ParallelMapPartial<std::vector<HeightResult>>(chunks, options.workers, run_chunk);
  if (partial.error) {
    try {
      std::rethrow_exception(partial.error);
    } catch (const BudgetExceeded&) {
      exhausted = true;
    }
  }
  std::vector<const Record*> by_value;
  std::vector<const Record*> by_residual;
  long searched = lo - 1;
  for (const auto& block : partial.results) {
    for (const HeightResult& hr : block) {
      ++searched;
      if (hr.best_value) by_value.push_back(&*hr.best_value);
      if (hr.best_residual) by_residual.push_back(&*hr.best_residual);
    }
  }
  RecordCurve curve = Refilter(by_value, by_residual);
  curve.exhausted_height = searched;
  curve.budget_exhausted = exhausted;
  return curve;
}

void ForEachVectorAtHeight(int n, long h, const std::function<void(const std::vector<long>&)>& fn) {
  std::vector<long> q(n, 0);
  std::function<void(int, bool, bool)> rec = [&](int i, bool nonzero, bool at_h) {
    if (i == n) {
      if (at_h) fn(q);
      return;
    }
    const long start = nonzero ? -h : 0;
    const bool edge_only = i == n - 1 && !at_h;
    for (long v = start; v <= h; v = (edge_only && v == -h) ? h : v + 1) {
      if (edge_only && v != h && v != -h) v = h;
      q[i] = v;
      rec(i + 1, nonzero || v != 0, at_h || v == h || v == -h);
    }
    q[i] = 0;
  };
  rec(0, false, false);
}

double CandidatesAtHeight(int n, long h) {
  return (std::pow(2.0 * h + 1, n) - std::pow(2.0 * h - 1, n)) / 2;
}

namespace {

IntegerVector ToIntegers(const std::vector<long>& v) {
  IntegerVector out;
  out.reserve(v.size());
  for (long x : v) out.emplace_back(x);
  return out;
}

// Fills p with the nearest integers to -x and returns the residual x + p.
RationalVector NearestResidual(const RationalVector& x, IntegerVector& p) {
  p.resize(x.size());
  RationalVector r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    p[i] = NearestInteger(-x[i]);
    r[i] = x[i] + Rational(p[i]);
  }
  return r;
}

Rational SupOf(const RationalVector& r) {
  Rational m = 0;
  for (const Rational& x : r) m = std::max(m, Abs(x));
  return m;
}

double LogEuclid(const RationalVector& r) {
  Rational s = 0;
  for (const Rational& x : r) s += x * x;
  return 0.5 * LogAbs(s);
}

double LogEuclid(const IntegerVector& q) {
  Integer s = 0;
  for (const Integer& x : q) s += x * x;
  return 0.5 * LogAbs(s);
}

}  // namespace

bool RecordCurve::infinite() const { return std::isinf(estimate) && estimate > 0; }

RecordCurve MergeCurves(const RecordCurve& a, const RecordCurve& b) {
  auto merged = [](const std::vector<Record>& x, const std::vector<Record>& y) {
    std::vector<const Record*> all;
    for (const Record& r : x) all.push_back(&r);
    for (const Record& r : y) all.push_back(&r);
    std::stable_sort(all.begin(), all.end(),
                     [](const Record* l, const Record* r) { return l->height < r->height; });
    return all;
  };
  RecordCurve out = Refilter(merged(a.records, b.records),
                             merged(a.best_approximations, b.best_approximations));
  out.exhausted_height = std::max(a.exhausted_height, b.exhausted_height);
  out.budget_exhausted = a.budget_exhausted || b.budget_exhausted;
  return out;
}

namespace {

// D·A as machine integers, for heights where every partial sum fits.
struct ScaledMatrix {
  std::int64_t den = 1;
  std::size_t rows = 0, cols = 0;
  std::vector<std::int64_t> num;

  static std::optional<ScaledMatrix> Make(const RationalMatrix& a, const Integer& height) {
    Integer d = 1;
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j) {
        const Integer& den = a(i, j).get_den();
        d = d / Gcd(d, den) * den;
      }
    Integer bound = 0;
    ScaledMatrix m;
    m.rows = a.rows();
    m.cols = a.cols();
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j) {
        const Integer v = a(i, j).get_num() * (d / a(i, j).get_den());
        bound += abs(v);
        if (!v.fits_slong_p()) return std::nullopt;
        m.num.push_back(v.get_si());
      }
    const Integer limit = Integer(1) << 62;
    if (!d.fits_slong_p() || bound * height >= limit) return std::nullopt;
    m.den = d.get_si();
    return m;
  }

  // max_i dist(N_i·q, D·Z); stops early once `cutoff` is reached.
  std::int64_t Residual(const std::vector<long>& q, std::int64_t cutoff) const {
    std::int64_t worst = 0;
    for (std::size_t i = 0; i < rows; ++i) {
      std::int64_t x = 0;
      for (std::size_t j = 0; j < cols; ++j) x += num[i * cols + j] * q[j];
      std::int64_t m = x % den;
      if (m < 0) m += den;
      worst = std::max(worst, std::min(m, den - m));
      if (worst >= cutoff) return worst;
    }
    return worst;
  }
};

}  // namespace

Record EvaluateCandidate(const RationalMatrix& a, const IntegerVector& q, Norm norm) {
  if (q.size() != a.cols()) throw std::invalid_argument("EvaluateCandidate: dimension mismatch");
  RationalVector x(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Rational acc = 0;
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (q[j] != 0) acc += a(i, j) * Rational(q[j]);
    }
    x[i] = acc;
  }
  Record r;
  r.q = q;
  for (const Integer& v : q) r.height = std::max<Integer>(r.height, abs(v));
  RationalVector res = NearestResidual(x, r.p);
  r.residual = SupOf(res);
  if (r.residual == 0) {
    r.value = kInf;
  } else if (r.height >= 2) {
    r.value = norm == Norm::kSup ? -LogAbs(r.residual) / LogAbs(r.height)
                                 : -LogEuclid(res) / LogEuclid(q);
  }
  return r;
}

RecordCurve OmegaRecords(const RationalMatrix& a, const Integer& height, const SearchOptions& options) {
  if (a.rows() == 0 || a.cols() == 0) throw std::invalid_argument("OmegaRecords: empty matrix");
  const int n = static_cast<int>(a.cols());
  HeightEvaluator eval = [&](long h, CandidateSink& sink) {
    ForEachVectorAtHeight(n, h, [&](const std::vector<long>& q) {
      Record r = EvaluateCandidate(a, ToIntegers(q), options.norm);
      const bool defined = r.residual == 0 || h >= 2;
      sink.Offer(std::move(r), defined);
    });
  };
  const std::optional<ScaledMatrix> scaled = ScaledMatrix::Make(a, height);
  if (options.norm == Norm::kSup && scaled) {
    // In sup norm the value at a fixed height is monotone in the residual, so
    // only the earliest minimal residual needs an exact evaluation.
    eval = [&](long h, CandidateSink& sink) {
      std::vector<long> best_q;
      std::int64_t best = scaled->den;
      ForEachVectorAtHeight(n, h, [&](const std::vector<long>& q) {
        const std::int64_t r = scaled->Residual(q, best);
        if (r < best) {
          best = r;
          best_q = q;
        }
      });
      if (best_q.empty()) return;
      Record r = EvaluateCandidate(a, ToIntegers(best_q), options.norm);
      const bool defined = r.residual == 0 || h >= 2;
      sink.Offer(std::move(r), defined);
    };
  }
  return RunRecordSearch(height, options, [n](long h) { return CandidatesAtHeight(n, h); }, eval);
}

RecordCurve OmegaMultRecords(const RationalVector& y, const Integer& height, const SearchOptions& options) {
  if (y.empty()) throw std::invalid_argument("OmegaMultRecords: empty vector");
  const int n = static_cast<int>(y.size());
  RationalMatrix a(1, n);
  for (int j = 0; j < n; ++j) a(0, j) = y[j];
  auto eval = [&](long h, CandidateSink& sink) {
    ForEachVectorAtHeight(n, h, [&](const std::vector<long>& qv) {
      Record r = EvaluateCandidate(a, ToIntegers(qv), Norm::kSup);
      Integer prod = 1;
      for (long x : qv)
        if (x != 0) prod *= std::labs(x);
      bool defined = true;
      if (r.residual == 0) {
        r.value = kInf;
      } else if (prod >= 2) {
        r.value = -LogAbs(r.residual) / (LogAbs(prod) / n);
      } else {
        defined = false;
      }
      sink.Offer(std::move(r), defined);
    });
  };
  return RunRecordSearch(height, options, [n](long h) { return CandidatesAtHeight(n, h); }, eval);
}

RecordCurve SigmaRecords(const RationalVector& y, const Integer& height, const SearchOptions& options) {
  if (y.empty()) throw std::invalid_argument("SigmaRecords: empty vector");
  auto eval = [&](long h, CandidateSink& sink) {
    RationalVector x(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) x[i] = y[i] * h;
    Record r;
    r.height = h;
    r.q = {Integer(h)};
    RationalVector res = NearestResidual(x, r.p);
    r.residual = SupOf(res);
    if (r.residual == 0) {
      r.value = kInf;
    } else if (h >= 2) {
      const double num = options.norm == Norm::kSup ? LogAbs(r.residual) : LogEuclid(res);
      r.value = -num / std::log(static_cast<double>(h));
    }
    const bool defined = r.residual == 0 || h >= 2;
    sink.Offer(std::move(r), defined);
  };
  return RunRecordSearch(height, options, [](long) { return 1.0; }, eval);
}

TransferenceReport TransferenceCheck(double omega, double sigma, int n, double tolerance) {
  if (n < 1) throw std::invalid_argument("TransferenceCheck: n must be positive");
  TransferenceReport r;
  r.upper = std::isinf(omega) ? kInf : (omega - n + 1) / n;
  const double denom = (n - 1) + (std::isinf(omega) ? 0.0 : n / omega);
  r.lower = denom == 0 ? kInf : 1 / denom;
  r.upper_slack = (std::isinf(r.upper) && std::isinf(sigma)) ? 0 : r.upper - sigma;
  r.lower_slack = (std::isinf(r.lower) && std::isinf(sigma)) ? 0 : sigma - r.lower;
  r.holds = r.upper_slack >= -tolerance && r.lower_slack >= -tolerance;
  return r;
}

namespace {

std::vector<int> SmallPrimes(std::size_t count) {
  std::vector<int> primes;
  for (int c = 2; primes.size() < count; ++c) {
    bool prime = true;
    for (int p : primes) {
      if (p * p > c) break;
      if (c % p == 0) {
        prime = false;
        break;
      }
    }
    if (prime) primes.push_back(c);
  }
  return primes;
}

Integer Factorial(int k) {
  Integer f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

Integer PowerOfTwo(const Integer& e) {
  Integer out;
  mpz_ui_pow_ui(out.get_mpz_t(), 2, e.get_ui());
  return out;
}

int CeilLog2(int m) {
  int e = 0;
  while ((1 << e) < m) ++e;
  return e;
}

}  // namespace

CertifiedInstance BuildLiouville(int m, int n, const ExtendedRational& v, int depth) {
  if (m < 1 || n < 1) throw std::invalid_argument("BuildLiouville: bad shape");
  if (depth < 2) throw std::invalid_argument("BuildLiouville: depth must be at least 2");
  if (!v.infinite && v.value * m <= n) {
    throw std::invalid_argument("BuildLiouville: infeasible target, need v > n/m");
  }
  CertifiedInstance inst;
  inst.target = v;
  for (int k = 1; k <= depth; ++k) {
    if (v.infinite) {
      inst.exponents.push_back(Factorial(k));
    } else if (k == 1) {
      inst.exponents.emplace_back(1);
    } else {
      inst.exponents.push_back(Ceil((v.value + 1) * Rational(inst.exponents.back())));
    }
  }
  const Integer& top = inst.exponents.back();
  if (top > 1 << 24) throw std::invalid_argument("BuildLiouville: depth too large");
  Integer numerator = 0;
  for (const Integer& c : inst.exponents) numerator += PowerOfTwo(top - c);
  Rational series(numerator, PowerOfTwo(top));
  series.canonicalize();

  inst.entries = RationalMatrix(m, n);
  const std::vector<int> primes = SmallPrimes(static_cast<std::size_t>(m * n));
  for (int i = 0; i < m; ++i) {
    inst.entries(i, 0) = series * (i + 1);
    for (int j = 1; j < n; ++j) {
      const double root = std::sqrt(static_cast<double>(primes[i * n + j]));
      inst.entries(i, j) = FromDouble(root - std::floor(root), 40);
    }
  }
  const int slack_bits = CeilLog2(m) + 1;
  for (int k = 0; k + 1 < depth; ++k) {
    const Integer& ck = inst.exponents[k];
    const Integer& next = inst.exponents[k + 1];
    IntegerVector q(n, 0);
    q[0] = PowerOfTwo(ck);
    Record r = EvaluateCandidate(inst.entries, q);
    Certificate cert;
    cert.q = q;
    cert.p = r.p;
    cert.residual = r.residual;
    cert.exponent = r.value;
    cert.certified_exponent = Ratio(next - ck - slack_bits, ck);
    inst.certificates.push_back(cert);
  }
  if (!ValidateCertificates(inst)) {
    throw std::logic_error("BuildLiouville: certificate failed exact validation");
  }
  return inst;
}

bool ValidateCertificates(const CertifiedInstance& inst) {
  for (const Certificate& c : inst.certificates) {
    Record r = EvaluateCandidate(inst.entries, c.q);
    if (r.residual != c.residual || r.p != c.p) return false;
    // ‖q‖ = 2^e, so ‖q‖^{-L} = 2^{-eL} with eL an integer.
    const Integer& h = r.height;
    const unsigned long e = mpz_scan1(h.get_mpz_t(), 0);
    if (h != PowerOfTwo(Integer(e))) return false;
    const Rational scaled = c.certified_exponent * Rational(Integer(e));
    if (scaled.get_den() != 1) return false;
    const Integer bits = scaled.get_num();
    Rational bound = bits >= 0 ? Rational(1, PowerOfTwo(bits)) : Rational(PowerOfTwo(-bits));
    if (c.residual > bound) return false;
  }
  return true;
}

}  // namespace dexp

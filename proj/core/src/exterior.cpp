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

#include "dexp/exterior.hpp"

#include <bit>
#include <sstream>
#include <stdexcept>

namespace dexp {

IndexSet IndexSet::FromIndices(const std::vector<int>& indices, int ambient_dim) {
  if (ambient_dim < 0 || ambient_dim > 31) {
    throw std::invalid_argument("IndexSet: ambient dimension out of range");
  }
  std::uint32_t mask = 0;
  int prev = -1;
  for (int i : indices) {
    if (i <= prev || i >= ambient_dim) {
      throw std::invalid_argument("IndexSet: indices must increase and lie below k");
    }
    mask |= 1u << i;
    prev = i;
  }
  return FromMask(mask, ambient_dim);
}

IndexSet IndexSet::FromMask(std::uint32_t mask, int ambient_dim) {
  if (ambient_dim < 32 && (mask >> ambient_dim) != 0) {
    throw std::invalid_argument("IndexSet: index outside ambient dimension");
  }
  IndexSet s;
  s.mask_ = mask;
  s.ambient_dim_ = ambient_dim;
  return s;
}

int IndexSet::size() const { return std::popcount(mask_); }

int IndexSet::min() const {
  if (mask_ == 0) throw std::logic_error("IndexSet::min on empty set");
  return std::countr_zero(mask_);
}

std::vector<int> IndexSet::indices() const {
  std::vector<int> out;
  for (std::uint32_t m = mask_; m != 0; m &= m - 1) out.push_back(std::countr_zero(m));
  return out;
}

bool operator<(const IndexSet& a, const IndexSet& b) {
  if (a.ambient_dim_ != b.ambient_dim_) return a.ambient_dim_ < b.ambient_dim_;
  if (a.size() != b.size()) return a.size() < b.size();
  std::uint32_t diff = a.mask_ ^ b.mask_;
  if (diff == 0) return false;
  // The set owning the lowest differing index comes first.
  std::uint32_t low = diff & (~diff + 1);
  return (a.mask_ & low) != 0;
}

std::vector<IndexSet> IndexSetsInRange(int ambient_dim, int degree, int lo, int hi) {
  std::vector<IndexSet> out;
  if (degree < 0 || lo > hi + 1) return out;
  const int width = hi - lo + 1;
  if (degree > width) return out;
  std::vector<int> idx(degree);
  for (int i = 0; i < degree; ++i) idx[i] = lo + i;
  while (true) {
    out.push_back(IndexSet::FromIndices(idx, ambient_dim));
    int pos = degree - 1;
    while (pos >= 0 && idx[pos] == hi - (degree - 1 - pos)) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int i = pos + 1; i < degree; ++i) idx[i] = idx[i - 1] + 1;
  }
  return out;
}

std::vector<IndexSet> AllIndexSets(int ambient_dim, int degree) {
  return IndexSetsInRange(ambient_dim, degree, 0, ambient_dim - 1);
}

int InsertionSign(int i, const IndexSet& set) {
  if (set.contains(i)) return 0;
  std::uint32_t below = set.mask() & ((1u << i) - 1u);
  return (std::popcount(below) % 2 == 0) ? 1 : -1;
}

Multivector::Multivector(int ambient_dim, int degree)
    : ambient_dim_(ambient_dim), degree_(degree) {
  if (ambient_dim < 0 || ambient_dim > 31 || degree < 0) {
    throw std::invalid_argument("Multivector: bad dimension or degree");
  }
}

Multivector Multivector::Basis(const IndexSet& set, Rational coeff) {
  Multivector w(set.ambient_dim(), set.size());
  w.add_term(set, coeff);
  return w;
}

Multivector Multivector::FromVector(const std::vector<Rational>& coords) {
  const int k = static_cast<int>(coords.size());
  Multivector w(k, 1);
  for (int i = 0; i < k; ++i) w.add_term(IndexSet::FromMask(1u << i, k), coords[i]);
  return w;
}

Multivector Multivector::FromVector(const std::vector<Integer>& coords) {
  std::vector<Rational> q(coords.begin(), coords.end());
  return FromVector(q);
}

Rational Multivector::coeff(const IndexSet& set) const {
  auto it = terms_.find(set);
  return it == terms_.end() ? Rational(0) : it->second;
}

void Multivector::add_term(const IndexSet& set, const Rational& value) {
  if (set.ambient_dim() != ambient_dim_ || set.size() != degree_) {
    throw std::invalid_argument("Multivector: index set does not match degree");
  }
  if (value == 0) return;
  auto [it, inserted] = terms_.try_emplace(set, value);
  if (!inserted) {
    it->second += value;
    if (it->second == 0) terms_.erase(it);
  }
}

void Multivector::check_compatible(const Multivector& other, const char* op) const {
  if (ambient_dim_ != other.ambient_dim_ || degree_ != other.degree_) {
    throw std::invalid_argument(std::string("Multivector ") + op +
                                ": dimension or degree mismatch");
  }
}

Multivector& Multivector::operator+=(const Multivector& other) {
  check_compatible(other, "+");
  for (const auto& [set, c] : other.terms_) add_term(set, c);
  return *this;
}

Multivector& Multivector::operator-=(const Multivector& other) {
  check_compatible(other, "-");
  for (const auto& [set, c] : other.terms_) add_term(set, -c);
  return *this;
}

Multivector& Multivector::operator*=(const Rational& scalar) {
  if (scalar == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [set, c] : terms_) c *= scalar;
  return *this;
}

bool Multivector::is_integral() const {
  for (const auto& [set, c] : terms_) {
    if (c.get_den() != 1) return false;
  }
  return true;
}

namespace {

// Sign of e_I ∧ e_J relative to e_{I ∪ J} for disjoint I, J: the parity of
// pairs (a ∈ I, b ∈ J) with a > b.
int WedgeSign(std::uint32_t a, std::uint32_t b) {
  int inversions = 0;
  for (std::uint32_t m = b; m != 0; m &= m - 1) {
    int idx = std::countr_zero(m);
    inversions += std::popcount(a >> (idx + 1));
  }
  return inversions % 2 == 0 ? 1 : -1;
}

}  // namespace

Multivector Wedge(const Multivector& u, const Multivector& v) {
  if (u.ambient_dim() != v.ambient_dim()) {
    throw std::invalid_argument("Wedge: ambient dimension mismatch");
  }
  const int k = u.ambient_dim();
  Multivector out(k, u.degree() + v.degree());
  if (u.degree() + v.degree() > k) return out;
  for (const auto& [si, ci] : u.terms()) {
    for (const auto& [sj, cj] : v.terms()) {
      if (si.mask() & sj.mask()) continue;
      int sign = WedgeSign(si.mask(), sj.mask());
      Rational c = ci * cj;
      if (sign < 0) c = -c;
      out.add_term(IndexSet::FromMask(si.mask() | sj.mask(), k), c);
    }
  }
  return out;
}

Rational Inner(const Multivector& u, const Multivector& v) {
  if (u.ambient_dim() != v.ambient_dim() || u.degree() != v.degree()) {
    throw std::invalid_argument("Inner: degree or dimension mismatch");
  }
  const auto& small = u.term_count() <= v.term_count() ? u : v;
  const auto& large = u.term_count() <= v.term_count() ? v : u;
  Rational acc = 0;
  for (const auto& [set, c] : small.terms()) {
    auto it = large.terms().find(set);
    if (it != large.terms().end()) acc += c * it->second;
  }
  return acc;
}

Multivector ProjectV0(const Multivector& w) {
  Multivector out(w.ambient_dim(), w.degree());
  for (const auto& [set, c] : w.terms()) {
    if (!set.contains(0)) out.add_term(set, c);
  }
  return out;
}

Multivector ProjectVbullet(const Multivector& w, int s) {
  const int n = w.ambient_dim() - 1;
  if (s < 0 || s > n) throw std::invalid_argument("ProjectVbullet: s out of range");
  const std::uint32_t low = (s + 1 >= 32) ? ~0u : ((1u << (s + 1)) - 1u);
  Multivector out(w.ambient_dim(), w.degree());
  for (const auto& [set, c] : w.terms()) {
    if ((set.mask() & low) == 0) out.add_term(set, c);
  }
  return out;
}

ContractionImage Contract(const Multivector& w) {
  if (w.degree() < 1) throw std::invalid_argument("Contract: degree 0 input");
  const int k = w.ambient_dim();
  ContractionImage image;
  image.components.assign(k, Multivector(k, w.degree() - 1));
  // Each term e_I contributes to component i ∈ I with J = I \ {i} whenever
  // J avoids 0, with coefficient <e_i ∧ e_J, e_I> = InsertionSign(i, J).
  for (const auto& [set, c] : w.terms()) {
    for (int i : set.indices()) {
      IndexSet rest = set.without(i);
      if (rest.contains(0)) continue;
      int sign = InsertionSign(i, rest);
      image.components[i].add_term(rest, sign > 0 ? c : Rational(-c));
    }
  }
  return image;
}

Rational SupNorm(const Multivector& w) {
  Rational best = 0;
  for (const auto& [set, c] : w.terms()) {
    Rational a = Abs(c);
    if (a > best) best = a;
  }
  return best;
}

Rational EuclidNormSq(const Multivector& w) {
  Rational acc = 0;
  for (const auto& [set, c] : w.terms()) acc += c * c;
  return acc;
}

bool IsDecomposable(const Multivector& w) {
  const int j = w.degree();
  const int k = w.ambient_dim();
  if (w.is_zero() || j <= 1 || j >= k - 1) return true;
  for (const IndexSet& alpha : AllIndexSets(k, j - 1)) {
    // v_m = <e_alpha ∧ e_m, w>; the overall sign is irrelevant here.
    Multivector v(k, 1);
    for (int m = 0; m < k; ++m) {
      if (alpha.contains(m)) continue;
      IndexSet full = alpha.with(m);
      Rational c = w.coeff(full);
      if (c == 0) continue;
      // e_alpha ∧ e_m = (-1)^{#alpha above m} e_full
      int above = std::popcount(alpha.mask() >> (m + 1));
      v.add_term(IndexSet::FromMask(1u << m, k), above % 2 == 0 ? c : Rational(-c));
    }
    if (v.is_zero()) continue;
    if (!Wedge(v, w).is_zero()) return false;
  }
  return true;
}

std::string FormatMultivector(const Multivector& w) {
  std::ostringstream out;
  bool first = true;
  for (const auto& [set, c] : w.terms()) {
    if (!first) out << '\n';
    first = false;
    auto idx = set.indices();
    if (idx.empty()) {
      out << '-';
    } else {
      for (std::size_t i = 0; i < idx.size(); ++i) out << (i ? "," : "") << idx[i];
    }
    out << ':' << ToString(c);
  }
  return out.str();
}

Multivector ParseMultivector(std::string_view text, int ambient_dim, int degree) {
  Multivector w(ambient_dim, degree);
  std::istringstream in{std::string(text)};
  std::string token;
  while (in >> token) {
    auto colon = token.find(':');
    if (colon == std::string::npos) {
      throw std::invalid_argument("multivector entry without ':' in '" + token + "'");
    }
    std::string idx_str = token.substr(0, colon);
    std::vector<int> idx;
    if (idx_str != "-") {
      std::istringstream parts(idx_str);
      std::string part;
      while (std::getline(parts, part, ',')) {
        if (part.empty()) throw std::invalid_argument("empty index in '" + token + "'");
        std::size_t used = 0;
        int value = std::stoi(part, &used);
        if (used != part.size()) throw std::invalid_argument("bad index in '" + token + "'");
        idx.push_back(value);
      }
    }
    IndexSet set = IndexSet::FromIndices(idx, ambient_dim);
    if (set.size() != degree) {
      throw std::invalid_argument("multivector entry of wrong degree: '" + token + "'");
    }
    w.add_term(set, ParseRational(token.substr(colon + 1)));
  }
  return w;
}

}  // namespace dexp

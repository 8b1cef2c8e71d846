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


#ifndef DEXP_TOOLS_REPORT_HPP_
#define DEXP_TOOLS_REPORT_HPP_

// JSON encodings of library results. Payloads never contain timings or the
// worker count, so equal inputs give byte-identical payloads.

#include <string>
#include <vector>

#include "dexp/exponents.hpp"
#include "dexp/flows.hpp"
#include "dexp/identities.hpp"
#include "dexp/nondiv.hpp"
#include "dexp/subspaces.hpp"
#include "json.hpp"

namespace dexp::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "dexp.report/1";
inline constexpr const char* kManifestSchema = "dexp.manifest/1";
inline constexpr const char* kVersion = "0.1.0";

/// Finite doubles as numbers, ±∞ as strings, NaN as null.
Json Number(double x);
Json Estimate(double value, const char* label);

Json ToJson(const Rational& q);
Json ToJson(const Integer& z);
Json ToJson(const IntegerVector& v);
Json ToJson(const RationalMatrix& m);

/// Primitive integer echelon basis of the span of a decomposable multivector.
std::vector<IntegerVector> EchelonBasis(const Multivector& w);

Json ToJson(const Record& r);
Json ToJson(const RecordCurve& c);
Json ToJson(const OrderExponentReport& r);
Json ToJson(const GapSearchReport& r);
Json ToJson(const TraceResult& t, const GammaEstimate& g);
Json ToJson(const IdentityReport& r);
Json ToJson(const EscapeBoundReport& r, const EscapeBoundConfig& cfg);
Json ToJson(const MarkingReport& r, const MarkingConfig& cfg);

std::string Sha256Hex(const std::string& bytes);
std::string UtcNow();

/// Pretty-printed with a trailing newline.
std::string Dump(const Json& j);

}  // namespace dexp::cli

#endif  // DEXP_TOOLS_REPORT_HPP_

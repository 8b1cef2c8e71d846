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


#ifndef DEXP_TOOLS_CLI_HPP_
#define DEXP_TOOLS_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace dexp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // selftest or verification failed
inline constexpr int kExitInvalidInput = 2;
inline constexpr int kExitBudget = 3;

/// Default output directory when --out-dir is not given.
inline constexpr const char* kOutDirEnv = "DEXP_OUT_DIR";

/// Runs one command line (without the program name). Reports and manifests
/// go to files; `out` gets a one-line summary, `err` diagnostics.
int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dexp::cli

#endif  // DEXP_TOOLS_CLI_HPP_

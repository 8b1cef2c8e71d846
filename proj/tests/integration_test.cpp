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


// End-to-end runs of the installed-style binary.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "report.hpp"

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

std::string Data(const std::string& name) {
  const char* dir = std::getenv("DEXP_TEST_DATA");
  return std::string(dir ? dir : "tests/data") + "/" + name;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class EndToEnd : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::path(::testing::TempDir()) /
           ("dexp_e2e_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  // Runs the binary with `env` prefixed; returns the exit status.
  int Dexp(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + " " + DEXP_BIN + " " + args + " >" + (dir_ / "stdout").string() + " 2>" +
                            (dir_ / "stderr").string();
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  }
  std::string Err() { return Slurp(dir_ / "stderr"); }
  Json Load(const std::string& name) { return Json::parse(Slurp(dir_ / name)); }
  std::string Out(const std::string& name) { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(EndToEnd, ExitCodes) {
  EXPECT_EQ(Dexp("exponent --matrix " + Data("zero.mat") + " --height 3 --out " + Out("z.json")), 0);
  EXPECT_EQ(Load("z.json")["payload"]["curve"]["estimate"]["value"], "inf");
  EXPECT_EQ(Dexp("exponent --matrix " + Data("bad.mat") + " --height 3"), 2);
  EXPECT_NE(Err().find("bad.mat:2"), std::string::npos) << Err();
  EXPECT_EQ(Dexp("exponent --matrix /no/such/file.mat --height 3"), 2);
  EXPECT_EQ(Dexp("--budget-seconds 0 subspace --A " + Data("generic.mat") + " --height 400 --out " + Out("b.json")),
            3);
  EXPECT_EQ(Load("b.json")["status"], "budget_exhausted");
}

TEST_F(EndToEnd, ManifestHashesReport) {
  ASSERT_EQ(Dexp("--seed 9 selftest --cases 20 --out " + Out("s.json")), 0) << Err();
  const Json m = Load("s.manifest.json");
  EXPECT_EQ(m["schema"], "dexp.manifest/1");
  EXPECT_EQ(m["report_sha256"], dexp::cli::Sha256Hex(Slurp(dir_ / "s.json")));
  EXPECT_EQ(m["seed"], 9);
  EXPECT_EQ(Load("s.json")["payload"]["passed"], true);
}

TEST_F(EndToEnd, OutputDirectoryFromEnvironment) {
  ASSERT_EQ(Dexp("flow --vector " + Data("golden.vec") + " --count 6", "DEXP_OUT_DIR=" + dir_.string()), 0) << Err();
  EXPECT_TRUE(fs::exists(dir_ / "flow.json"));
  EXPECT_TRUE(fs::exists(dir_ / "flow.trace.tsv"));
  EXPECT_TRUE(fs::exists(dir_ / "flow.manifest.json"));
}

TEST_F(EndToEnd, SubspaceClosedFormAgrees) {
  ASSERT_EQ(Dexp("subspace --A " + Data("diag.mat") + " --height 8 --closed-form-2x2 --out " + Out("c.json")), 0)
      << Err();
  const Json r = Load("c.json");
  EXPECT_EQ(r["payload"]["closed_form_2x2"]["equal"], true);
  EXPECT_EQ(r["kind"], "order_exponent_report");
}

TEST_F(EndToEnd, ReportsAreByteIdenticalAcrossWorkers) {
  const std::string args = " --seed 4 nondiv verify --map " + Data("parabola.map") + " --samples 30000 --t 2";
  ASSERT_EQ(Dexp("--workers 1" + args + " --out " + Out("one.json")), 0) << Err();
  ASSERT_EQ(Dexp("--workers 8" + args + " --out " + Out("eight.json")), 0) << Err();
  EXPECT_EQ(Slurp(dir_ / "one.json"), Slurp(dir_ / "eight.json"));
}

TEST_F(EndToEnd, MarkingOnPlane) {
  ASSERT_EQ(Dexp("nondiv marking --map " + Data("plane.map") + " --grid 12 --lambda 8 --out " + Out("m.json")), 0)
      << Err();
  const Json r = Load("m.json");
  EXPECT_EQ(r["payload"]["holds"], true);
  EXPECT_EQ(r["payload"]["points"], 144);
}

}  // namespace

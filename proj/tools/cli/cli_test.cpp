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


#include "cli.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace dexp::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

std::string Data(const std::string& name) {
  const char* dir = std::getenv("DEXP_TEST_DATA");
  return std::string(dir ? dir : "tests/data") + "/" + name;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::path(::testing::TempDir()) /
           ("dexp_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    unsetenv(kOutDirEnv);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int Exec(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return cli::Run(args, out_, err_);
  }
  Json Load(const fs::path& p) {
    std::ifstream in(p);
    return Json::parse(in);
  }
  std::string Out(const std::string& name) { return (dir_ / name).string(); }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST_F(CliTest, ZeroMatrixIsInfinite) {
  ASSERT_EQ(Exec({"exponent", "--matrix", Data("zero.mat"), "--height", "4", "--out", Out("z.json")}), kExitOk)
      << err_.str();
  const Json r = Load(dir_ / "z.json");
  EXPECT_EQ(r["schema"], "dexp.report/1");
  EXPECT_EQ(r["status"], "ok");
  EXPECT_EQ(r["payload"]["curve"]["estimate"]["value"], "inf");
  EXPECT_TRUE(fs::exists(dir_ / "z.manifest.json"));
  EXPECT_EQ(Load(dir_ / "z.manifest.json")["exit_code"], 0);
}

TEST_F(CliTest, BadNumberNamesFileAndLine) {
  EXPECT_EQ(Exec({"exponent", "--matrix", Data("bad.mat"), "--height", "3", "--out", Out("b.json")}),
            kExitInvalidInput);
  EXPECT_NE(err_.str().find("bad.mat:2"), std::string::npos) << err_.str();
  EXPECT_FALSE(fs::exists(dir_ / "b.json"));
}

TEST_F(CliTest, UnknownFlagIsInvalidInput) {
  EXPECT_EQ(Exec({"exponent", "--bogus"}), kExitInvalidInput);
  EXPECT_EQ(Exec({}), kExitInvalidInput);
}

TEST_F(CliTest, BudgetExhaustionKeepsPartialReport) {
  EXPECT_EQ(Exec({"--budget-nodes", "30", "exponent", "--matrix", Data("generic.mat"), "--height", "500",
                  "--out", Out("p.json")}),
            kExitBudget);
  const Json r = Load(dir_ / "p.json");
  EXPECT_EQ(r["status"], "budget_exhausted");
  EXPECT_EQ(r["provenance"]["budget_nodes"], 30);
  EXPECT_EQ(Load(dir_ / "p.manifest.json")["exit_code"], kExitBudget);
}

TEST_F(CliTest, EnvironmentSetsOutputDirectory) {
  setenv(kOutDirEnv, dir_.c_str(), 1);
  ASSERT_EQ(Exec({"selftest", "--cases", "10"}), kExitOk) << err_.str();
  EXPECT_TRUE(fs::exists(dir_ / "selftest.json"));
  const fs::path other = dir_ / "other";
  fs::create_directories(other);
  ASSERT_EQ(Exec({"--out-dir", other.string(), "selftest", "--cases", "5"}), kExitOk);
  EXPECT_TRUE(fs::exists(other / "selftest.json"));
  unsetenv(kOutDirEnv);
}

TEST_F(CliTest, FlowWritesTrace) {
  ASSERT_EQ(Exec({"flow", "--vector", Data("golden.vec"), "--count", "8", "--out", Out("f.json")}), kExitOk)
      << err_.str();
  std::ifstream in(dir_ / "f.trace.tsv");
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "# lambda t delta2 c_record");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  EXPECT_EQ(rows, 8);
}

TEST_F(CliTest, ReportIndependentOfWorkers) {
  auto payload = [&](const std::string& workers, const std::string& name) {
    EXPECT_EQ(Exec({"--workers", workers, "--seed", "3", "subspace", "--A", Data("diag.mat"), "--height", "6",
                    "--out", Out(name)}),
              kExitOk)
        << err_.str();
    return Load(dir_ / name);
  };
  EXPECT_EQ(payload("1", "a.json"), payload("4", "b.json"));
}

TEST_F(CliTest, NondivCommands) {
  ASSERT_EQ(Exec({"nondiv", "verify", "--map", Data("identity.map"), "--samples", "20000", "--out", Out("v.json")}),
            kExitOk)
      << err_.str();
  const Json v = Load(dir_ / "v.json");
  EXPECT_EQ(v["kind"], "nondivergence_verification");
  EXPECT_EQ(v["payload"]["rows"][0]["label"], "monte-carlo-with-ci");
  EXPECT_EQ(v["payload"]["bound_holds"], true);
  ASSERT_EQ(Exec({"nondiv", "marking", "--map", Data("identity.map"), "--grid", "20", "--lambda", "8", "--out",
                  Out("m.json")}),
            kExitOk)
      << err_.str();
  EXPECT_EQ(Load(dir_ / "m.json")["status"], "ok");
}

}  // namespace
}  // namespace dexp::cli

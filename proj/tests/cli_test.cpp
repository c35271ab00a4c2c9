// Copyright 2026 The absorb Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "absorb/common.hpp"

namespace fs = std::filesystem;

namespace {

std::string data(const std::string& name) { return std::string(ABSORB_TEST_DATA) + "/" + name; }

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("absorb_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

int run(const std::string& args) {
  const std::string cmd = std::string(ABSORB_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

nlohmann::json read_json(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

TEST(Cli, SolveBigMatch) {
  const auto out = scratch("solve");
  ASSERT_EQ(run("--config " + data("big_match.config.json") + " --out " + out.string() + " solve"), 0);
  std::ifstream csv(out / "values.csv");
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line.rfind("# absorb " + std::string(absorb::kVersion) + " config ", 0), 0u);
  std::getline(csv, line);
  EXPECT_EQ(line, "p_vertex,q_vertex,omega,lambda,value,residual,m");
  int rows = 0;
  while (std::getline(csv, line)) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    ASSERT_EQ(f.size(), 7u);
    if (f[2] == "play") {
      EXPECT_NEAR(std::stod(f[4]), 0.5, 2e-3);
      ++rows;
    }
  }
  EXPECT_EQ(rows, 3);
  const auto j = read_json(out / "solve.json");
  EXPECT_EQ(j["version"], absorb::kVersion);
  EXPECT_EQ(j["config_hash"].get<std::string>().size(), 16u);
}

TEST(Cli, CertifyTriangulation) {
  const auto out = scratch("certify");
  ASSERT_EQ(run("certify-tri --types 3 --resolution 4 --out " + out.string()), 0);
  const auto j = read_json(out / "triangulation.json");
  EXPECT_EQ(j["vertices"], 15);
  EXPECT_EQ(j["cells"], 16);
  EXPECT_LE(j["stepsize"].get<double>(), std::sqrt(2.0) * 2 / 4 + 1e-12);
  EXPECT_GT(j["c_cert"].get<double>(), 0.0);
}

TEST(Cli, OutputsAreReproducible) {
  const auto a = scratch("repro_a"), b = scratch("repro_b");
  const std::string cfg = "--config " + data("revelation.config.json");
  ASSERT_EQ(run(cfg + " --out " + a.string() + " couple --trace"), 0);
  ASSERT_EQ(run(cfg + " --out " + b.string() + " --workers 3 couple --trace"), 0);
  EXPECT_EQ(slurp(a / "coupling.json"), slurp(b / "coupling.json"));
  EXPECT_EQ(slurp(a / "traces.csv"), slurp(b / "traces.csv"));
  std::ifstream tr(a / "traces.csv");
  std::string line;
  std::getline(tr, line);
  std::getline(tr, line);
  EXPECT_EQ(line, "path,m,Omega_m,P_m,P'_m,Q_m,X_m,X'_m,Y'_m,I_m,J_m,T0,Z_m");
  const auto j = read_json(a / "coupling.json");
  EXPECT_TRUE(j["ok"].get<bool>());
  EXPECT_EQ(j["paths"], 2000);
}

TEST(Cli, SeedChangesOutputAndHash) {
  const auto a = scratch("seed_a"), b = scratch("seed_b");
  const std::string cfg = "--config " + data("revelation.config.json");
  ASSERT_EQ(run(cfg + " --out " + a.string() + " couple"), 0);
  ASSERT_EQ(run(cfg + " --out " + b.string() + " --seed 99 couple"), 0);
  EXPECT_NE(read_json(a / "coupling.json")["config_hash"], read_json(b / "coupling.json")["config_hash"]);
}

TEST(Cli, OtherSubcommands) {
  const auto out = scratch("others");
  const std::string cfg = "--config " + data("three_types.config.json") + " --out " + out.string();
  EXPECT_EQ(run(cfg + " validate"), 0);
  EXPECT_EQ(run(cfg + " decomp-check"), 0);
  EXPECT_EQ(run(cfg + " report"), 0);
  EXPECT_EQ(run(cfg + " oracle"), 0);
  const std::string hash = read_json(out / "report.json")["config_hash"];
  EXPECT_EQ(read_json(out / "decomposition.json")["config_hash"], hash);
  EXPECT_EQ(read_json(out / "oracle.json")["config_hash"], hash);
  EXPECT_LT(read_json(out / "decomposition.json")["payoff_err"].get<double>(), 1e-12);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run("frobnicate"), 2);
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("solve"), 2);
  EXPECT_EQ(run("--config /nonexistent.json solve"), 2);
  const auto dir = scratch("bad");
  std::ofstream(dir / "bad.json") << R"({"game": ")" << data("big_match.json") << R"(", "eps": 0.9})";
  EXPECT_EQ(run("--config " + (dir / "bad.json").string() + " solve"), 2);
  std::ofstream(dir / "unknown.json") << R"({"game": ")" << data("big_match.json") << R"(", "epsilon": 0.1})";
  EXPECT_EQ(run("--config " + (dir / "unknown.json").string() + " solve"), 2);
}

TEST(Cli, OracleBudgetExit) {
  const auto dir = scratch("budget");
  std::ofstream(dir / "tight.json") << R"({"game": ")" << data("three_types.json")
                                     << R"(", "lambdas": [0.001], "oracle_tol": 1e-12})";
  EXPECT_EQ(run("--config " + (dir / "tight.json").string() + " --out " + dir.string() + " oracle"), 2);
}

}  // namespace

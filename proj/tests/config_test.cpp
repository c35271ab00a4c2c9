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

#include <filesystem>

#include <gtest/gtest.h>

#include "absorb/config.hpp"

namespace absorb {
namespace {

std::string data(const std::string& name) { return std::string(ABSORB_TEST_DATA) + "/" + name; }

// Message of the ParseError raised for j, or "" when none is.
std::string parse_error(const nlohmann::json& j) {
  try {
    config_from_json(j);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

TEST(Config, Defaults) {
  const auto c = config_from_json({{"game", "g.json"}});
  EXPECT_EQ(c.n_k, 4);
  EXPECT_EQ(c.n_l, 1);
  EXPECT_EQ(c.m, 4);
  EXPECT_EQ(c.lambdas, (std::vector<double>{0.5, 0.2, 0.1}));
  EXPECT_EQ(c.eps, 0.1);
  EXPECT_EQ(c.tol, 1e-6);
  EXPECT_EQ(c.oracle_tol, 1e-3);
  EXPECT_EQ(c.seed, 1u);
  EXPECT_EQ(c.horizon, 50);
  EXPECT_EQ(c.variation_horizon, 10000);
  EXPECT_EQ(c.n_paths, 1000u);
  EXPECT_EQ(c.samples, 10000u);
  EXPECT_TRUE(c.p.empty());
  EXPECT_EQ(c.out, "out");
}

TEST(Config, RoundTrip) {
  ExperimentConfig c;
  c.game = "x.json";
  c.n_k = 8;
  c.lambdas = {0.3, 0.05};
  c.eps = 0.25;
  c.seed = 123456789012345ull;
  c.p = {0.25, 0.75};
  c.omega = "w0";
  EXPECT_EQ(config_from_json(config_to_json(c)), c);
  const auto path = std::filesystem::temp_directory_path() / "absorb_config_roundtrip.json";
  save_config(c, path.string());
  const auto back = load_config(path.string());
  EXPECT_EQ(back.game, (path.parent_path() / "x.json").string());
  EXPECT_EQ(back.lambdas, c.lambdas);
  EXPECT_EQ(back.seed, c.seed);
  std::filesystem::remove(path);
}

TEST(Config, NamedFieldErrors) {
  EXPECT_NE(parse_error({{"game", "g"}, {"eps", 0.5}}).find("\"eps\""), std::string::npos);
  EXPECT_NE(parse_error({{"game", "g"}, {"lambdas", {0.1, 0.2}}}).find("\"lambdas\""), std::string::npos);
  EXPECT_NE(parse_error({{"game", "g"}, {"lambdas", {1.5}}}).find("\"lambdas\""), std::string::npos);
  EXPECT_NE(parse_error({{"game", "g"}, {"N_K", 0}}).find("\"N_K\""), std::string::npos);
  EXPECT_NE(parse_error({{"game", "g"}, {"p", {0.5, 0.6}}}).find("\"p\""), std::string::npos);
  EXPECT_NE(parse_error({{"game", "g"}, {"m", "four"}}).find("\"m\""), std::string::npos);
  EXPECT_NE(parse_error({{"N_K", 2}}).find("\"game\""), std::string::npos);
  EXPECT_NE(parse_error({{"game", "g"}, {"N_k", 2}}).find("unknown field"), std::string::npos);
  EXPECT_FALSE(parse_error(nlohmann::json::array()).empty());
}

TEST(Config, MissingFile) { EXPECT_THROW(load_config("/nonexistent/config.json"), ParseError); }

TEST(Config, ShippedConfigsLoad) {
  for (const char* name : {"big_match.config.json", "revelation.config.json", "three_types.config.json"}) {
    const auto c = load_config(data(name));
    EXPECT_TRUE(std::filesystem::exists(c.game)) << c.game;
  }
}

TEST(Config, HashStableAndSensitive) {
  ExperimentConfig a;
  a.game = "g.json";
  ExperimentConfig b = a;
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).size(), 16u);
  b.seed = 2;
  EXPECT_NE(config_hash(a), config_hash(b));
  // FNV-1a reference values.
  EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ull);
  EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cull);
}

}  // namespace
}  // namespace absorb

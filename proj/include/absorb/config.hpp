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

// Experiment configuration: one JSON document, validated field by field.

#ifndef ABSORB_CONFIG_HPP_
#define ABSORB_CONFIG_HPP_

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "absorb/common.hpp"

namespace absorb {

struct ExperimentConfig {
  std::string game;                 // path, relative to the config file
  int n_k = 4;                      // triangulation resolution on Delta(K)
  int n_l = 1;                      // triangulation resolution on Delta(L)
  int m = 4;                        // action-grid resolution
  std::vector<double> lambdas{0.5, 0.2, 0.1};
  double eps = 0.1;
  double tol = 1e-6;                // value iteration
  double oracle_tol = 1e-3;
  std::uint64_t seed = 1;
  int horizon = 50;                 // coupled paths
  int variation_horizon = 10000;
  std::size_t n_paths = 1000;
  std::size_t samples = 10000;      // certificates and decomposition checks
  std::vector<double> p;            // empty: uniform
  std::vector<double> q;
  std::string omega;                // empty: first state
  std::string out = "out";

  bool operator==(const ExperimentConfig&) const = default;
};

inline nlohmann::json config_to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["game"] = c.game;
  j["N_K"] = c.n_k;
  j["N_L"] = c.n_l;
  j["m"] = c.m;
  j["lambdas"] = c.lambdas;
  j["eps"] = c.eps;
  j["tol"] = c.tol;
  j["oracle_tol"] = c.oracle_tol;
  j["seed"] = c.seed;
  j["horizon"] = c.horizon;
  j["variation_horizon"] = c.variation_horizon;
  j["n_paths"] = c.n_paths;
  j["samples"] = c.samples;
  j["p"] = c.p;
  j["q"] = c.q;
  j["omega"] = c.omega;
  j["out"] = c.out;
  return j;
}

// Throws ParseError naming the offending field.
inline void check_config(const ExperimentConfig& c) {
  auto bad = [](const std::string& field, const std::string& why) { throw ParseError("config field \"" + field + "\": " + why); };
  if (c.n_k < 1) bad("N_K", "must be >= 1");
  if (c.n_l < 1) bad("N_L", "must be >= 1");
  if (c.m < 1) bad("m", "must be >= 1");
  if (c.lambdas.empty()) bad("lambdas", "must not be empty");
  for (std::size_t n = 0; n < c.lambdas.size(); ++n) {
    if (!(c.lambdas[n] > 0.0 && c.lambdas[n] <= 1.0)) bad("lambdas", "entries must lie in (0, 1]");
    if (n > 0 && !(c.lambdas[n] < c.lambdas[n - 1])) bad("lambdas", "must be strictly decreasing");
  }
  if (!(c.eps > 0.0 && c.eps <= 0.25)) bad("eps", "must lie in (0, 0.25]");
  if (!(c.tol > 0.0)) bad("tol", "must be positive");
  if (!(c.oracle_tol > 0.0)) bad("oracle_tol", "must be positive");
  if (c.horizon < 1) bad("horizon", "must be >= 1");
  if (c.variation_horizon < 1) bad("variation_horizon", "must be >= 1");
  if (c.n_paths < 1) bad("n_paths", "must be >= 1");
  if (c.samples < 1) bad("samples", "must be >= 1");
  if (!c.p.empty() && !is_probability_vector(c.p)) bad("p", "not a probability vector");
  if (!c.q.empty() && !is_probability_vector(c.q)) bad("q", "not a probability vector");
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("config must be a JSON object");
  static const char* known[] = {"game", "N_K", "N_L", "m", "lambdas", "eps", "tol", "oracle_tol", "seed",
                                "horizon", "variation_horizon", "n_paths", "samples", "p", "q", "omega", "out"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) throw ParseError("config field \"" + it.key() + "\": unknown field");
  }
  ExperimentConfig c;
  auto get = [&](const char* key, auto& dst) {
    if (!j.contains(key)) return;
    try {
      j.at(key).get_to(dst);
    } catch (const nlohmann::json::exception&) {
      throw ParseError(std::string("config field \"") + key + "\": wrong type");
    }
  };
  get("game", c.game);
  get("N_K", c.n_k);
  get("N_L", c.n_l);
  get("m", c.m);
  get("lambdas", c.lambdas);
  get("eps", c.eps);
  get("tol", c.tol);
  get("oracle_tol", c.oracle_tol);
  get("seed", c.seed);
  get("horizon", c.horizon);
  get("variation_horizon", c.variation_horizon);
  get("n_paths", c.n_paths);
  get("samples", c.samples);
  get("p", c.p);
  get("q", c.q);
  get("omega", c.omega);
  get("out", c.out);
  if (c.game.empty()) throw ParseError("config field \"game\": missing");
  check_config(c);
  return c;
}

// Relative game paths are resolved against the config's directory.
inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("config is not valid JSON: ") + e.what());
  }
  ExperimentConfig c = config_from_json(j);
  const std::filesystem::path g(c.game);
  if (g.is_relative()) c.game = (std::filesystem::path(path).parent_path() / g).lexically_normal().string();
  return c;
}

inline void save_config(const ExperimentConfig& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << config_to_json(c).dump(2) << '\n';
}

// FNV-1a over the canonical JSON text.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string config_hash(const ExperimentConfig& c) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(config_to_json(c).dump())));
  return buf;
}

}  // namespace absorb

#endif  // ABSORB_CONFIG_HPP_

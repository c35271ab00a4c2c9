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

// absorb: experiment driver.
//
//   absorb validate     --config c.json
//   absorb solve        --config c.json --out DIR
//   absorb oracle       --config c.json
//   absorb couple       --config c.json [--trace]
//   absorb certify-tri  [--config c.json] [--types K --resolution N]
//   absorb decomp-check --config c.json
//   absorb report       --config c.json
//
// Exit status: 0 ok, 1 invariant violation, 2 usage or input error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "absorb/config.hpp"
#include "absorb/coupling_sim.hpp"
#include "absorb/exact_oracle.hpp"
#include "absorb/game_model.hpp"
#include "absorb/triangulation.hpp"
#include "absorb/value_engine.hpp"

namespace {

using absorb::Belief;
using nlohmann::json;

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;

struct Globals {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out;
  unsigned workers = absorb::default_workers();
  bool json_out = false;
  bool trace = false;
  int types = 0;
  int resolution = 0;
};

struct Context {
  absorb::ExperimentConfig cfg;
  absorb::GameSpec spec;
  std::string hash;
  Belief p, q;
  int omega = 0;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string join(const absorb::Vec& v) {
  std::string s;
  for (std::size_t n = 0; n < v.size(); ++n) s += (n ? ";" : "") + fmt(v[n]);
  return s;
}

Belief uniform(int n) { return Belief(n, 1.0 / n); }

// The output location is not part of the experiment identity.
std::string identity_hash(absorb::ExperimentConfig c) {
  c.out.clear();
  return absorb::config_hash(c);
}

Context load_context(const Globals& g) {
  if (g.config_path.empty()) throw absorb::ParseError("--config is required");
  Context c;
  c.cfg = absorb::load_config(g.config_path);
  if (g.seed_set) c.cfg.seed = g.seed;
  if (!g.out.empty()) c.cfg.out = g.out;
  c.spec = absorb::load_spec(c.cfg.game);
  const auto rep = absorb::validate_game(c.spec);
  if (!rep.ok()) throw absorb::ParseError("game: " + rep.issues.front());
  c.p = c.cfg.p.empty() ? uniform(c.spec.num_k()) : c.cfg.p;
  c.q = c.cfg.q.empty() ? uniform(c.spec.num_l()) : c.cfg.q;
  if (static_cast<int>(c.p.size()) != c.spec.num_k()) throw absorb::ParseError("config field \"p\": size differs from |K|");
  if (static_cast<int>(c.q.size()) != c.spec.num_l()) throw absorb::ParseError("config field \"q\": size differs from |L|");
  if (!c.cfg.omega.empty()) {
    const int w = c.spec.state_index(c.cfg.omega);
    if (w < 0) throw absorb::ParseError("config field \"omega\": unknown state " + c.cfg.omega);
    c.omega = w;
  }
  c.hash = identity_hash(c.cfg);
  return c;
}

json stamp(const std::string& hash) { return {{"version", absorb::kVersion}, {"config_hash", hash}}; }

std::filesystem::path out_dir(const std::string& dir) {
  std::filesystem::create_directories(dir);
  return dir;
}

void emit(const Globals& g, const std::filesystem::path& file, const json& j, const std::string& summary) {
  std::ofstream(file) << j.dump(2) << '\n';
  if (g.json_out)
    std::cout << j.dump(2) << '\n';
  else
    std::cout << summary << '\n';
}

int cmd_validate(const Globals& g) {
  Context c;
  c.cfg = absorb::load_config(g.config_path.empty() ? throw absorb::ParseError("--config is required") : g.config_path);
  c.spec = absorb::load_spec(c.cfg.game);
  const auto rep = absorb::validate_game(c.spec);
  const auto info = absorb::classify_states(c.spec);
  json j = stamp(identity_hash(c.cfg));
  j["ok"] = rep.ok();
  j["issues"] = rep.issues;
  j["absorbing_game"] = info.is_absorbing_game;
  j["states"] = c.spec.Omega;
  j["g_inf"] = c.spec.g_inf();
  if (g.json_out)
    std::cout << j.dump(2) << '\n';
  else if (rep.ok())
    std::cout << "ok: " << c.spec.num_states() << " states, absorbing game " << (info.is_absorbing_game ? "yes" : "no")
              << '\n';
  else
    for (const auto& s : rep.issues) std::cout << "issue: " << s << '\n';
  return rep.ok() ? kOk : kViolation;
}

absorb::FiniteBeliefGame make_gamma_f(const Context& c) {
  return absorb::FiniteBeliefGame(c.spec, absorb::build_triangulation(c.spec.num_k(), c.cfg.n_k),
                                  absorb::build_triangulation(c.spec.num_l(), c.cfg.n_l));
}

int cmd_solve(const Globals& g) {
  const Context c = load_context(g);
  const auto G = make_gamma_f(c);
  const absorb::ActionGrid gx(c.spec.num_k(), c.spec.num_i(), c.cfg.m), gy(c.spec.num_l(), c.spec.num_j(), c.cfg.m);
  const auto table = absorb::limit_value_estimate(G, gx, gy, c.cfg.lambdas, c.cfg.tol, g.workers);
  const auto dir = out_dir(c.cfg.out);
  std::ofstream csv(dir / "values.csv");
  csv << "# absorb " << absorb::kVersion << " config " << c.hash << '\n';
  csv << "p_vertex,q_vertex,omega,lambda,value,residual,m\n";
  for (std::size_t n = 0; n < table.ladder.size(); ++n) {
    const auto& v = table.values[n];
    for (int s = 0; s < G.num_states(); ++s) {
      int a, b, w;
      G.decode(s, a, b, w);
      csv << join(G.tri_k().vertex(a)) << ',' << join(G.tri_l().vertex(b)) << ',' << c.spec.Omega[w] << ','
          << fmt(table.ladder[n]) << ',' << fmt(v.values[s]) << ',' << fmt(v.residual) << ',' << c.cfg.m << '\n';
    }
  }
  std::ostringstream sum;
  json j = stamp(c.hash);
  j["csv"] = (dir / "values.csv").string();
  j["states"] = G.num_states();
  json rows = json::array();
  for (std::size_t n = 0; n < table.ladder.size(); ++n) {
    const double v = absorb::lifted_value(G, table.values[n], c.p, c.q, c.omega);
    rows.push_back({{"lambda", table.ladder[n]}, {"value", v}, {"residual", table.values[n].residual},
                    {"iterations", table.values[n].iterations}});
    sum << "lambda " << table.ladder[n] << ": value " << fmt(v) << '\n';
  }
  j["initial_values"] = rows;
  sum << "wrote " << (dir / "values.csv").string();
  emit(g, dir / "solve.json", j, sum.str());
  return kOk;
}

int cmd_oracle(const Globals& g) {
  const Context c = load_context(g);
  const auto dir = out_dir(c.cfg.out);
  json j = stamp(c.hash);
  json rows = json::array();
  std::ostringstream sum;
  for (double lam : c.cfg.lambdas) {
    try {
      const auto r = absorb::solve_truncated(c.spec, c.p, c.q, c.omega, lam, c.cfg.oracle_tol);
      rows.push_back({{"lambda", lam},
                      {"value", r.value},
                      {"lower", r.lower},
                      {"upper", r.upper},
                      {"horizon", r.horizon},
                      {"error_bound", r.error_bound},
                      {"iterations", r.iterations},
                      {"nodes", r.nodes}});
      sum << "lambda " << lam << ": value " << fmt(r.value) << " +- " << r.error_bound << " (horizon " << r.horizon
          << ")\n";
    } catch (const absorb::BudgetError& e) {
      std::cerr << "config field \"oracle_tol\": " << e.what() << "; smallest admissible tol "
                << e.min_admissible_tol() << '\n';
      return kUsage;
    }
  }
  j["results"] = rows;
  sum << "wrote " << (dir / "oracle.json").string();
  emit(g, dir / "oracle.json", j, sum.str());
  return kOk;
}

json running(const absorb::RunningStat& s) { return {{"mean", s.mean()}, {"se", s.std_error()}, {"n", s.count()}}; }

int cmd_couple(const Globals& g) {
  const Context c = load_context(g);
  const auto G = make_gamma_f(c);
  const absorb::ActionGrid gx(c.spec.num_k(), c.spec.num_i(), c.cfg.m), gy(c.spec.num_l(), c.spec.num_j(), c.cfg.m);
  const double lam = c.cfg.lambdas.front();
  const auto v = absorb::solve_discounted(G, lam, gx, gy, c.cfg.tol, g.workers);
  auto stage = std::make_shared<absorb::StagePolicy>(G, v, gx, gy, lam);
  absorb::CouplingOptions opt;
  opt.eps = c.cfg.eps;
  opt.horizon = c.cfg.horizon;
  opt.n_paths = c.cfg.n_paths;
  opt.seed = c.cfg.seed;
  opt.workers = g.workers;
  opt.keep_traces = g.trace;
  const auto st = absorb::simulate_coupling(G, absorb::greedy_concise_strategy(stage, c.cfg.eps),
                                            absorb::stage_optimal_p2(stage), c.p, c.q, c.omega, opt);
  const auto dir = out_dir(c.cfg.out);
  json j = stamp(c.hash);
  j["lambda"] = lam;
  j["eps"] = c.cfg.eps;
  j["paths"] = st.paths;
  j["horizon_cap"] = st.horizon;
  j["sup_l1_gap"] = {{"mean", st.sup_l1_gap}, {"se", st.sup_l1_gap_se}};
  j["l1_gap_at_T0"] = running(st.l1_at_T0);
  j["stop_off_frontier"] = running(st.stop_off_frontier);
  j["variation"] = running(st.variation);
  json z = json::array();
  bool ok = true;
  for (const auto& s : st.z_mean) {
    z.push_back(running(s));
    if (std::abs(s.mean()) > 3.0 * s.std_error()) ok = false;
  }
  j["z_mean"] = z;
  j["active_stages"] = st.active_stages;
  j["sq_gap"] = running(st.sq_gap);
  j["sq_increments"] = running(st.sq_increments);
  j["variance_identity_diff"] = running(st.variance_diff);
  if (std::abs(st.variance_diff.mean()) > 3.0 * st.variance_diff.std_error() + 1e-12) ok = false;
  j["alpha"] = st.alpha;
  j["alpha_gate"] = st.alpha_gate;
  j["gate_holds"] = st.gate_holds;
  j["warnings"] = st.warnings;
  j["ok"] = ok;
  for (const auto& w : st.warnings) std::cerr << "warning: " << w << '\n';
  if (g.trace) {
    std::ofstream csv(dir / "traces.csv");
    csv << "# absorb " << absorb::kVersion << " config " << c.hash << '\n';
    csv << "path,m,Omega_m,P_m,P'_m,Q_m,X_m,X'_m,Y'_m,I_m,J_m,T0,Z_m\n";
    for (std::size_t n = 0; n < st.traces.size(); ++n) {
      const auto& tr = st.traces[n];
      for (const auto& s : tr.stages)
        csv << n << ',' << s.m << ',' << c.spec.Omega[s.omega] << ',' << join(s.P) << ',' << join(s.Pp) << ','
            << join(s.Q) << ',' << join(s.X.data()) << ',' << join(s.Xp.data()) << ',' << join(s.Yp.data()) << ','
            << c.spec.I[s.I] << ',' << c.spec.J[s.J] << ',' << tr.T0 << ',' << join(s.Z) << '\n';
    }
  }
  std::ostringstream sum;
  sum << "active path-stages " << st.active_stages << ", variance identity diff " << fmt(st.variance_diff.mean())
      << " (se " << st.variance_diff.std_error() << "), " << (ok ? "ok" : "VIOLATION");
  emit(g, dir / "coupling.json", j, sum.str());
  return ok ? kOk : kViolation;
}

int cmd_certify(const Globals& g) {
  int types = g.types, res = g.resolution;
  std::size_t samples = 10000;
  std::uint64_t seed = g.seed_set ? g.seed : 1;
  std::string hash = "none", out = g.out.empty() ? "out" : g.out;
  if (!g.config_path.empty()) {
    const Context c = load_context(g);
    if (types == 0) types = c.spec.num_k();
    if (res == 0) res = c.cfg.n_k;
    samples = c.cfg.samples;
    seed = c.cfg.seed;
    hash = c.hash;
    out = c.cfg.out;
  }
  if (types < 1 || res < 1) throw absorb::ParseError("certify-tri needs --config or both --types and --resolution");
  const auto tri = absorb::build_triangulation(types, res);
  const auto cert = absorb::certify_alphaC(tri, samples, seed);
  json j = stamp(hash);
  j["types"] = types;
  j["N"] = res;
  j["vertices"] = tri.num_vertices();
  j["cells"] = tri.num_cells();
  j["stepsize"] = cert.stepsize;
  j["c_cert"] = cert.c_cert;
  j["samples"] = cert.samples;
  j["violations"] = cert.violations;
  const auto dir = out_dir(out);
  std::ostringstream sum;
  sum << "|K|=" << types << " N=" << res << ": " << tri.num_vertices() << " vertices, " << tri.num_cells()
      << " cells, stepsize " << fmt(cert.stepsize) << ", C " << fmt(cert.c_cert);
  emit(g, dir / "triangulation.json", j, sum.str());
  return cert.violations.empty() ? kOk : kViolation;
}

int cmd_decomp(const Globals& g) {
  const Context c = load_context(g);
  const auto G = make_gamma_f(c);
  const auto rep = absorb::separable_decomposition_check(G, c.cfg.samples, c.cfg.seed);
  const bool ok = rep.payoff_err <= 1e-12 && rep.transition_err <= 1e-12;
  json j = stamp(c.hash);
  j["samples"] = rep.samples;
  j["payoff_err"] = rep.payoff_err;
  j["transition_err"] = rep.transition_err;
  j["ok"] = ok;
  const auto dir = out_dir(c.cfg.out);
  std::ostringstream sum;
  sum << "payoff err " << rep.payoff_err << ", transition err " << rep.transition_err << (ok ? ": ok" : ": VIOLATION");
  emit(g, dir / "decomposition.json", j, sum.str());
  return ok ? kOk : kViolation;
}

int cmd_report(const Globals& g) {
  const Context c = load_context(g);
  const auto G = make_gamma_f(c);
  const absorb::ActionGrid gx(c.spec.num_k(), c.spec.num_i(), c.cfg.m), gy(c.spec.num_l(), c.spec.num_j(), c.cfg.m);
  const auto table = absorb::limit_value_estimate(G, gx, gy, c.cfg.lambdas, c.cfg.tol, g.workers);
  const auto info = absorb::classify_states(c.spec);
  json j = stamp(c.hash);
  j["game"] = {{"K", c.spec.num_k()}, {"L", c.spec.num_l()}, {"states", c.spec.num_states()},
               {"absorbing_game", info.is_absorbing_game}, {"g_inf", c.spec.g_inf()}};
  j["triangulation"] = {{"N_K", c.cfg.n_k}, {"N_L", c.cfg.n_l}, {"alpha_K", G.tri_k().stepsize()},
                        {"alpha_L", G.tri_l().stepsize()}, {"states", G.num_states()}};
  json rows = json::array();
  for (std::size_t n = 0; n < table.ladder.size(); ++n)
    rows.push_back({{"lambda", table.ladder[n]},
                    {"value", absorb::lifted_value(G, table.values[n], c.p, c.q, c.omega)},
                    {"residual", table.values[n].residual}});
  j["ladder"] = rows;
  j["max_oscillation"] = table.max_oscillation();
  const auto dir = out_dir(c.cfg.out);
  std::ostringstream sum;
  sum << "value at smallest lambda " << fmt(rows.back()["value"].get<double>()) << ", oscillation over last ladder points "
      << table.max_oscillation();
  emit(g, dir / "report.json", j, sum.str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Values and belief dynamics of absorbing games with incomplete information"};
  app.set_version_flag("--version", absorb::kVersion);
  Globals g;
  std::uint64_t seed = 0;
  app.add_option("--config", g.config_path, "experiment config (JSON)");
  auto* seed_opt = app.add_option("--seed", seed, "master seed; overrides the config");
  app.add_option("--out", g.out, "output directory; overrides the config (default \"out\")");
  app.add_option("--workers", g.workers, "worker threads (default: available parallelism)")->check(CLI::PositiveNumber);
  app.add_flag("--json", g.json_out, "print JSON results on stdout");
  app.footer(
      "Config fields and defaults: game (required), N_K=4, N_L=1, m=4, lambdas=[0.5,0.2,0.1], eps=0.1,\n"
      "tol=1e-6, oracle_tol=1e-3, seed=1, horizon=50, variation_horizon=10000, n_paths=1000, samples=10000,\n"
      "p=uniform, q=uniform, omega=first state, out=\"out\".\n"
      "Exit status: 0 ok, 1 invariant violation, 2 usage or input error.");

  auto* validate = app.add_subcommand("validate", "check a game document");
  auto* solve = app.add_subcommand("solve", "value iteration on the finite belief game over the lambda ladder");
  auto* oracle = app.add_subcommand("oracle", "truncated exact value with certified bounds");
  auto* couple = app.add_subcommand("couple", "simulate the coupled belief process");
  couple->add_flag("--trace", g.trace, "also write every coupled trace as CSV");
  auto* certify = app.add_subcommand("certify-tri", "triangulation statistics and flatness certificate");
  certify->add_option("--types", g.types, "number of types");
  certify->add_option("--resolution", g.resolution, "triangulation resolution N");
  auto* decomp = app.add_subcommand("decomp-check", "separable decomposition of payoffs and transitions");
  auto* report = app.add_subcommand("report", "limit-value extrapolation summary");
  for (auto* sub : {validate, solve, oracle, couple, certify, decomp, report}) sub->fallthrough();
  app.require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }
  g.seed = seed;
  g.seed_set = seed_opt->count() > 0;

  try {
    if (*validate) return cmd_validate(g);
    if (*solve) return cmd_solve(g);
    if (*oracle) return cmd_oracle(g);
    if (*couple) return cmd_couple(g);
    if (*certify) return cmd_certify(g);
    if (*decomp) return cmd_decomp(g);
    if (*report) return cmd_report(g);
  } catch (const absorb::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const absorb::PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const absorb::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kViolation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

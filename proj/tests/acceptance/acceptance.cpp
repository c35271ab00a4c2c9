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

// Acceptance checks. One line per criterion; exit status is the number of
// failures. Tolerances and runtime limits are fixed below.

#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <memory>
#include <random>
#include <string>

#include "absorb/coupling_sim.hpp"
#include "absorb/exact_oracle.hpp"
#include "absorb/strategy_transforms.hpp"
#include "absorb/triangulation.hpp"
#include "absorb/value_engine.hpp"

using namespace absorb;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

MixedAction random_action(std::mt19937_64& rng, int nk, int ni) {
  MixedAction x(nk, ni);
  for (int k = 0; k < nk; ++k) {
    const Belief r = sample_simplex(rng, ni);
    for (int i = 0; i < ni; ++i) x.at(k, i) = r[i];
  }
  return x;
}

// Rows close to a common row so NR sets are not trivial.
MixedAction near_independent(std::mt19937_64& rng, int nk, int ni, double spread) {
  const Belief base = sample_simplex(rng, ni);
  std::uniform_real_distribution<double> u(-spread, spread);
  MixedAction x(nk, ni);
  for (int k = 0; k < nk; ++k) {
    double s = 0.0;
    for (int i = 0; i < ni; ++i) s += (x.at(k, i) = base[i] * (1.0 + u(rng)));
    for (int i = 0; i < ni; ++i) x.at(k, i) /= s;
  }
  return x;
}

Outcome splitting_conservation() {
  std::mt19937_64 rng(101);
  double worst = 0.0;
  for (int types : {2, 3, 4})
    for (int n : {2, 4, 8}) {
      const auto tri = build_triangulation(types, n);
      for (int s = 0; s < 10000; ++s) {
        const Belief p = sample_simplex(rng, types);
        Vec rec(types, 0.0);
        for (const auto& a : tri.split(p))
          for (int k = 0; k < types; ++k) rec[k] += a.weight * tri.vertex(a.vertex)[k];
        worst = std::max(worst, norm_inf(rec, p));
      }
    }
  return {worst < 1e-12, fmt("max error %.3g (< 1e-12)", worst)};
}

Outcome alpha_c_certificate() {
  double lo = 1e300, hi = 0.0;
  bool step_ok = true, finite = true;
  std::string per;
  for (int n : {2, 4, 8}) {
    const auto tri = build_triangulation(3, n);
    const auto c = certify_alphaC(tri, 100000, 102);
    finite = finite && std::isfinite(c.c_cert) && c.violations.empty();
    step_ok = step_ok && c.stepsize <= std::sqrt(2.0) * 2.0 / n + 1e-12;
    lo = std::min(lo, c.c_cert);
    hi = std::max(hi, c.c_cert);
    per += fmt(" N=%d C=%.4g s=%.4g", n, c.c_cert, c.stepsize);
  }
  const bool pass = finite && step_ok && lo > 0.0 && hi / lo < 2.0;
  return {pass, fmt("ratio %.3f (< 2);", hi / lo) + per};
}

Outcome silent_mapping_suite() {
  std::mt19937_64 rng(103);
  double marg = 0.0, gap = 0.0;
  int nr_fail = 0, witness_fail = 0;
  const double epss[] = {0.05, 0.1, 0.25};
  for (int t = 0; t < 10000; ++t) {
    const double eps = epss[t % 3];
    const int nk = 2 + t % 3, ni = 2 + (t / 3) % 4;
    const MixedAction x = (t % 2) ? random_action(rng, nk, ni) : near_independent(rng, nk, ni, 0.3);
    const Belief p = sample_simplex(rng, nk);
    const double e0 = eps0_of(eps);
    const MixedAction xp = silent_map(x, p, e0);
    marg = std::max(marg, norm_inf(marginal(xp, p), marginal(x, p)));
    if (classify_nr(xp, p, eps).nr != classify_nr(x, p, e0).nr) ++nr_fail;
    const Vec xb = marginal(x, p), xpb = marginal(xp, p);
    for (int i = 0; i < ni; ++i) {
      if (xb[i] <= 0.0) continue;
      gap = std::max(gap, norm1(bayes_update(xp, p, i, xpb[i]), bayes_update(x, p, i, xb[i])) / eps);
    }
    const auto w = make_convexification_witness(x, p, eps);
    if (!check_convexification(x, xp, p, w).ok(6.0 * eps, 1e-9)) ++witness_fail;
  }
  const bool pass = marg < 1e-12 && nr_fail == 0 && gap <= 6.0 && witness_fail == 0;
  return {pass, fmt("marginal err %.3g, NR mismatches %d, max L1 gap %.3f eps (<= 6), witness failures %d", marg,
                    nr_fail, gap, witness_fail)};
}

Outcome translation_suite() {
  std::mt19937_64 rng(104);
  std::uniform_real_distribution<double> u(-0.02, 0.02);
  double marg = 0.0, shift = 0.0, row = 0.0, lip = -1e300;
  int active = 0;
  std::vector<GameSpec> games;
  for (int nk = 2; nk <= 4; ++nk) {
    RandomGameOptions o;
    o.num_k = nk;
    o.num_i = nk;
    o.num_j = 2;
    games.push_back(random_absorbing_game(rng, o));
  }
  for (int t = 0; t < 10000; ++t) {
    const int nk = 2 + t % 3, ni = nk;
    const MixedAction x = near_independent(rng, nk, ni, 0.2);
    const Belief p = sample_simplex(rng, nk);
    Belief pp = p;
    double s = 0.0;
    for (double& v : pp) s += (v = std::max(1e-6, v + u(rng)));
    for (double& v : pp) v /= s;
    if (!in_translation_domain(x, p, pp)) continue;
    ++active;
    const MixedAction y = translation_map(x, p, pp);
    const auto rep = check_translation(x, p, pp, y);
    marg = std::max(marg, rep.marginal_err);
    shift = std::max(shift, rep.shift_err);
    row = std::max(row, rep.row_excess);
    const GameSpec& g = games[nk - 2];
    const MixedAction yj = random_action(rng, 1, 2);
    const double d = std::abs(payoff_e(g, pp, {1.0}, 0, y, yj) - payoff_e(g, p, {1.0}, 0, x, yj));
    lip = std::max(lip, d - g.g_inf() * norm1(pp, p));
  }
  const bool pass = active >= 1000 && marg < 1e-12 && shift < 1e-12 && row <= 1e-12 && lip <= 1e-12;
  return {pass, fmt("%d in domain; marginal %.3g, shift %.3g, row excess %.3g, payoff Lipschitz excess %.3g", active,
                    marg, shift, row, lip)};
}

Outcome big_match_values() {
  const GameSpec bm = big_match();
  const FiniteBeliefGame G(bm, build_triangulation(1, 1), build_triangulation(1, 1));
  const ActionGrid g(1, 2, 1);
  const double vi_tol = 1e-6, oracle_tol = 1e-3;
  bool pass = true;
  std::string per;
  for (double lambda : {0.5, 0.1, 0.01}) {
    const double vi = solve_discounted(G, lambda, g, g, vi_tol).values[0];
    const auto r = solve_truncated(bm, {1.0}, {1.0}, 0, lambda, oracle_tol);
    pass = pass && std::abs(vi - 0.5) <= 2e-3 && std::abs(r.value - 0.5) <= 2e-3 &&
           std::abs(vi - r.value) <= vi_tol + r.error_bound;
    per += fmt(" lambda=%g vi=%.6f oracle=%.6f(+-%.1g)", lambda, vi, r.value, r.error_bound);
  }
  return {pass, per.substr(1)};
}

Outcome discretization_convergence() {
  bool pass = true;
  std::string per;
  const double lambda = 0.2, slack = 5e-3;
  for (std::uint64_t seed : {5, 6, 7}) {
    std::mt19937_64 rng(seed);
    RandomGameOptions o;
    o.num_k = 2;
    o.num_absorbing = 2;
    o.max_stay = 0.3;
    const GameSpec s = random_absorbing_game(rng, o);
    const Belief p{0.5, 0.5};
    const auto r = solve_truncated(s, p, {1.0}, 0, lambda, 1e-3);
    const ActionGrid gx(2, s.num_i(), 8), gy(1, s.num_j(), 8);
    std::vector<double> err;
    for (int n : {2, 4, 8}) {
      const FiniteBeliefGame G(s, build_triangulation(2, n), build_triangulation(1, 1));
      const auto v = solve_discounted(G, lambda, gx, gy, 1e-6);
      err.push_back(std::abs(v.values[G.index(*G.tri_k().vertex_index(p), 0, 0)] - r.value));
    }
    pass = pass && err[1] <= err[0] + slack && err[2] <= err[1] + slack;
    per += fmt(" seed %d: %.4f %.4f %.4f;", static_cast<int>(seed), err[0], err[1], err[2]);
  }
  return {pass, "errors N=2,4,8" + per};
}

struct Revelation {
  GameSpec spec = load_spec(std::string(ABSORB_TEST_DATA) + "/revelation.json");
  FiniteBeliefGame G{spec, build_triangulation(2, 4), build_triangulation(1, 1)};
  ActionGrid gx{2, 2, 4}, gy{1, 2, 4};
  ValueFunction v = solve_discounted(G, 0.2, gx, gy, 1e-6);
  std::shared_ptr<const StagePolicy> stage = std::make_shared<StagePolicy>(G, v, gx, gy, 0.2);
};

Outcome coupling_identities() {
  const Revelation r;
  CouplingOptions o;
  o.eps = 0.25;
  o.horizon = 50;
  o.n_paths = 50000;
  o.seed = 105;
  o.workers = default_workers();
  const auto st = simulate_coupling(r.G, greedy_concise_strategy(r.stage, o.eps), stage_optimal_p2(r.stage),
                                    {0.5, 0.5}, {1.0}, 0, o);
  bool pass = st.active_stages >= 100000;
  std::string z;
  for (const auto& c : st.z_mean) {
    pass = pass && std::abs(c.mean()) <= 3.0 * c.std_error();
    z += fmt(" %.2g(se %.2g)", c.mean(), c.std_error());
  }
  const auto& d = st.variance_diff;
  pass = pass && std::abs(d.mean()) <= 3.0 * d.std_error();
  return {pass, fmt("%zu active stages; Z mean", st.active_stages) + z +
                    fmt("; E|P'-P|^2 %.4g vs sum E|Z|^2 %.4g, diff %.2g (se %.2g)", st.sq_gap.mean(),
                        st.sq_increments.mean(), d.mean(), d.std_error())};
}

Outcome variation_bound() {
  const Revelation r;
  const double eps = 0.25;
  const auto tau = stage_optimal_p2(r.stage);
  const Policy t = [tau](const Belief& p, const Belief& q, int w) { return tau(p, q, w).collapse(); };
  const auto st = simulate_eta(r.spec, greedy_concise_strategy(r.stage, eps), t, {0.5, 0.5}, {1.0}, 0, 10000, 106,
                               eps, 20000, default_workers());
  const double bound = 3.0 * std::sqrt(2.0) * std::pow(eps, -5.0);
  const bool pass = st.variation.mean() <= bound && st.sq_variation.mean() <= 1.0 + 3.0 * st.sq_variation.std_error();
  return {pass, fmt("E sum|dp|_1 %.4f (<= %.1f); sum E|dp|_2^2 %.4f (se %.2g, <= 1)", st.variation.mean(), bound,
                    st.sq_variation.mean(), st.sq_variation.std_error())};
}

Outcome separable_decomposition() {
  std::mt19937_64 rng(107);
  RandomGameOptions o;
  o.num_k = 2;
  o.num_l = 2;
  o.num_i = 2;
  o.num_j = 3;
  const GameSpec s = random_absorbing_game(rng, o);
  const FiniteBeliefGame G(s, build_triangulation(2, 4), build_triangulation(2, 4));
  const auto rep = separable_decomposition_check(G, 1000, 108);
  return {rep.payoff_err < 1e-12 && rep.transition_err < 1e-12,
          fmt("payoff err %.3g, transition err %.3g (< 1e-12)", rep.payoff_err, rep.transition_err)};
}

Outcome strategy_lifting() {
  const GameSpec bm = big_match();
  const double lambda = 0.1;
  const FiniteBeliefGame B(bm, build_triangulation(1, 1), build_triangulation(1, 1));
  const ActionGrid g(1, 2, 4);
  const auto v = solve_discounted(B, lambda, g, g, 1e-6);
  const auto sp = std::make_shared<StagePolicy>(B, v, g, g, lambda);
  const StatePolicy tau = [](int) { return Vec{0.5, 0.5}; };
  const auto st = lift_strategy(bm, B.tri_k(), stage_optimal_p1(sp), tau, {1.0}, 0, lambda, 100000,
                                horizon_cap(lambda), 109, default_workers());
  const bool pass = std::abs(st.diff.mean()) <= 3.0 * st.diff.std_error();
  return {pass, fmt("lifted %.4f (se %.2g), split game %.4f, paired diff %.3g (se %.2g)", st.gamma.mean(),
                    st.gamma.std_error(), st.gamma_phi.mean(), st.diff.mean(), st.diff.std_error())};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const Criterion all[] = {
      {"splitting conservation", 10, splitting_conservation},
      {"(alpha,C) certificate", 30, alpha_c_certificate},
      {"silent-mapping suite", 60, silent_mapping_suite},
      {"translation-mapping suite", 60, translation_suite},
      {"Big Match value", 120, big_match_values},
      {"discretization convergence", 600, discretization_convergence},
      {"coupling zero mean and variance identity", 300, coupling_identities},
      {"L1-variation bound", 120, variation_bound},
      {"separable decomposition", 10, separable_decomposition},
      {"strategy lifting", 300, strategy_lifting},
  };
  int failures = 0, n = 0;
  for (const auto& c : all) {
    ++n;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = o.pass && dt < c.limit_s;
    failures += !pass;
    std::printf("%s %2d %s: %s [%.1fs, limit %.0fs]\n", pass ? "PASS" : "FAIL", n, c.name, o.detail.c_str(), dt,
                c.limit_s);
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", n - failures, n);
  return failures;
}

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

// Monte Carlo engine for belief dynamics: the greedy concise strategy, plain
// belief-game trajectories, the coupled exact/split process and the lifting
// of strategies from the split game back to the original game.

#ifndef ABSORB_COUPLING_SIM_HPP_
#define ABSORB_COUPLING_SIM_HPP_

#include <functional>
#include <map>
#include <mutex>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "absorb/belief_kernel.hpp"
#include "absorb/common.hpp"
#include "absorb/game_model.hpp"
#include "absorb/strategy_transforms.hpp"
#include "absorb/triangulation.hpp"
#include "absorb/value_engine.hpp"

namespace absorb {

// A finitely supported law over mixed actions.
struct Lottery {
  std::vector<MixedAction> atoms;
  Vec probs;

  static Lottery dirac(MixedAction x) { return {{std::move(x)}, {1.0}}; }

  template <class Rng>
  const MixedAction& draw(Rng& rng) const {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return atoms[sample_index(probs, u(rng))];
  }

  // Expected mixed action.
  MixedAction collapse() const {
    MixedAction out(atoms.front().num_types(), atoms.front().num_actions());
    for (std::size_t n = 0; n < atoms.size(); ++n)
      for (int k = 0; k < out.num_types(); ++k)
        for (int i = 0; i < out.num_actions(); ++i) out.at(k, i) += probs[n] * atoms[n].at(k, i);
    return out;
  }
};

using Policy = std::function<MixedAction(const Belief&, const Belief&, int)>;
using LotteryPolicy = std::function<Lottery(const Belief&, const Belief&, int)>;

// Same row for every type: reveals nothing.
inline MixedAction uniform_action(int types, int actions) {
  const Vec row(actions, 1.0 / actions);
  return MixedAction::uniform_rows(types, row);
}

// Stage-game solutions of the finite game at arbitrary beliefs, memoized.
// At absorbing states actions cannot change payoffs, and both players use a
// uniform type-independent action so beliefs stop moving.
class StagePolicy {
 public:
  StagePolicy(const FiniteBeliefGame& G, ValueFunction v, ActionGrid gx, ActionGrid gy, double lambda)
      : G_(G), v_(std::move(v)), gx_(std::move(gx)), gy_(std::move(gy)), lambda_(lambda) {}

  Lottery p1(const Belief& p, const Belief& q, int w) const { return solve(p, q, w).first; }
  Lottery p2(const Belief& p, const Belief& q, int w) const { return solve(p, q, w).second; }

  const FiniteBeliefGame& game() const { return G_; }
  const ValueFunction& values() const { return v_; }

 private:
  using Key = std::tuple<Belief, Belief, int>;
  std::pair<Lottery, Lottery> solve(const Belief& p, const Belief& q, int w) const {
    const Key key{p, q, w};
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = memo_.find(key);
      if (it != memo_.end()) return it->second;
    }
    const GameSpec& s = G_.spec();
    std::pair<Lottery, Lottery> out;
    if (G_.info().is_absorbing_state[w]) {
      out.first = Lottery::dirac(uniform_action(s.num_k(), s.num_i()));
      out.second = Lottery::dirac(uniform_action(s.num_l(), s.num_j()));
    } else {
      const StageGame sg = stage_game(G_, v_, p, q, w, gx_, gy_, lambda_);
      const MatrixGameSolution sol = matrix_game_value(sg.M);
      for (std::size_t r = 0; r < sg.row_ids.size(); ++r)
        if (sol.row[r] > 0.0) {
          out.first.atoms.push_back(gx_[sg.row_ids[r]]);
          out.first.probs.push_back(sol.row[r]);
        }
      for (std::size_t c = 0; c < sg.col_ids.size(); ++c)
        if (sol.col[c] > 0.0) {
          out.second.atoms.push_back(gy_[sg.col_ids[c]]);
          out.second.probs.push_back(sol.col[c]);
        }
    }
    std::lock_guard<std::mutex> lock(mu_);
    memo_.emplace(key, out);
    return out;
  }

  const FiniteBeliefGame& G_;
  ValueFunction v_;
  ActionGrid gx_, gy_;
  double lambda_;
  mutable std::mutex mu_;
  mutable std::map<Key, std::pair<Lottery, Lottery>> memo_;
};

// Player 1's optimal stage mix collapsed to one mixed action, then made
// concise and ambiguous by the silent mapping at eps0.
inline Policy greedy_concise_strategy(std::shared_ptr<const StagePolicy> stage, double eps) {
  const double e0 = eps0_of(eps);
  return [stage, e0](const Belief& p, const Belief& q, int w) {
    const MixedAction x = stage->p1(p, q, w).collapse();
    return silent_map(x, p, e0);
  };
}

inline LotteryPolicy stage_optimal_p2(std::shared_ptr<const StagePolicy> stage) {
  return [stage](const Belief& p, const Belief& q, int w) { return stage->p2(p, q, w); };
}

inline LotteryPolicy stage_optimal_p1(std::shared_ptr<const StagePolicy> stage) {
  return [stage](const Belief& p, const Belief& q, int w) { return stage->p1(p, q, w); };
}

// Runs fn(path) for every path and returns results in path order.
template <class Result, class Fn>
std::vector<Result> run_paths(std::size_t n_paths, unsigned workers, Fn fn) {
  std::vector<Result> out(n_paths);
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(1, n_paths))));
  if (workers == 1) {
    for (std::size_t n = 0; n < n_paths; ++n) out[n] = fn(n);
    return out;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < workers; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t n = t; n < n_paths; n += workers) out[n] = fn(n);
    });
  for (auto& th : pool) th.join();
  return out;
}

inline int horizon_cap(double lambda, double delta = 1e-4) {
  if (lambda >= 1.0) return 1;
  return static_cast<int>(std::ceil(std::log(delta) / std::log(1.0 - lambda)));
}

// ---------------------------------------------------------------------------
// Belief-game trajectories.

struct EtaPath {
  std::vector<Belief> p;  // p_1 .. p_{H+1}
  std::vector<int> states;
  double variation = 0.0;  // sum_{m <= T} |p_{m+1} - p_m|_1
  double sq_variation = 0.0;  // sum_m |p_{m+1} - p_m|_2^2
  Vec increment_sum;  // sum_m (p_{m+1} - p_m)
  int stages = 0;
};

struct EtaStats {
  RunningStat variation;
  RunningStat sq_variation;
  std::vector<RunningStat> increment;  // per coordinate, over path-stages
  double bound = 0.0;                  // 3 sqrt|K| eps^-5
  std::size_t paths = 0;
  int horizon = 0;
};

// One trajectory of the belief game with Player 2 always keeping the exact
// posterior. T is the last stage whose belief is outside the eps-frontier.
template <class Rng>
EtaPath simulate_eta_path(const GameSpec& spec, const Policy& sigma, const Policy& tau, const Belief& p0,
                          const Belief& q0, int w0, int horizon, double eps, Rng& rng,
                          std::vector<Vec>* increments = nullptr) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const AbsorbingInfo info = classify_states(spec);
  EtaPath path;
  Belief p = p0, q = q0;
  int w = w0;
  path.p.push_back(p);
  path.states.push_back(w);
  path.increment_sum.assign(p.size(), 0.0);
  for (int m = 1; m <= horizon; ++m) {
    const MixedAction x = sigma(p, q, w);
    const MixedAction y = tau(p, q, w);
    const Vec xb = marginal(x, p), yb = marginal(y, q);
    const int i = static_cast<int>(sample_index(xb, u(rng)));
    const int j = static_cast<int>(sample_index(yb, u(rng)));
    const int w2 = static_cast<int>(sample_index(spec.rho_row(w, i, j), u(rng)));
    const Belief pn = bayes_update(x, p, i, xb[i]);
    q = bayes_update(y, q, j, yb[j]);
    Vec d(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) d[k] = pn[k] - p[k];
    if (increments) increments->push_back(d);
    for (std::size_t k = 0; k < p.size(); ++k) path.increment_sum[k] += d[k];
    path.sq_variation += norm2(pn, p) * norm2(pn, p);
    p = pn;
    w = w2;
    path.p.push_back(p);
    path.states.push_back(w);
    path.stages = m;
    // Absorbed with frozen beliefs: nothing moves any more.
    if (info.is_absorbing_state[w] && d == Vec(p.size(), 0.0)) {
      const MixedAction xa = sigma(p, q, w);
      bool frozen = true;
      for (int k = 0; k < xa.num_types() && frozen; ++k)
        for (int a = 0; a < xa.num_actions(); ++a)
          if (xa.at(k, a) != xa.at(0, a)) frozen = false;
      if (frozen) break;
    }
  }
  int T = 0;
  for (std::size_t m = 0; m < path.p.size(); ++m)
    if (!in_frontier(path.p[m], eps)) T = static_cast<int>(m) + 1;
  for (int m = 1; m <= T && m < static_cast<int>(path.p.size()); ++m) path.variation += norm1(path.p[m], path.p[m - 1]);
  return path;
}

inline EtaStats simulate_eta(const GameSpec& spec, const Policy& sigma, const Policy& tau, const Belief& p,
                             const Belief& q, int w, int horizon, std::uint64_t seed, double eps, std::size_t n_paths,
                             unsigned workers = 1) {
  if (horizon <= 0) throw PreconditionError("horizon must be positive");
  struct R {
    EtaPath path;
    std::vector<Vec> inc;
  };
  auto results = run_paths<R>(n_paths, workers, [&](std::size_t n) {
    std::mt19937_64 rng(derive_seed(seed, n));
    R r;
    r.path = simulate_eta_path(spec, sigma, tau, p, q, w, horizon, eps, rng, &r.inc);
    return r;
  });
  EtaStats st;
  st.paths = n_paths;
  st.horizon = horizon;
  st.bound = 3.0 * std::sqrt(static_cast<double>(p.size())) * std::pow(eps, -5.0);
  st.increment.resize(p.size());
  for (const auto& r : results) {
    st.variation.add(r.path.variation);
    st.sq_variation.add(r.path.sq_variation);
    for (const auto& d : r.inc)
      for (std::size_t k = 0; k < d.size(); ++k) st.increment[k].add(d[k]);
  }
  return st;
}

// ---------------------------------------------------------------------------
// Coupled process.

struct CoupledStage {
  int m = 0;
  int omega = 0;
  Belief P, Pp, Q;
  MixedAction X, Xp, Yp;
  int I = 0, J = 0;
  bool active = false;  // m < T0
  Vec Z;
};

struct CoupledTrace {
  std::vector<CoupledStage> stages;
  int T0 = -1;  // -1: not reached within the horizon
  Belief P_final, Pp_final, Q_final;
  int omega_final = 0;
};

struct CouplingStats {
  std::size_t paths = 0;
  int horizon = 0;
  // sup_t E|P'_{t^T0} - P_{t^T0}|_1 (value at the maximizing t and its SE)
  double sup_l1_gap = 0.0;
  double sup_l1_gap_se = 0.0;
  RunningStat l1_at_T0;        // 1{T0 < inf} |P'_T0 - P_T0|_1
  RunningStat stop_off_frontier;  // 1{T0 < inf, P'_T0 not in F_2eps}
  RunningStat variation;       // sum_{m <= T} |P_{m+1} - P_m|_1
  std::vector<RunningStat> z_mean;  // per coordinate, over active path-stages
  std::size_t active_stages = 0;
  RunningStat sq_gap;          // |P'_{H^T0} - P_{H^T0}|_2^2
  RunningStat sq_increments;   // sum_m |Z_m|_2^2
  RunningStat variance_diff;   // paired difference of the two above
  double alpha = 0.0;          // triangulation stepsize
  double alpha_gate = 0.0;     // eps^11 / 12 (C+1)^-1 |K|^-2
  bool gate_holds = false;
  std::vector<std::string> warnings;
  std::vector<CoupledTrace> traces;  // kept only when requested
};

namespace detail {

// The stopping condition at stage m holds when the translation is active
// and P stays eps away from the frontier.
inline bool coupling_condition(const MixedAction& X, const Belief& P, const Belief& Pp, double eps) {
  for (std::size_t k = 0; k < P.size(); ++k)
    if (!(P[k] >= eps) || !(Pp[k] > 0.0)) return false;
  return in_translation_domain(X, P, Pp);
}

}  // namespace detail

template <class Rng>
CoupledTrace simulate_coupled_path(const FiniteBeliefGame& G, const Policy& sigma_eta, const LotteryPolicy& tau_f,
                                   const Belief& p, const Belief& q, int w0, double eps, int horizon, Rng& rng) {
  const GameSpec& s = G.spec();
  std::uniform_real_distribution<double> u(0.0, 1.0);
  CoupledTrace tr;
  Belief P = p, Pp = p, Q = q;
  int w = w0;
  bool stopped = false;
  for (int m = 1; m <= horizon; ++m) {
    CoupledStage st;
    st.m = m;
    st.omega = w;
    st.P = P;
    st.Pp = Pp;
    st.Q = Q;
    st.X = sigma_eta(P, Q, w);
    st.Yp = tau_f(Pp, Q, w).draw(rng);
    st.Xp = translation_map(st.X, P, Pp);
    if (!stopped && !detail::coupling_condition(st.X, P, Pp, eps)) {
      stopped = true;
      tr.T0 = m;
    }
    st.active = !stopped;
    const Vec xb = marginal(st.X, P);
    const Vec yb = marginal(st.Yp, Q);
    st.I = static_cast<int>(sample_index(xb, u(rng)));
    st.J = static_cast<int>(sample_index(yb, u(rng)));
    const int w2 = static_cast<int>(sample_index(s.rho_row(w, st.I, st.J), u(rng)));
    const Belief Pn = bayes_update(st.X, P, st.I, xb[st.I]);
    const Vec xpb = marginal(st.Xp, Pp);
    const Belief post = bayes_update(st.Xp, Pp, st.I, xpb[st.I]);
    const Splitting sp = G.tri_k().split(post);
    Vec wp(sp.size());
    for (std::size_t a = 0; a < sp.size(); ++a) wp[a] = sp[a].weight;
    const Belief Ppn = G.tri_k().vertex(sp[sample_index(wp, u(rng))].vertex);
    const Belief qpost = bayes_update(st.Yp, Q, st.J, yb[st.J]);
    const Splitting sq = G.tri_l().split(qpost);
    Vec wq(sq.size());
    for (std::size_t a = 0; a < sq.size(); ++a) wq[a] = sq[a].weight;
    const Belief Qn = G.tri_l().vertex(sq[sample_index(wq, u(rng))].vertex);
    st.Z.assign(P.size(), 0.0);
    if (st.active)
      for (std::size_t k = 0; k < P.size(); ++k) st.Z[k] = Ppn[k] - post[k];
    tr.stages.push_back(std::move(st));
    const bool moved = Pn != P || Ppn != Pp || Qn != Q;
    P = Pn;
    Pp = Ppn;
    Q = Qn;
    w = w2;
    if (G.info().is_absorbing_state[w] && !moved && G.info().is_absorbing_state[tr.stages.back().omega]) break;
  }
  tr.P_final = P;
  tr.Pp_final = Pp;
  tr.Q_final = Q;
  tr.omega_final = w;
  return tr;
}

inline double alpha_gate(double eps, double c_cert, int num_k) {
  return std::pow(eps, 11.0) / 12.0 / (c_cert + 1.0) / (static_cast<double>(num_k) * num_k);
}

struct CouplingOptions {
  double eps = 0.1;
  int horizon = 50;
  std::size_t n_paths = 1000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  bool keep_traces = false;
  double c_cert = -1.0;  // flatness constant; measured when negative
};

inline CouplingStats simulate_coupling(const FiniteBeliefGame& G, const Policy& sigma_eta, const LotteryPolicy& tau_f,
                                       const Belief& p, const Belief& q, int w, const CouplingOptions& opt) {
  if (!G.tri_k().vertex_index(p)) throw PreconditionError("initial p must be a vertex of the triangulation");
  if (!G.tri_l().vertex_index(q)) throw PreconditionError("initial q must be a vertex of the triangulation");
  if (opt.horizon <= 0) throw PreconditionError("horizon must be positive");
  auto traces = run_paths<CoupledTrace>(opt.n_paths, opt.workers, [&](std::size_t n) {
    std::mt19937_64 rng(derive_seed(opt.seed, n));
    return simulate_coupled_path(G, sigma_eta, tau_f, p, q, w, opt.eps, opt.horizon, rng);
  });

  CouplingStats st;
  st.paths = opt.n_paths;
  st.horizon = opt.horizon;
  st.alpha = G.tri_k().stepsize();
  const double c = opt.c_cert >= 0.0 ? opt.c_cert : certify_alphaC(G.tri_k(), 2000).c_cert;
  st.alpha_gate = alpha_gate(opt.eps, c, G.spec().num_k());
  st.gate_holds = st.alpha <= st.alpha_gate;
  if (!st.gate_holds)
    st.warnings.push_back("triangulation stepsize exceeds the coupling gate eps^11/12/(C+1)/|K|^2");

  const std::size_t nk = p.size();
  st.z_mean.resize(nk);
  std::vector<RunningStat> gap_at(opt.horizon + 1);
  for (const auto& tr : traces) {
    // |P'_{t^T0} - P_{t^T0}|_1 for t = 1..H+1 (frozen after T0 or absorption).
    const int T0 = tr.T0;
    auto belief_at = [&](int t, bool prime) -> const Belief& {
      const int n = static_cast<int>(tr.stages.size());
      if (t <= n) return prime ? tr.stages[t - 1].Pp : tr.stages[t - 1].P;
      return prime ? tr.Pp_final : tr.P_final;
    };
    for (int t = 1; t <= opt.horizon + 1; ++t) {
      const int tt = (T0 > 0) ? std::min(t, T0) : t;
      gap_at[t - 1].add(norm1(belief_at(tt, true), belief_at(tt, false)));
    }
    if (T0 > 0) {
      st.l1_at_T0.add(norm1(belief_at(T0, true), belief_at(T0, false)));
      st.stop_off_frontier.add(in_frontier(belief_at(T0, true), 2.0 * opt.eps) ? 0.0 : 1.0);
    } else {
      st.l1_at_T0.add(0.0);
      st.stop_off_frontier.add(0.0);
    }
    // Variation of P up to its last stage outside the eps-frontier.
    std::vector<Belief> Ps;
    for (const auto& s : tr.stages) Ps.push_back(s.P);
    Ps.push_back(tr.P_final);
    int T = 0;
    for (std::size_t m = 0; m < Ps.size(); ++m)
      if (!in_frontier(Ps[m], opt.eps)) T = static_cast<int>(m) + 1;
    double var = 0.0;
    for (int m = 1; m <= T && m < static_cast<int>(Ps.size()); ++m) var += norm1(Ps[m], Ps[m - 1]);
    st.variation.add(var);

    double zsq = 0.0;
    for (const auto& s : tr.stages) {
      if (!s.active) continue;
      ++st.active_stages;
      for (std::size_t k = 0; k < nk; ++k) st.z_mean[k].add(s.Z[k]);
      zsq += s.Z[0] * s.Z[0];
      for (std::size_t k = 1; k < nk; ++k) zsq += s.Z[k] * s.Z[k];
    }
    const int tend = (T0 > 0) ? std::min(opt.horizon + 1, T0) : opt.horizon + 1;
    const double g2 = std::pow(norm2(belief_at(tend, true), belief_at(tend, false)), 2);
    st.sq_gap.add(g2);
    st.sq_increments.add(zsq);
    st.variance_diff.add(g2 - zsq);
  }
  for (const auto& g : gap_at)
    if (g.mean() >= st.sup_l1_gap) {
      st.sup_l1_gap = g.mean();
      st.sup_l1_gap_se = g.std_error();
    }
  if (opt.keep_traces) st.traces = std::move(traces);
  return st;
}

// ---------------------------------------------------------------------------
// Lifting a strategy of the split game back to the original game (one-sided).

struct LiftStats {
  std::size_t paths = 0;
  int horizon = 0;
  RunningStat gamma;     // discounted payoff in the original game
  RunningStat gamma_phi; // discounted payoff of the split game
  RunningStat diff;      // paired difference
};

// Player 2 in the original game, stationary on the state.
using StatePolicy = std::function<Vec(int)>;

// Player 1 holds her type k and plays X(.|k) for X drawn from sigma_phi at
// the split belief; after each stage the split belief is redrawn with
// type-dependent weights S[v|post] v(k) / post(k), which keeps the law of k
// given the split history equal to the split belief.
template <class Rng>
std::pair<double, double> simulate_lifted_path(const GameSpec& spec, const SimplexTriangulation& tri,
                                               const LotteryPolicy& sigma_phi, const StatePolicy& tau,
                                               const Belief& p0, int w0, double lambda, int horizon, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int k = static_cast<int>(sample_index(p0, u(rng)));
  const Belief q{1.0};
  Belief P = p0;
  int w = w0;
  double disc = lambda, pay = 0.0, pay_phi = 0.0;
  for (int m = 1; m <= horizon; ++m) {
    const MixedAction X = sigma_phi(P, q, w).draw(rng);
    const Vec jd = tau(w);
    const int j = static_cast<int>(sample_index(jd, u(rng)));
    const int i = static_cast<int>(sample_index(X.row(k), u(rng)));
    pay += disc * spec.g(k, 0, w, i, j);
    double gphi = 0.0;
    for (int kk = 0; kk < spec.num_k(); ++kk)
      for (int ii = 0; ii < spec.num_i(); ++ii) gphi += P[kk] * X.at(kk, ii) * spec.g(kk, 0, w, ii, j);
    pay_phi += disc * gphi;
    const int w2 = static_cast<int>(sample_index(spec.rho_row(w, i, j), u(rng)));
    const Belief post = bayes_update(X, P, i);
    const Splitting sp = tri.split(post);
    Vec wk(sp.size());
    for (std::size_t a = 0; a < sp.size(); ++a) wk[a] = sp[a].weight * tri.vertex(sp[a].vertex)[k] / post[k];
    P = tri.vertex(sp[sample_index(wk, u(rng))].vertex);
    w = w2;
    disc *= (1.0 - lambda);
  }
  return {pay, pay_phi};
}

inline LiftStats lift_strategy(const GameSpec& spec, const SimplexTriangulation& tri, const LotteryPolicy& sigma_phi,
                               const StatePolicy& tau, const Belief& p, int w, double lambda, std::size_t n_paths,
                               int horizon, std::uint64_t seed, unsigned workers = 1) {
  if (spec.num_l() != 1) throw PreconditionError("strategy lifting needs one-sided information");
  if (!tri.vertex_index(p)) throw PreconditionError("initial p must be a vertex of the triangulation");
  auto res = run_paths<std::pair<double, double>>(n_paths, workers, [&](std::size_t n) {
    std::mt19937_64 rng(derive_seed(seed, n));
    return simulate_lifted_path(spec, tri, sigma_phi, tau, p, w, lambda, horizon, rng);
  });
  LiftStats st;
  st.paths = n_paths;
  st.horizon = horizon;
  for (const auto& [a, b] : res) {
    st.gamma.add(a);
    st.gamma_phi.add(b);
    st.diff.add(a - b);
  }
  return st;
}

}  // namespace absorb

#endif  // ABSORB_COUPLING_SIM_HPP_

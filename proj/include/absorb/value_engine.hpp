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

// The finite-state belief game on triangulation vertices: stage games on
// barycentric action grids, Shapley iteration, and the numerical checks
// around it.

#ifndef ABSORB_VALUE_ENGINE_HPP_
#define ABSORB_VALUE_ENGINE_HPP_

#include <functional>
#include <map>
#include <random>
#include <thread>
#include <vector>

#include "absorb/belief_kernel.hpp"
#include "absorb/common.hpp"
#include "absorb/game_model.hpp"
#include "absorb/matrix_game.hpp"
#include "absorb/triangulation.hpp"

namespace absorb {

// Product of m-th barycentric grids over Delta(I), one factor per type.
class ActionGrid {
 public:
  ActionGrid() = default;
  ActionGrid(int types, int actions, int m) : m_(m) {
    if (m < 1) throw PreconditionError("grid resolution must be at least 1");
    std::vector<Vec> rows;
    std::vector<int> c(actions, 0);
    enumerate_rows(0, m, c, rows);
    std::vector<int> pick(types, 0);
    for (;;) {
      MixedAction x(types, actions);
      for (int k = 0; k < types; ++k)
        for (int i = 0; i < actions; ++i) x.at(k, i) = rows[pick[k]][i];
      actions_.push_back(std::move(x));
      int k = 0;
      while (k < types && ++pick[k] == static_cast<int>(rows.size())) pick[k++] = 0;
      if (k == types) break;
    }
  }

  int resolution() const { return m_; }
  std::size_t size() const { return actions_.size(); }
  const MixedAction& operator[](std::size_t n) const { return actions_[n]; }
  const std::vector<MixedAction>& actions() const { return actions_; }

  // Elements whose rows are all the same pure action.
  std::vector<std::size_t> pure_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t n = 0; n < actions_.size(); ++n) {
      const auto& x = actions_[n];
      bool pure = true;
      int which = -1;
      for (int k = 0; k < x.num_types() && pure; ++k)
        for (int i = 0; i < x.num_actions(); ++i) {
          const double v = x.at(k, i);
          if (v == 1.0) {
            if (which >= 0 && which != i) pure = false;
            which = i;
          } else if (v != 0.0) {
            pure = false;
          }
        }
      if (pure) out.push_back(n);
    }
    return out;
  }

 private:
  void enumerate_rows(int i, int left, std::vector<int>& c, std::vector<Vec>& rows) {
    const int n = static_cast<int>(c.size());
    if (i == n - 1) {
      c[i] = left;
      Vec r(n);
      for (int t = 0; t < n; ++t) r[t] = static_cast<double>(c[t]) / m_;
      rows.push_back(std::move(r));
      return;
    }
    for (int v = left; v >= 0; --v) {
      c[i] = v;
      enumerate_rows(i + 1, left - v, c, rows);
    }
  }

  int m_ = 1;
  std::vector<MixedAction> actions_;
};

class FiniteBeliefGame {
 public:
  FiniteBeliefGame(const GameSpec& spec, SimplexTriangulation tri_k, SimplexTriangulation tri_l)
      : spec_(spec), tri_k_(std::move(tri_k)), tri_l_(std::move(tri_l)), info_(classify_states(spec)) {
    const auto report = validate_game(spec_);
    if (!report.ok()) throw PreconditionError("invalid game: " + report.issues.front());
    if (tri_k_.types() != spec_.num_k() || tri_l_.types() != spec_.num_l())
      throw PreconditionError("triangulation dimension does not match the type sets");
  }

  const GameSpec& spec() const { return spec_; }
  const SimplexTriangulation& tri_k() const { return tri_k_; }
  const SimplexTriangulation& tri_l() const { return tri_l_; }
  const AbsorbingInfo& info() const { return info_; }

  int num_states() const { return tri_k_.num_vertices() * tri_l_.num_vertices() * spec_.num_states(); }
  int index(int a, int b, int w) const { return (a * tri_l_.num_vertices() + b) * spec_.num_states() + w; }
  void decode(int s, int& a, int& b, int& w) const {
    w = s % spec_.num_states();
    s /= spec_.num_states();
    b = s % tri_l_.num_vertices();
    a = s / tri_l_.num_vertices();
  }

  // Payoff of an absorbing state at beliefs (p, q); the value of every
  // discounted game started there.
  double absorbing_payoff(const Belief& p, const Belief& q, int w) const {
    double v = 0.0;
    for (int k = 0; k < spec_.num_k(); ++k)
      for (int l = 0; l < spec_.num_l(); ++l) v += p[k] * q[l] * spec_.g(k, l, w, 0, 0);
    return v;
  }

 private:
  GameSpec spec_;
  SimplexTriangulation tri_k_;
  SimplexTriangulation tri_l_;
  AbsorbingInfo info_;
};

inline FiniteBeliefGame build_gamma_f(const GameSpec& spec, const SimplexTriangulation& tri_k,
                                      const SimplexTriangulation& tri_l) {
  return FiniteBeliefGame(spec, tri_k, tri_l);
}

struct FAtom {
  int p_vertex = 0;
  int q_vertex = 0;
  int state = 0;
  double mass = 0.0;
};

// Transition of the finite game from beliefs (p, q) (not necessarily
// vertices): draw (i, j, w'), then split both posteriors.
inline std::vector<FAtom> transition_f(const FiniteBeliefGame& G, const Belief& p, const Belief& q, int w,
                                       const MixedAction& x, const MixedAction& y) {
  const GameSpec& s = G.spec();
  const Vec xb = marginal(x, p);
  const Vec yb = marginal(y, q);
  std::map<std::tuple<int, int, int>, double> acc;
  std::vector<Splitting> sp(s.num_i()), sq(s.num_j());
  for (int i = 0; i < s.num_i(); ++i)
    if (xb[i] > 0.0) sp[i] = G.tri_k().split(bayes_update(x, p, i, xb[i]));
  for (int j = 0; j < s.num_j(); ++j)
    if (yb[j] > 0.0) sq[j] = G.tri_l().split(bayes_update(y, q, j, yb[j]));
  for (int i = 0; i < s.num_i(); ++i) {
    if (xb[i] == 0.0) continue;
    for (int j = 0; j < s.num_j(); ++j) {
      if (yb[j] == 0.0) continue;
      for (int w2 = 0; w2 < s.num_states(); ++w2) {
        const double r = s.rho(w, i, j, w2);
        if (r == 0.0) continue;
        for (const auto& a : sp[i])
          for (const auto& b : sq[j]) acc[{a.vertex, b.vertex, w2}] += xb[i] * yb[j] * r * a.weight * b.weight;
      }
    }
  }
  std::vector<FAtom> out;
  for (auto& [key, m] : acc) out.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), m});
  return out;
}

struct ValueFunction {
  Vec values;
  double lambda = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

// v extended off the vertex set by splitting.
inline double lifted_value(const FiniteBeliefGame& G, const ValueFunction& v, const Belief& p, const Belief& q,
                           int w) {
  double out = 0.0;
  for (const auto& a : G.tri_k().split(p))
    for (const auto& b : G.tri_l().split(q)) out += a.weight * b.weight * v.values[G.index(a.vertex, b.vertex, w)];
  return out;
}

namespace detail {

// One player's grid actions at a belief: marginals and posterior splits.
struct SideMoves {
  std::vector<std::size_t> ids;       // grid indices in use
  std::vector<Vec> marg;              // per move, per action
  std::vector<std::vector<Splitting>> splits;
};

inline SideMoves side_moves(const ActionGrid& grid, bool pure_only, const Belief& p,
                            const SimplexTriangulation& tri) {
  SideMoves s;
  if (pure_only) {
    s.ids = grid.pure_indices();
  } else {
    s.ids.resize(grid.size());
    std::iota(s.ids.begin(), s.ids.end(), 0);
  }
  for (std::size_t id : s.ids) {
    const MixedAction& x = grid[id];
    Vec xb = marginal(x, p);
    std::vector<Splitting> sp(xb.size());
    for (std::size_t i = 0; i < xb.size(); ++i)
      if (xb[i] > 0.0) sp[i] = tri.split(bayes_update(x, p, static_cast<int>(i), xb[i]));
    s.marg.push_back(std::move(xb));
    s.splits.push_back(std::move(sp));
  }
  return s;
}

}  // namespace detail

struct StageGame {
  Matrix M;
  std::vector<std::size_t> row_ids;  // into the P1 grid
  std::vector<std::size_t> col_ids;  // into the P2 grid
};

// Stage matrix lambda * g + (1 - lambda) * E[v] at (p, q, w) with the split
// continuation. A side with a single type only uses pure grid points: its
// payoff is linear in its own action, so nothing is lost.
inline StageGame stage_game(const FiniteBeliefGame& G, const ValueFunction& v, const Belief& p, const Belief& q,
                            int w, const ActionGrid& gx, const ActionGrid& gy, double lambda) {
  const GameSpec& s = G.spec();
  const auto X = detail::side_moves(gx, s.num_k() == 1, p, G.tri_k());
  const auto Y = detail::side_moves(gy, s.num_l() == 1, q, G.tri_l());
  StageGame sg;
  sg.row_ids = X.ids;
  sg.col_ids = Y.ids;
  sg.M = Matrix(static_cast<int>(X.ids.size()), static_cast<int>(Y.ids.size()));
  const int nw = s.num_states();
  const int nl = G.tri_l().num_vertices();
  for (std::size_t r = 0; r < X.ids.size(); ++r) {
    const MixedAction& x = gx[X.ids[r]];
    // Continuation of each (i, q-vertex, w') after splitting p^x(.|i).
    std::vector<Vec> cont(s.num_i());
    for (int i = 0; i < s.num_i(); ++i) {
      if (X.marg[r][i] == 0.0) continue;
      cont[i].assign(static_cast<std::size_t>(nl) * nw, 0.0);
      for (const auto& a : X.splits[r][i])
        for (int b = 0; b < nl; ++b)
          for (int w2 = 0; w2 < nw; ++w2)
            cont[i][static_cast<std::size_t>(b) * nw + w2] += a.weight * v.values[G.index(a.vertex, b, w2)];
    }
    for (std::size_t c = 0; c < Y.ids.size(); ++c) {
      const MixedAction& y = gy[Y.ids[c]];
      double e = 0.0;
      for (int i = 0; i < s.num_i(); ++i) {
        const double xi = X.marg[r][i];
        if (xi == 0.0) continue;
        for (int j = 0; j < s.num_j(); ++j) {
          const double yj = Y.marg[c][j];
          if (yj == 0.0) continue;
          double h = 0.0;
          for (int w2 = 0; w2 < nw; ++w2) {
            const double rho = s.rho(w, i, j, w2);
            if (rho == 0.0) continue;
            double inner = 0.0;
            for (const auto& b : Y.splits[c][j]) inner += b.weight * cont[i][static_cast<std::size_t>(b.vertex) * nw + w2];
            h += rho * inner;
          }
          e += xi * yj * h;
        }
      }
      sg.M(static_cast<int>(r), static_cast<int>(c)) = lambda * payoff_e(s, p, q, w, x, y) + (1.0 - lambda) * e;
    }
  }
  return sg;
}

inline ValueFunction initial_values(const FiniteBeliefGame& G) {
  ValueFunction v;
  v.values.assign(G.num_states(), 0.0);
  for (int st = 0; st < G.num_states(); ++st) {
    int a, b, w;
    G.decode(st, a, b, w);
    if (G.info().is_absorbing_state[w]) v.values[st] = G.absorbing_payoff(G.tri_k().vertex(a), G.tri_l().vertex(b), w);
  }
  return v;
}

inline unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

// One Shapley sweep. States are independent; workers write disjoint slots of
// the output buffer.
inline ValueFunction shapley_operator(const FiniteBeliefGame& G, const ValueFunction& v, const ActionGrid& gx,
                                      const ActionGrid& gy, double lambda, unsigned workers = 1) {
  ValueFunction out;
  out.lambda = lambda;
  out.values.assign(v.values.size(), 0.0);
  auto work = [&](int begin, int step) {
    for (int st = begin; st < G.num_states(); st += step) {
      int a, b, w;
      G.decode(st, a, b, w);
      const StageGame sg = stage_game(G, v, G.tri_k().vertex(a), G.tri_l().vertex(b), w, gx, gy, lambda);
      out.values[st] = matrix_game_value(sg.M).value;
    }
  };
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(G.num_states())));
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work, static_cast<int>(t), static_cast<int>(workers));
    for (auto& th : pool) th.join();
  }
  out.residual = norm_inf(out.values, v.values);
  return out;
}

inline int iteration_cap(double lambda, double tol, double g_inf) {
  if (lambda >= 1.0 || g_inf == 0.0) return 10;
  const double n = std::ceil(std::log(tol * lambda / (2.0 * g_inf)) / std::log(1.0 - lambda));
  return std::max(10, 10 * static_cast<int>(std::max(1.0, n)));
}

// Iterates until the sup-norm residual is at most tol * lambda.
inline ValueFunction solve_discounted(const FiniteBeliefGame& G, double lambda, const ActionGrid& gx,
                                      const ActionGrid& gy, double tol, unsigned workers = 1,
                                      const ValueFunction* warm = nullptr) {
  if (!(lambda > 0.0 && lambda <= 1.0)) throw PreconditionError("lambda must lie in (0, 1]");
  if (!(tol > 0.0)) throw PreconditionError("tol must be positive");
  ValueFunction v = warm ? *warm : initial_values(G);
  v.lambda = lambda;
  const int cap = iteration_cap(lambda, tol, G.spec().g_inf());
  for (int it = 1; it <= cap; ++it) {
    ValueFunction next = shapley_operator(G, v, gx, gy, lambda, workers);
    next.iterations = it;
    v = std::move(next);
    if (v.residual <= tol * lambda) return v;
  }
  throw Error("value iteration cap reached; residual " + std::to_string(v.residual));
}

// ---------------------------------------------------------------------------
// Checks.

struct EtaStageReport {
  double value_e = 0.0;        // min over y with exact posteriors
  double value_ef = 0.0;       // min over y and the E/F switch
  double max_violation = 0.0;  // max_y (E(y) - F(y)); positive means F helps Player 2
  double deviation() const { return value_e - value_ef; }
};

// Player 1 fixed at x; Player 2 picks y on the grid and either keeps the exact
// posterior of q (E) or splits it onto the vertices (F). `v` is evaluated at
// arbitrary (p, q, w).
inline EtaStageReport eta_stage_check(const FiniteBeliefGame& G,
                                      const std::function<double(const Belief&, const Belief&, int)>& v,
                                      const Belief& p, const Belief& q, int w, const MixedAction& x,
                                      const ActionGrid& gy, double lambda) {
  const GameSpec& s = G.spec();
  EtaStageReport rep;
  rep.value_e = std::numeric_limits<double>::infinity();
  rep.value_ef = rep.value_e;
  rep.max_violation = -rep.value_e;
  const Vec xb = marginal(x, p);
  for (std::size_t c = 0; c < gy.size(); ++c) {
    const MixedAction& y = gy[c];
    const Vec yb = marginal(y, q);
    double e = 0.0, f = 0.0;
    for (int i = 0; i < s.num_i(); ++i) {
      if (xb[i] == 0.0) continue;
      const Belief pi = bayes_update(x, p, i, xb[i]);
      for (int j = 0; j < s.num_j(); ++j) {
        if (yb[j] == 0.0) continue;
        const Belief qj = bayes_update(y, q, j, yb[j]);
        const Splitting sq = G.tri_l().split(qj);
        for (int w2 = 0; w2 < s.num_states(); ++w2) {
          const double r = s.rho(w, i, j, w2);
          if (r == 0.0) continue;
          const double m = xb[i] * yb[j] * r;
          e += m * v(pi, qj, w2);
          for (const auto& b : sq) f += m * b.weight * v(pi, G.tri_l().vertex(b.vertex), w2);
        }
      }
    }
    const double g = lambda * payoff_e(s, p, q, w, x, y);
    const double ve = g + (1.0 - lambda) * e;
    const double vf = g + (1.0 - lambda) * f;
    rep.value_e = std::min(rep.value_e, ve);
    rep.value_ef = std::min({rep.value_ef, ve, vf});
    rep.max_violation = std::max(rep.max_violation, ve - vf);
  }
  return rep;
}

struct DecompositionReport {
  std::size_t samples = 0;
  double payoff_err = 0.0;
  double transition_err = 0.0;
};

// Rebuilds payoff and transition of the finite game from their separable
// forms and compares with the direct computation on random (state, x, y).
inline DecompositionReport separable_decomposition_check(const FiniteBeliefGame& G, std::size_t samples,
                                                         std::uint64_t seed = 1) {
  const GameSpec& s = G.spec();
  std::mt19937_64 rng(seed);
  DecompositionReport rep;
  rep.samples = samples;
  const int nk = s.num_k(), nl = s.num_l(), ni = s.num_i(), nj = s.num_j(), nw = s.num_states();
  auto random_action = [&](int types, int actions) {
    MixedAction x(types, actions);
    for (int k = 0; k < types; ++k) {
      const Vec r = sample_simplex(rng, actions);
      for (int i = 0; i < actions; ++i) x.at(k, i) = r[i];
    }
    return x;
  };
  std::uniform_int_distribution<int> pick_state(0, G.num_states() - 1);
  for (std::size_t n = 0; n < samples; ++n) {
    int a, b, w;
    G.decode(pick_state(rng), a, b, w);
    const Belief& p = G.tri_k().vertex(a);
    const Belief& q = G.tri_l().vertex(b);
    const MixedAction x = random_action(nk, ni);
    const MixedAction y = random_action(nl, nj);

    // Payoff: sum over I' = K x I and J' = L x J of m a b.
    double g_sep = 0.0;
    for (int k = 0; k < nk; ++k)
      for (int i = 0; i < ni; ++i) {
        const double ai = x.at(k, i);
        for (int l = 0; l < nl; ++l)
          for (int j = 0; j < nj; ++j) g_sep += (p[k] * q[l] * s.g(k, l, w, i, j)) * ai * y.at(l, j);
      }
    rep.payoff_err = std::max(rep.payoff_err, std::abs(g_sep - payoff_e(s, p, q, w, x, y)));

    // Transition: sum_{i,j} rho(w'|w,i,j) c_i(p') d_j(q').
    const Vec xb = marginal(x, p), yb = marginal(y, q);
    const int np = G.tri_k().num_vertices(), nq = G.tri_l().num_vertices();
    std::vector<Vec> c(ni, Vec(np, 0.0)), d(nj, Vec(nq, 0.0));
    for (int i = 0; i < ni; ++i)
      if (xb[i] > 0.0)
        for (const auto& at : G.tri_k().split(bayes_update(x, p, i, xb[i]))) c[i][at.vertex] += xb[i] * at.weight;
    for (int j = 0; j < nj; ++j)
      if (yb[j] > 0.0)
        for (const auto& at : G.tri_l().split(bayes_update(y, q, j, yb[j]))) d[j][at.vertex] += yb[j] * at.weight;
    Vec sep(static_cast<std::size_t>(np) * nq * nw, 0.0);
    for (int i = 0; i < ni; ++i)
      for (int j = 0; j < nj; ++j)
        for (int w2 = 0; w2 < nw; ++w2) {
          const double r = s.rho(w, i, j, w2);
          if (r == 0.0) continue;
          for (int pv = 0; pv < np; ++pv) {
            if (c[i][pv] == 0.0) continue;
            for (int qv = 0; qv < nq; ++qv) sep[(static_cast<std::size_t>(pv) * nq + qv) * nw + w2] += r * c[i][pv] * d[j][qv];
          }
        }
    Vec direct(sep.size(), 0.0);
    for (const auto& at : transition_f(G, p, q, w, x, y))
      direct[(static_cast<std::size_t>(at.p_vertex) * nq + at.q_vertex) * nw + at.state] += at.mass;
    rep.transition_err = std::max(rep.transition_err, norm_inf(sep, direct));
  }
  return rep;
}

struct FrontierReport {
  std::size_t checked = 0;
  double f0_gap = 0.0;  // sup over F0 vertices of |v^f - proxy|
  double alpha = 0.0;
  double bound_term = 0.0;  // (4 eps + alpha) |g|
  double worst_slack = 0.0;  // min over checked states of lhs - rhs (>= -tol is fine)
  std::vector<std::string> violations;
};

// `proxy(p, q, w)` returns (value, error bound) of an independent solver.
inline FrontierReport frontier_lipschitz_check(
    const FiniteBeliefGame& G, const ValueFunction& vf, double eps,
    const std::function<std::pair<double, double>(const Belief&, const Belief&, int)>& proxy, double tol) {
  if (!G.spec().is_augmented()) throw PreconditionError("frontier check requires a safety-augmented game");
  FrontierReport rep;
  rep.alpha = G.tri_k().stepsize();
  rep.bound_term = (4.0 * eps + rep.alpha) * G.spec().g_inf();
  rep.worst_slack = std::numeric_limits<double>::infinity();
  const int np = G.tri_k().num_vertices(), nq = G.tri_l().num_vertices(), nw = G.spec().num_states();
  std::map<int, std::pair<double, double>> cache;
  auto get = [&](int st) {
    auto it = cache.find(st);
    if (it != cache.end()) return it->second;
    int a, b, w;
    G.decode(st, a, b, w);
    auto r = proxy(G.tri_k().vertex(a), G.tri_l().vertex(b), w);
    cache[st] = r;
    return r;
  };
  double proxy_err = 0.0;
  for (int a = 0; a < np; ++a) {
    if (!in_frontier(G.tri_k().vertex(a), 0.0)) continue;
    for (int b = 0; b < nq; ++b)
      for (int w = 0; w < nw; ++w) {
        const int st = G.index(a, b, w);
        const auto [val, err] = get(st);
        rep.f0_gap = std::max(rep.f0_gap, std::abs(vf.values[st] - val));
        proxy_err = std::max(proxy_err, err);
      }
  }
  for (int a = 0; a < np; ++a) {
    if (!in_frontier(G.tri_k().vertex(a), eps)) continue;
    for (int b = 0; b < nq; ++b)
      for (int w = 0; w < nw; ++w) {
        const int st = G.index(a, b, w);
        const auto [val, err] = get(st);
        const double slack = vf.values[st] - (val - rep.f0_gap - rep.bound_term);
        rep.worst_slack = std::min(rep.worst_slack, slack);
        ++rep.checked;
        if (slack < -(tol + err + proxy_err))
          rep.violations.push_back("state " + std::to_string(st) + " below the frontier bound by " +
                                   std::to_string(-slack));
      }
  }
  return rep;
}

struct LimitValueTable {
  std::vector<double> ladder;
  std::vector<ValueFunction> values;
  Vec oscillation;  // per state, over the last three ladder points
  double max_oscillation() const { return oscillation.empty() ? 0.0 : *std::max_element(oscillation.begin(), oscillation.end()); }
};

inline LimitValueTable limit_value_estimate(const FiniteBeliefGame& G, const ActionGrid& gx, const ActionGrid& gy,
                                            const std::vector<double>& ladder, double tol, unsigned workers = 1) {
  for (std::size_t n = 0; n < ladder.size(); ++n) {
    if (!(ladder[n] > 0.0 && ladder[n] <= 1.0)) throw PreconditionError("ladder entries must lie in (0, 1]");
    if (n > 0 && !(ladder[n] < ladder[n - 1])) throw PreconditionError("ladder must be strictly decreasing");
  }
  LimitValueTable t;
  t.ladder = ladder;
  const ValueFunction* warm = nullptr;
  for (double lam : ladder) {
    t.values.push_back(solve_discounted(G, lam, gx, gy, tol, workers, warm));
    warm = &t.values.back();
  }
  t.oscillation.assign(G.num_states(), 0.0);
  const std::size_t first = ladder.size() >= 3 ? ladder.size() - 3 : 0;
  for (int st = 0; st < G.num_states(); ++st) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t n = first; n < t.values.size(); ++n) {
      lo = std::min(lo, t.values[n].values[st]);
      hi = std::max(hi, t.values[n].values[st]);
    }
    t.oscillation[st] = t.values.empty() ? 0.0 : hi - lo;
  }
  return t;
}

}  // namespace absorb

#endif  // ABSORB_VALUE_ENGINE_HPP_

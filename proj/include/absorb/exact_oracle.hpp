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

// Reference values of the original game at small scale. The discounted game
// is truncated after a horizon whose tail is below tol / 2, and the finite
// game with private types is solved on its public tree.
//
// With one type on each side the truncated game is a finite stochastic game
// with perfect information on states and is solved by backward induction.
// Otherwise behavior strategies per (type, public history) are found by CFR+
// and the result is certified by exact best responses on both sides, so the
// reported interval always contains the truncated value.

#ifndef ABSORB_EXACT_ORACLE_HPP_
#define ABSORB_EXACT_ORACLE_HPP_

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "absorb/belief_kernel.hpp"
#include "absorb/common.hpp"
#include "absorb/game_model.hpp"
#include "absorb/matrix_game.hpp"

namespace absorb {

struct OracleOptions {
  // Upper bound on tree nodes times per-node strategy entries.
  double budget = 2e6;
  int max_iterations = 200000;
  int check_every = 25;
};

struct OracleResult {
  double value = 0.0;
  double lower = 0.0;  // certified bounds on the truncated value
  double upper = 0.0;
  double error_bound = 0.0;  // |value - v_lambda| <= error_bound
  double tail = 0.0;
  int horizon = 0;
  int iterations = 0;
  std::size_t nodes = 0;
};

namespace detail {

// Largest probability of staying among non-absorbing states in one stage.
inline double stay_probability(const GameSpec& spec, const AbsorbingInfo& info) {
  double s = 0.0;
  for (int w : info.nonabsorbing)
    for (int i = 0; i < spec.num_i(); ++i)
      for (int j = 0; j < spec.num_j(); ++j) {
        double t = 0.0;
        for (int w2 : info.nonabsorbing) t += spec.rho(w, i, j, w2);
        s = std::max(s, t);
      }
  return std::min(1.0, s);
}

// Smallest N with ((1 - lambda) s)^N |g| <= tol / 2.
inline int horizon_for(double lambda, double stay, double g_inf, double tol) {
  const double r = (1.0 - lambda) * stay;
  if (g_inf == 0.0 || r == 0.0) return 1;
  if (r >= 1.0) throw PreconditionError("no finite horizon: lambda = 0 with no absorption");
  const double n = std::log(tol / (2.0 * g_inf)) / std::log(r);
  return std::max(1, static_cast<int>(std::ceil(n - 1e-12)));
}

// Number of non-absorbing public nodes up to the horizon.
inline double count_nodes(const GameSpec& spec, const AbsorbingInfo& info, int horizon) {
  const double branch = static_cast<double>(spec.num_i()) * spec.num_j() * std::max<std::size_t>(1, info.nonabsorbing.size());
  double total = 0.0, level = 1.0;
  for (int t = 1; t <= horizon; ++t) {
    total += level;
    level *= branch;
    if (total > 1e15) break;
  }
  return total;
}

struct PublicNode {
  int state = 0;
  int stage = 1;  // 1-based
  int first_child = -1;  // children indexed (i, j, nonabsorbing successor)
};

// Stage weights: either discounted lambda (1-lambda)^(t-1) or Cesaro 1/n.
struct Weights {
  std::vector<double> stage;  // weight of stage t (index t-1)
  std::vector<double> tail;   // total weight of stages >= t (index t-1), for absorbing states
};

inline Weights discounted_weights(double lambda, int horizon) {
  Weights w;
  double d = 1.0;
  for (int t = 1; t <= horizon + 1; ++t) {
    w.stage.push_back(lambda * d);
    w.tail.push_back(d);  // sum_{m >= t} lambda (1-lambda)^(m-1)
    d *= (1.0 - lambda);
  }
  return w;
}

inline Weights cesaro_weights(int n) {
  Weights w;
  for (int t = 1; t <= n + 1; ++t) {
    w.stage.push_back(t <= n ? 1.0 / n : 0.0);
    w.tail.push_back(t <= n ? static_cast<double>(n - t + 1) / n : 0.0);
  }
  return w;
}

class PublicTreeSolver {
 public:
  PublicTreeSolver(const GameSpec& spec, const AbsorbingInfo& info, int horizon, Weights weights)
      : s_(spec), info_(info), horizon_(horizon), wt_(std::move(weights)) {
    nk_ = s_.num_k();
    nl_ = s_.num_l();
    ni_ = s_.num_i();
    nj_ = s_.num_j();
    nonabs_ = info_.nonabsorbing;
    slot_.assign(s_.num_states(), -1);
    for (std::size_t n = 0; n < nonabs_.size(); ++n) slot_[nonabs_[n]] = static_cast<int>(n);
  }

  void build(int root_state) {
    nodes_.clear();
    nodes_.push_back({root_state, 1, -1});
    const int fan = ni_ * nj_ * static_cast<int>(nonabs_.size());
    for (std::size_t n = 0; n < nodes_.size(); ++n) {
      if (nodes_[n].stage >= horizon_) continue;
      const int first = static_cast<int>(nodes_.size());
      nodes_[n].first_child = first;
      const int t = nodes_[n].stage;
      for (int c = 0; c < fan; ++c) nodes_.push_back({nonabs_[c % nonabs_.size()], t + 1, -1});
    }
    reg1_.assign(nodes_.size() * nk_ * ni_, 0.0);
    reg2_.assign(nodes_.size() * nl_ * nj_, 0.0);
    avg1_.assign(nodes_.size() * nk_ * ni_, 0.0);
    avg2_.assign(nodes_.size() * nl_ * nj_, 0.0);
  }

  std::size_t size() const { return nodes_.size(); }

  // Value of a trivial root (absorbing start).
  double absorbing_root(const Belief& p, const Belief& q, int w) const {
    double v = 0.0;
    for (int k = 0; k < nk_; ++k)
      for (int l = 0; l < nl_; ++l) v += p[k] * q[l] * s_.g(k, l, w, 0, 0);
    return v * wt_.tail[0];
  }

  void solve(const Belief& p, const Belief& q, double target_gap, const OracleOptions& opt, double& lower,
             double& upper, int& iterations) {
    p_ = p;
    q_ = q;
    lower = -std::numeric_limits<double>::infinity();
    upper = std::numeric_limits<double>::infinity();
    Vec r1(nk_), r2(nl_);
    for (iterations = 1; iterations <= opt.max_iterations; ++iterations) {
      for (int who = 1; who <= 2; ++who) {
        for (int k = 0; k < nk_; ++k) r1[k] = p_[k];
        for (int l = 0; l < nl_; ++l) r2[l] = q_[l];
        Vec u(static_cast<std::size_t>(nk_) * nl_);
        cfr(0, r1, r2, 1.0, who, static_cast<double>(iterations), u);
      }
      if (iterations % opt.check_every == 0 || iterations == opt.max_iterations) {
        lower = std::max(lower, best_response_p2());
        upper = std::min(upper, best_response_p1());
        if (upper - lower <= target_gap) break;
      }
    }
    iterations = std::min(iterations, opt.max_iterations);
  }

  // Exact backward induction; valid only with one type on each side.
  double backward_induction(int root_state) const {
    // Values depend only on (stage, state).
    std::vector<Vec> V(horizon_ + 2, Vec(s_.num_states(), 0.0));
    for (int t = horizon_; t >= 1; --t) {
      for (int w = 0; w < s_.num_states(); ++w) {
        if (info_.is_absorbing_state[w]) {
          V[t][w] = s_.g(0, 0, w, 0, 0) * wt_.tail[t - 1];
          continue;
        }
        Matrix M(ni_, nj_);
        for (int i = 0; i < ni_; ++i)
          for (int j = 0; j < nj_; ++j) {
            double c = wt_.stage[t - 1] * s_.g(0, 0, w, i, j);
            for (int w2 = 0; w2 < s_.num_states(); ++w2) {
              const double r = s_.rho(w, i, j, w2);
              if (r == 0.0) continue;
              const double next = info_.is_absorbing_state[w2] ? s_.g(0, 0, w2, 0, 0) * wt_.tail[t] : V[t + 1][w2];
              c += r * next;
            }
            M(i, j) = c;
          }
        V[t][w] = matrix_game_value(M).value;
      }
    }
    return V[1][root_state];
  }

 private:
  double& R1(int n, int k, int i) { return reg1_[(static_cast<std::size_t>(n) * nk_ + k) * ni_ + i]; }
  double& R2(int n, int l, int j) { return reg2_[(static_cast<std::size_t>(n) * nl_ + l) * nj_ + j]; }
  double& A1(int n, int k, int i) { return avg1_[(static_cast<std::size_t>(n) * nk_ + k) * ni_ + i]; }
  double& A2(int n, int l, int j) { return avg2_[(static_cast<std::size_t>(n) * nl_ + l) * nj_ + j]; }

  static void match(const double* reg, int n, double* out) {
    double s = 0.0;
    for (int a = 0; a < n; ++a) s += std::max(0.0, reg[a]);
    for (int a = 0; a < n; ++a) out[a] = s > 0.0 ? std::max(0.0, reg[a]) / s : 1.0 / n;
  }

  static void normalize(const double* acc, int n, double* out) {
    double s = 0.0;
    for (int a = 0; a < n; ++a) s += acc[a];
    for (int a = 0; a < n; ++a) out[a] = s > 0.0 ? acc[a] / s : 1.0 / n;
  }

  // Continuation of an absorbing successor for types (k, l) from stage t+1.
  double absorbing_tail(int w2, int k, int l, int t) const { return s_.g(k, l, w2, 0, 0) * wt_.tail[t]; }

  // Returns u[k * nl + l]: expected remaining payoff at node n given types.
  void cfr(int n, const Vec& r1, const Vec& r2, double chance, int who, double iter, Vec& u) {
    const PublicNode node = nodes_[n];
    const int w = node.state, t = node.stage;
    std::vector<double> sig(static_cast<std::size_t>(nk_) * ni_), tau(static_cast<std::size_t>(nl_) * nj_);
    for (int k = 0; k < nk_; ++k) match(&R1(n, k, 0), ni_, &sig[static_cast<std::size_t>(k) * ni_]);
    for (int l = 0; l < nl_; ++l) match(&R2(n, l, 0), nj_, &tau[static_cast<std::size_t>(l) * nj_]);

    // V[(i, j)][k, l]
    const std::size_t kl = static_cast<std::size_t>(nk_) * nl_;
    std::vector<double> V(static_cast<std::size_t>(ni_) * nj_ * kl, 0.0);
    Vec cu(kl), r1c(nk_), r2c(nl_);
    const int fan_state = static_cast<int>(nonabs_.size());
    for (int i = 0; i < ni_; ++i)
      for (int j = 0; j < nj_; ++j) {
        double* Vij = &V[(static_cast<std::size_t>(i) * nj_ + j) * kl];
        for (int k = 0; k < nk_; ++k)
          for (int l = 0; l < nl_; ++l) Vij[k * nl_ + l] = wt_.stage[t - 1] * s_.g(k, l, w, i, j);
        for (int w2 = 0; w2 < s_.num_states(); ++w2) {
          const double r = s_.rho(w, i, j, w2);
          if (r == 0.0) continue;
          if (info_.is_absorbing_state[w2]) {
            for (int k = 0; k < nk_; ++k)
              for (int l = 0; l < nl_; ++l) Vij[k * nl_ + l] += r * absorbing_tail(w2, k, l, t);
            continue;
          }
          if (node.first_child < 0) continue;  // truncated
          const int child = node.first_child + (i * nj_ + j) * fan_state + slot_[w2];
          for (int k = 0; k < nk_; ++k) r1c[k] = r1[k] * sig[static_cast<std::size_t>(k) * ni_ + i];
          for (int l = 0; l < nl_; ++l) r2c[l] = r2[l] * tau[static_cast<std::size_t>(l) * nj_ + j];
          bool live1 = false, live2 = false;
          for (double v : r1c) live1 = live1 || v > 0.0;
          for (double v : r2c) live2 = live2 || v > 0.0;
          // Regrets below still need the child value when only the updating
          // player's own reach is zero.
          if (!live1 && !live2) continue;
          cfr(child, r1c, r2c, chance * r, who, iter, cu);
          for (std::size_t a = 0; a < kl; ++a) Vij[a] += r * cu[a];
        }
      }
    for (int k = 0; k < nk_; ++k)
      for (int l = 0; l < nl_; ++l) {
        double acc = 0.0;
        for (int i = 0; i < ni_; ++i)
          for (int j = 0; j < nj_; ++j)
            acc += sig[static_cast<std::size_t>(k) * ni_ + i] * tau[static_cast<std::size_t>(l) * nj_ + j] *
                   V[(static_cast<std::size_t>(i) * nj_ + j) * kl + k * nl_ + l];
        u[k * nl_ + l] = acc;
      }
    if (who == 1) {
      for (int k = 0; k < nk_; ++k) {
        Vec qv(ni_, 0.0);
        double base = 0.0;
        for (int i = 0; i < ni_; ++i) {
          for (int l = 0; l < nl_; ++l) {
            double a = 0.0;
            for (int j = 0; j < nj_; ++j)
              a += tau[static_cast<std::size_t>(l) * nj_ + j] * V[(static_cast<std::size_t>(i) * nj_ + j) * kl + k * nl_ + l];
            qv[i] += r2[l] * a;
          }
          qv[i] *= chance;
          base += sig[static_cast<std::size_t>(k) * ni_ + i] * qv[i];
        }
        for (int i = 0; i < ni_; ++i) {
          R1(n, k, i) = std::max(0.0, R1(n, k, i) + qv[i] - base);
          A1(n, k, i) += iter * r1[k] * sig[static_cast<std::size_t>(k) * ni_ + i];
        }
      }
    } else {
      for (int l = 0; l < nl_; ++l) {
        Vec qv(nj_, 0.0);
        double base = 0.0;
        for (int j = 0; j < nj_; ++j) {
          for (int k = 0; k < nk_; ++k) {
            double a = 0.0;
            for (int i = 0; i < ni_; ++i)
              a += sig[static_cast<std::size_t>(k) * ni_ + i] * V[(static_cast<std::size_t>(i) * nj_ + j) * kl + k * nl_ + l];
            qv[j] += r1[k] * a;
          }
          qv[j] *= chance;
          base += tau[static_cast<std::size_t>(l) * nj_ + j] * qv[j];
        }
        for (int j = 0; j < nj_; ++j) {
          R2(n, l, j) = std::max(0.0, R2(n, l, j) + base - qv[j]);
          A2(n, l, j) += iter * r2[l] * tau[static_cast<std::size_t>(l) * nj_ + j];
        }
      }
    }
  }

  // Best response of Player 2 to Player 1's average strategy: a lower bound.
  double best_response_p2() {
    Vec r1(nk_);
    for (int k = 0; k < nk_; ++k) r1[k] = p_[k];
    const Vec out = br2(0, r1, 1.0);
    double v = 0.0;
    for (int l = 0; l < nl_; ++l) v += q_[l] * out[l];
    return v;
  }

  // Best response of Player 1 to Player 2's average strategy: an upper bound.
  double best_response_p1() {
    Vec r2(nl_);
    for (int l = 0; l < nl_; ++l) r2[l] = q_[l];
    const Vec out = br1(0, r2, 1.0);
    double v = 0.0;
    for (int k = 0; k < nk_; ++k) v += p_[k] * out[k];
    return v;
  }

  // Per type l: min over P2's choices of sum_k r1[k] * chance * payoff.
  Vec br2(int n, const Vec& r1, double chance) {
    const PublicNode node = nodes_[n];
    const int w = node.state, t = node.stage;
    std::vector<double> sig(static_cast<std::size_t>(nk_) * ni_);
    for (int k = 0; k < nk_; ++k) normalize(&A1(n, k, 0), ni_, &sig[static_cast<std::size_t>(k) * ni_]);
    const int fan_state = static_cast<int>(nonabs_.size());
    Vec best(nl_, std::numeric_limits<double>::infinity());
    Vec r1c(nk_);
    std::vector<Vec> val(nj_, Vec(nl_, 0.0));
    for (int j = 0; j < nj_; ++j) {
      for (int i = 0; i < ni_; ++i) {
        for (int k = 0; k < nk_; ++k) r1c[k] = r1[k] * sig[static_cast<std::size_t>(k) * ni_ + i];
        for (int l = 0; l < nl_; ++l) {
          double a = 0.0;
          for (int k = 0; k < nk_; ++k) a += r1c[k] * s_.g(k, l, w, i, j);
          val[j][l] += chance * wt_.stage[t - 1] * a;
        }
        for (int w2 = 0; w2 < s_.num_states(); ++w2) {
          const double r = s_.rho(w, i, j, w2);
          if (r == 0.0) continue;
          if (info_.is_absorbing_state[w2]) {
            for (int l = 0; l < nl_; ++l) {
              double a = 0.0;
              for (int k = 0; k < nk_; ++k) a += r1c[k] * absorbing_tail(w2, k, l, t);
              val[j][l] += chance * r * a;
            }
            continue;
          }
          if (node.first_child < 0) continue;
          const int child = node.first_child + (i * nj_ + j) * fan_state + slot_[w2];
          const Vec c = br2(child, r1c, chance * r);
          for (int l = 0; l < nl_; ++l) val[j][l] += c[l];
        }
      }
      for (int l = 0; l < nl_; ++l) best[l] = std::min(best[l], val[j][l]);
    }
    return best;
  }

  Vec br1(int n, const Vec& r2, double chance) {
    const PublicNode node = nodes_[n];
    const int w = node.state, t = node.stage;
    std::vector<double> tau(static_cast<std::size_t>(nl_) * nj_);
    for (int l = 0; l < nl_; ++l) normalize(&A2(n, l, 0), nj_, &tau[static_cast<std::size_t>(l) * nj_]);
    const int fan_state = static_cast<int>(nonabs_.size());
    Vec best(nk_, -std::numeric_limits<double>::infinity());
    Vec r2c(nl_);
    for (int i = 0; i < ni_; ++i) {
      Vec val(nk_, 0.0);
      for (int j = 0; j < nj_; ++j) {
        for (int l = 0; l < nl_; ++l) r2c[l] = r2[l] * tau[static_cast<std::size_t>(l) * nj_ + j];
        for (int k = 0; k < nk_; ++k) {
          double a = 0.0;
          for (int l = 0; l < nl_; ++l) a += r2c[l] * s_.g(k, l, w, i, j);
          val[k] += chance * wt_.stage[t - 1] * a;
        }
        for (int w2 = 0; w2 < s_.num_states(); ++w2) {
          const double r = s_.rho(w, i, j, w2);
          if (r == 0.0) continue;
          if (info_.is_absorbing_state[w2]) {
            for (int k = 0; k < nk_; ++k) {
              double a = 0.0;
              for (int l = 0; l < nl_; ++l) a += r2c[l] * absorbing_tail(w2, k, l, t);
              val[k] += chance * r * a;
            }
            continue;
          }
          if (node.first_child < 0) continue;
          const int child = node.first_child + (i * nj_ + j) * fan_state + slot_[w2];
          const Vec c = br1(child, r2c, chance * r);
          for (int k = 0; k < nk_; ++k) val[k] += c[k];
        }
      }
      for (int k = 0; k < nk_; ++k) best[k] = std::max(best[k], val[k]);
    }
    return best;
  }

  const GameSpec& s_;
  const AbsorbingInfo& info_;
  int horizon_;
  Weights wt_;
  int nk_ = 0, nl_ = 0, ni_ = 0, nj_ = 0;
  std::vector<int> nonabs_;
  std::vector<int> slot_;
  std::vector<PublicNode> nodes_;
  Vec reg1_, reg2_, avg1_, avg2_;
  Belief p_, q_;
};

inline OracleResult solve_with_weights(const GameSpec& spec, const Belief& p, const Belief& q, int w, int horizon,
                                       const Weights& wt, double tail, double tol, const OracleOptions& opt) {
  const AbsorbingInfo info = classify_states(spec);
  OracleResult res;
  res.horizon = horizon;
  res.tail = tail;
  PublicTreeSolver solver(spec, info, horizon, wt);
  if (info.is_absorbing_state[w]) {
    res.value = res.lower = res.upper = solver.absorbing_root(p, q, w);
    res.error_bound = 0.0;
    return res;
  }
  if (spec.num_k() == 1 && spec.num_l() == 1) {
    res.value = res.lower = res.upper = solver.backward_induction(w);
    res.error_bound = tail;
    return res;
  }
  const double nodes = count_nodes(spec, info, horizon);
  const double entries = nodes * (spec.num_k() * spec.num_i() + spec.num_l() * spec.num_j());
  if (entries > opt.budget) throw BudgetError("truncated game exceeds the oracle budget", tol);
  solver.build(w);
  res.nodes = solver.size();
  solver.solve(p, q, std::max(0.0, tol - 2.0 * tail), opt, res.lower, res.upper, res.iterations);
  res.value = 0.5 * (res.lower + res.upper);
  res.error_bound = 0.5 * (res.upper - res.lower) + tail;
  return res;
}

}  // namespace detail

// Smallest tolerance whose horizon fits the budget (for error reporting).
inline double min_admissible_tol(const GameSpec& spec, double lambda, const OracleOptions& opt = {}) {
  const AbsorbingInfo info = classify_states(spec);
  const double stay = detail::stay_probability(spec, info);
  const double per = spec.num_k() * spec.num_i() + spec.num_l() * spec.num_j();
  int n = 1;
  while (detail::count_nodes(spec, info, n + 1) * per <= opt.budget && n < 10000) ++n;
  const double r = (1.0 - lambda) * stay;
  return 2.0 * spec.g_inf() * std::pow(r, n);
}

// v_lambda(p, q, w) within tol (the returned error_bound is at most tol
// unless CFR+ hits its iteration cap, in which case the honest bound is
// reported).
inline OracleResult solve_truncated(const GameSpec& spec, const Belief& p, const Belief& q, int w, double lambda,
                                    double tol, const OracleOptions& opt = {}) {
  if (!(lambda > 0.0 && lambda <= 1.0)) throw PreconditionError("lambda must lie in (0, 1]");
  if (!(tol > 0.0)) throw PreconditionError("tol must be positive");
  if (static_cast<int>(p.size()) != spec.num_k() || static_cast<int>(q.size()) != spec.num_l())
    throw PreconditionError("belief dimension mismatch");
  const AbsorbingInfo info = classify_states(spec);
  const double stay = detail::stay_probability(spec, info);
  const int horizon = detail::horizon_for(lambda, stay, spec.g_inf(), tol);
  const double tail = std::pow((1.0 - lambda) * stay, horizon) * spec.g_inf();
  try {
    return detail::solve_with_weights(spec, p, q, w, horizon, detail::discounted_weights(lambda, horizon), tail, tol,
                                      opt);
  } catch (const BudgetError&) {
    throw BudgetError("truncated game exceeds the oracle budget", min_admissible_tol(spec, lambda, opt));
  }
}

// Exact n-stage value with the Cesaro payoff.
inline OracleResult brute_force_vn(const GameSpec& spec, const Belief& p, const Belief& q, int w, int n,
                                   const OracleOptions& opt = {}) {
  if (n < 1) throw PreconditionError("n must be at least 1");
  return detail::solve_with_weights(spec, p, q, w, n, detail::cesaro_weights(n), 0.0, 1e-6, opt);
}

struct ProbeReport {
  std::size_t triples = 0;
  double worst_concavity = 0.0;   // max of convex-combination excess (should be <= 2 tol)
  double worst_convexity = 0.0;
  double worst_lipschitz = 0.0;   // max of |v(p)-v(p')| - |g| |p-p'|_1
  std::vector<std::string> violations;
};

// Samples p = b p' + (1-b) p'' and checks concavity in p and convexity in q
// of the oracle value, plus the Lipschitz bound, at tolerance 2 tol.
inline ProbeReport concavity_convexity_probe(const GameSpec& spec, int w, double lambda, std::size_t samples,
                                             double tol, std::uint64_t seed = 1, const OracleOptions& opt = {}) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ProbeReport rep;
  auto v = [&](const Belief& p, const Belief& q) { return solve_truncated(spec, p, q, w, lambda, tol, opt); };
  auto draw = [&](int n) {
    std::exponential_distribution<double> e(1.0);
    Belief b(n);
    double s = 0.0;
    for (double& x : b) s += (x = e(rng));
    for (double& x : b) x /= s;
    return b;
  };
  const double G = spec.g_inf();
  for (std::size_t n = 0; n < samples; ++n) {
    ++rep.triples;
    const double beta = unit(rng);
    const Belief q = draw(spec.num_l());
    if (spec.num_k() > 1) {
      const Belief p1 = draw(spec.num_k()), p2 = draw(spec.num_k());
      Belief pm(p1.size());
      for (std::size_t k = 0; k < pm.size(); ++k) pm[k] = beta * p1[k] + (1.0 - beta) * p2[k];
      const auto a = v(p1, q), b = v(p2, q), c = v(pm, q);
      const double err = a.error_bound + b.error_bound + c.error_bound;
      const double excess = beta * a.value + (1.0 - beta) * b.value - c.value;
      rep.worst_concavity = std::max(rep.worst_concavity, excess);
      if (excess > 2.0 * tol) rep.violations.push_back("concavity in p violated by " + std::to_string(excess));
      (void)err;
      for (const auto* other : {&a, &b}) {
        const Belief& po = (other == &a) ? p1 : p2;
        const double lip = std::abs(other->value - c.value) - G * norm1(po, pm);
        rep.worst_lipschitz = std::max(rep.worst_lipschitz, lip);
        if (lip > 2.0 * tol) rep.violations.push_back("Lipschitz bound in p violated by " + std::to_string(lip));
      }
    }
    if (spec.num_l() > 1) {
      const Belief p = draw(spec.num_k());
      const Belief q1 = draw(spec.num_l()), q2 = draw(spec.num_l());
      Belief qm(q1.size());
      for (std::size_t l = 0; l < qm.size(); ++l) qm[l] = beta * q1[l] + (1.0 - beta) * q2[l];
      const auto a = v(p, q1), b = v(p, q2), c = v(p, qm);
      const double excess = c.value - (beta * a.value + (1.0 - beta) * b.value);
      rep.worst_convexity = std::max(rep.worst_convexity, excess);
      if (excess > 2.0 * tol) rep.violations.push_back("convexity in q violated by " + std::to_string(excess));
    }
  }
  return rep;
}

}  // namespace absorb

#endif  // ABSORB_EXACT_ORACLE_HPP_

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

// Single-stage Bayesian computations on the belief space: marginals,
// posteriors, the belief-game transition and payoff, frontier membership.

#ifndef ABSORB_BELIEF_KERNEL_HPP_
#define ABSORB_BELIEF_KERNEL_HPP_

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "absorb/common.hpp"
#include "absorb/game_model.hpp"

namespace absorb {

// Conditional action distributions x(.|k), one row per type.
class MixedAction {
 public:
  MixedAction() = default;
  MixedAction(int num_types, int num_actions)
      : nk_(num_types), ni_(num_actions), w_(static_cast<std::size_t>(num_types) * num_actions, 0.0) {}
  MixedAction(int num_types, int num_actions, Vec w) : nk_(num_types), ni_(num_actions), w_(std::move(w)) {
    if (w_.size() != static_cast<std::size_t>(nk_) * ni_) throw PreconditionError("mixed action size mismatch");
  }

  // Same row for every type.
  static MixedAction uniform_rows(int num_types, std::span<const double> row) {
    MixedAction x(num_types, static_cast<int>(row.size()));
    for (int k = 0; k < num_types; ++k)
      for (int i = 0; i < x.ni_; ++i) x.at(k, i) = row[i];
    return x;
  }

  int num_types() const { return nk_; }
  int num_actions() const { return ni_; }
  double at(int k, int i) const { return w_[static_cast<std::size_t>(k) * ni_ + i]; }
  double& at(int k, int i) { return w_[static_cast<std::size_t>(k) * ni_ + i]; }
  std::span<const double> row(int k) const { return {w_.data() + static_cast<std::size_t>(k) * ni_, static_cast<std::size_t>(ni_)}; }
  std::span<double> row(int k) { return {w_.data() + static_cast<std::size_t>(k) * ni_, static_cast<std::size_t>(ni_)}; }
  const Vec& data() const { return w_; }

  bool valid(double tol = kStochasticTol) const {
    for (int k = 0; k < nk_; ++k)
      if (!is_probability_vector(row(k), tol)) return false;
    return true;
  }

  friend bool operator==(const MixedAction& a, const MixedAction& b) {
    return a.nk_ == b.nk_ && a.ni_ == b.ni_ && a.w_ == b.w_;
  }

 private:
  int nk_ = 0;
  int ni_ = 0;
  Vec w_;
};

inline std::vector<int> support(const Belief& p) {
  std::vector<int> s;
  for (std::size_t k = 0; k < p.size(); ++k)
    if (p[k] > 0.0) s.push_back(static_cast<int>(k));
  return s;
}

inline double min_positive(const Belief& p) {
  double m = 1.0;
  for (double v : p)
    if (v > 0.0) m = std::min(m, v);
  return m;
}

// Sup of 1/p over the support.
inline double inv_sup(const Belief& p) { return 1.0 / min_positive(p); }

inline void check_dims(const MixedAction& x, const Belief& p) {
  if (static_cast<int>(p.size()) != x.num_types())
    throw PreconditionError("belief dimension does not match the mixed action");
}

inline Vec marginal(const MixedAction& x, const Belief& p) {
  check_dims(x, p);
  Vec m(x.num_actions(), 0.0);
  for (int k = 0; k < x.num_types(); ++k) {
    if (p[k] == 0.0) continue;
    for (int i = 0; i < x.num_actions(); ++i) m[i] += p[k] * x.at(k, i);
  }
  return m;
}

// Posterior p^x(.|i); the prior itself when i has zero marginal probability.
inline Belief bayes_update(const MixedAction& x, const Belief& p, int i, double xbar_i) {
  if (xbar_i == 0.0) return p;
  // Same probability for every type in the support: nothing is learned.
  bool flat = true;
  double first = -1.0;
  for (std::size_t k = 0; k < p.size() && flat; ++k) {
    if (p[k] == 0.0) continue;
    const double v = x.at(static_cast<int>(k), i);
    if (first < 0.0) first = v;
    flat = v == first;
  }
  if (flat) return p;
  Belief post(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) post[k] = x.at(static_cast<int>(k), i) * p[k] / xbar_i;
  const double s = sum(post);
  if (std::abs(s - 1.0) > 1e-10)
    throw Error("posterior renormalization factor drifted beyond 1e-10");
  if (s != 1.0)
    for (double& v : post) v /= s;
  return post;
}

inline Belief bayes_update(const MixedAction& x, const Belief& p, int i) {
  check_dims(x, p);
  if (i < 0 || i >= x.num_actions()) throw PreconditionError("action index out of range");
  double xb = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) xb += p[k] * x.at(static_cast<int>(k), i);
  return bayes_update(x, p, i, xb);
}

struct BeliefAtom {
  Belief p;
  Belief q;
  int state = 0;
  double mass = 0.0;
};

// Law of the next (p', q', w') in the belief game. Atoms reached through
// different (i, j) are merged only when the beliefs coincide exactly.
inline std::vector<BeliefAtom> transition_e(const GameSpec& spec, const Belief& p, const Belief& q, int w,
                                            const MixedAction& x, const MixedAction& y) {
  const Vec xb = marginal(x, p);
  const Vec yb = marginal(y, q);
  std::vector<Belief> post_p(xb.size()), post_q(yb.size());
  for (int i = 0; i < spec.num_i(); ++i) post_p[i] = bayes_update(x, p, i, xb[i]);
  for (int j = 0; j < spec.num_j(); ++j) post_q[j] = bayes_update(y, q, j, yb[j]);

  std::map<std::tuple<Belief, Belief, int>, double> acc;
  for (int i = 0; i < spec.num_i(); ++i) {
    if (xb[i] == 0.0) continue;
    for (int j = 0; j < spec.num_j(); ++j) {
      if (yb[j] == 0.0) continue;
      const double pij = xb[i] * yb[j];
      for (int w2 = 0; w2 < spec.num_states(); ++w2) {
        const double r = spec.rho(w, i, j, w2);
        if (r == 0.0) continue;
        acc[{post_p[i], post_q[j], w2}] += pij * r;
      }
    }
  }
  std::vector<BeliefAtom> out;
  out.reserve(acc.size());
  for (auto& [key, mass] : acc) out.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), mass});
  return out;
}

inline double payoff_e(const GameSpec& spec, const Belief& p, const Belief& q, int w, const MixedAction& x,
                       const MixedAction& y) {
  check_dims(x, p);
  check_dims(y, q);
  double total = 0.0;
  for (int k = 0; k < spec.num_k(); ++k) {
    if (p[k] == 0.0) continue;
    for (int l = 0; l < spec.num_l(); ++l) {
      if (q[l] == 0.0) continue;
      double s = 0.0;
      for (int i = 0; i < spec.num_i(); ++i) {
        const double xi = x.at(k, i);
        if (xi == 0.0) continue;
        for (int j = 0; j < spec.num_j(); ++j) s += xi * y.at(l, j) * spec.g(k, l, w, i, j);
      }
      total += p[k] * q[l] * s;
    }
  }
  return total;
}

// Some coordinate at most eps (inclusive).
inline bool in_frontier(const Belief& p, double eps) {
  if (eps < 0.0) throw PreconditionError("frontier width must be nonnegative");
  for (double v : p)
    if (v <= eps) return true;
  return false;
}

}  // namespace absorb

#endif  // ABSORB_BELIEF_KERNEL_HPP_

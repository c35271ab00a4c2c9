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

// Action-level transformations: non-revealing classification, the silent
// mapping, conciseness and ambiguity predicates, convexification witnesses,
// the translation mapping and the jump bounds.

#ifndef ABSORB_STRATEGY_TRANSFORMS_HPP_
#define ABSORB_STRATEGY_TRANSFORMS_HPP_

#include <limits>
#include <string>
#include <vector>

#include "absorb/belief_kernel.hpp"
#include "absorb/common.hpp"

namespace absorb {

struct NRPartition {
  std::vector<int> nr;
  std::vector<int> r;
  std::vector<int> null;
  double mass_nr = 0.0;
  double mass_r = 0.0;

  bool in_nr(int i) const { return std::find(nr.begin(), nr.end(), i) != nr.end(); }
};

// i is non-revealing iff its marginal is positive and every row sits in the
// closed band [(1-eps) xbar(i), (1+eps) xbar(i)].
inline NRPartition classify_nr(const MixedAction& x, const Belief& p, double eps) {
  if (!(eps > 0.0)) throw PreconditionError("eps must be positive");
  const Vec xb = marginal(x, p);
  NRPartition part;
  for (int i = 0; i < x.num_actions(); ++i) {
    if (xb[i] == 0.0) {
      part.null.push_back(i);
      continue;
    }
    bool nr = true;
    for (int k = 0; k < x.num_types() && nr; ++k) {
      const double v = x.at(k, i);
      nr = (1.0 - eps) * xb[i] <= v && v <= (1.0 + eps) * xb[i];
    }
    if (nr) {
      part.nr.push_back(i);
      part.mass_nr += xb[i];
    } else {
      part.r.push_back(i);
      part.mass_r += xb[i];
    }
  }
  return part;
}

// eps0 with (1 - eps0) * eps0 = eps.
inline double eps0_of(double eps) {
  if (!(eps > 0.0 && eps <= 0.25)) throw PreconditionError("eps must lie in (0, 1/4]");
  return (1.0 - std::sqrt(1.0 - 4.0 * eps)) / 2.0;
}

inline MixedAction silent_map(const MixedAction& x, const Belief& p, double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw PreconditionError("eps must lie in (0, 1]");
  const Vec xb = marginal(x, p);
  const NRPartition part = classify_nr(x, p, eps);
  MixedAction out(x.num_types(), x.num_actions());
  for (int k = 0; k < x.num_types(); ++k) {
    double x_nr = 0.0;
    for (int i : part.nr) x_nr += x.at(k, i);
    const double factor = part.nr.empty() ? 0.0 : (1.0 - eps) * x_nr / part.mass_nr + eps;
    for (int i = 0; i < x.num_actions(); ++i) out.at(k, i) = (1.0 - eps) * x.at(k, i) + eps * xb[i];
    for (int i : part.nr) out.at(k, i) = factor * xb[i];
  }
  return out;
}

struct ConciseAmbiguous {
  bool is_concise = true;
  bool is_ambiguous = true;
};

inline ConciseAmbiguous concise_ambiguous_check(const MixedAction& xp, const Belief& p, double eps) {
  ConciseAmbiguous r;
  const Vec xb = marginal(xp, p);
  const NRPartition part = classify_nr(xp, p, eps);
  for (int k = 0; k < xp.num_types() && r.is_concise; ++k) {
    double x_nr = 0.0;
    for (int i : part.nr) x_nr += xp.at(k, i);
    for (int i : part.nr)
      if (std::abs(xp.at(k, i) - x_nr * xb[i] / part.mass_nr) > 1e-10) {
        r.is_concise = false;
        break;
      }
  }
  double pmin = *std::min_element(p.begin(), p.end());
  for (int i = 0; i < xp.num_actions() && r.is_ambiguous; ++i) {
    const Belief post = bayes_update(xp, p, i, xb[i]);
    for (double v : post)
      if (v < eps * pmin) {
        r.is_ambiguous = false;
        break;
      }
  }
  return r;
}

inline bool nr_stability_check(const MixedAction& x, const Belief& p, double eps) {
  const double e0 = eps0_of(eps);
  const MixedAction xp = silent_map(x, p, e0);
  return classify_nr(xp, p, eps).nr == classify_nr(x, p, e0).nr;
}

struct ConvexificationWitness {
  int n = 0;
  Vec beta;  // row-major n x n
  double epsilon = 0.0;
  double at(int i, int ip) const { return beta[static_cast<std::size_t>(i) * n + ip]; }
};

// Explicit witness for x' = c_{eps0}(x, p), certified at 6 eps.
inline ConvexificationWitness make_convexification_witness(const MixedAction& x, const Belief& p, double eps) {
  const double e0 = eps0_of(eps);
  const Vec xb = marginal(x, p);
  const NRPartition part = classify_nr(x, p, e0);
  const int n = x.num_actions();
  ConvexificationWitness w;
  w.n = n;
  w.epsilon = 6.0 * eps;
  w.beta.assign(static_cast<std::size_t>(n) * n, 0.0);
  std::vector<bool> is_nr(n, false);
  for (int i : part.nr) is_nr[i] = true;
  for (int i = 0; i < n; ++i)
    for (int ip = 0; ip < n; ++ip) {
      double b;
      if (is_nr[i])
        b = ((1.0 - e0) / part.mass_nr * (is_nr[ip] ? 1.0 : 0.0) + e0) * xb[ip];
      else
        b = (1.0 - e0) * (ip == i ? 1.0 : 0.0) + e0 * xb[ip];
      w.beta[static_cast<std::size_t>(i) * n + ip] = b;
    }
  return w;
}

struct ConvexificationReport {
  double posterior_mixing_err = 0.0;  // property 1
  double marginal_err = 0.0;          // property 2
  double transport_err = 0.0;         // property 3
  double max_l1_gap = 0.0;            // property 4 (compare with epsilon)
  bool beta_nonnegative = true;
  bool ok(double eps, double tol = 1e-9) const {
    return beta_nonnegative && posterior_mixing_err <= tol && marginal_err <= tol && transport_err <= tol &&
           max_l1_gap <= eps + tol;
  }
};

inline ConvexificationReport check_convexification(const MixedAction& x, const MixedAction& xp, const Belief& p,
                                                   const ConvexificationWitness& w) {
  ConvexificationReport rep;
  const Vec xb = marginal(x, p);
  const Vec xpb = marginal(xp, p);
  const int n = x.num_actions();
  std::vector<Belief> post(n), post_p(n);
  for (int i = 0; i < n; ++i) {
    post[i] = bayes_update(x, p, i, xb[i]);
    post_p[i] = bayes_update(xp, p, i, xpb[i]);
  }
  for (double b : w.beta)
    if (b < 0.0) rep.beta_nonnegative = false;
  for (int i = 0; i < n; ++i) {
    Belief mix(p.size(), 0.0);
    for (int ip = 0; ip < n; ++ip)
      for (std::size_t k = 0; k < p.size(); ++k) mix[k] += w.at(i, ip) * post[ip][k];
    rep.posterior_mixing_err = std::max(rep.posterior_mixing_err, norm_inf(mix, post_p[i]));
    rep.marginal_err = std::max(rep.marginal_err, std::abs(xpb[i] - xb[i]));
    rep.max_l1_gap = std::max(rep.max_l1_gap, norm1(post_p[i], post[i]));
  }
  for (int ip = 0; ip < n; ++ip) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += w.at(i, ip) * xb[i];
    rep.transport_err = std::max(rep.transport_err, std::abs(s - xb[ip]));
  }
  return rep;
}

// Posterior of c_eps(x, p) written as a mixture of the posteriors of x.
inline Belief mixed_posterior(const MixedAction& x, const Belief& p, double eps, int i) {
  const Vec xb = marginal(x, p);
  const NRPartition part = classify_nr(x, p, eps);
  Belief out(p.size(), 0.0);
  if (part.in_nr(i)) {
    for (int ip : part.nr) {
      const Belief post = bayes_update(x, p, ip, xb[ip]);
      for (std::size_t k = 0; k < p.size(); ++k) out[k] += (1.0 - eps) * xb[ip] / part.mass_nr * post[k];
    }
  } else {
    const Belief post = bayes_update(x, p, i, xb[i]);
    for (std::size_t k = 0; k < p.size(); ++k) out[k] = (1.0 - eps) * post[k];
  }
  for (std::size_t k = 0; k < p.size(); ++k) out[k] += eps * p[k];
  return out;
}

// Whether (x, p, p') lies in the domain where the translation is active.
inline bool in_translation_domain(const MixedAction& x, const Belief& p, const Belief& pp) {
  const Vec xb = marginal(x, p);
  for (std::size_t k = 0; k < p.size(); ++k)
    if (!(pp[k] > 0.0)) return false;
  for (int i = 0; i < x.num_actions(); ++i) {
    const Belief post = bayes_update(x, p, i, xb[i]);
    for (std::size_t k = 0; k < p.size(); ++k)
      if (pp[k] + post[k] - p[k] < 0.0) return false;
  }
  return true;
}

// Re-centers x from prior p to prior p'; identity outside the domain.
inline MixedAction translation_map(const MixedAction& x, const Belief& p, const Belief& pp) {
  check_dims(x, p);
  check_dims(x, pp);
  if (!in_translation_domain(x, p, pp)) return x;
  const Vec xb = marginal(x, p);
  MixedAction out(x.num_types(), x.num_actions());
  for (int i = 0; i < x.num_actions(); ++i) {
    const Belief post = bayes_update(x, p, i, xb[i]);
    for (int k = 0; k < x.num_types(); ++k) out.at(k, i) = xb[i] / pp[k] * (pp[k] + post[k] - p[k]);
  }
  return out;
}

struct TranslationReport {
  bool in_domain = false;
  double marginal_err = 0.0;       // (i)
  double shift_err = 0.0;          // (ii)
  double row_excess = 0.0;         // (iii): max(|x'-x| - bound, 0)
  double row_sum_err = 0.0;
};

inline TranslationReport check_translation(const MixedAction& x, const Belief& p, const Belief& pp,
                                           const MixedAction& xp) {
  TranslationReport rep;
  rep.in_domain = in_translation_domain(x, p, pp);
  const Vec xb = marginal(x, p);
  const Vec xpb = marginal(xp, pp);
  for (int i = 0; i < x.num_actions(); ++i) rep.marginal_err = std::max(rep.marginal_err, std::abs(xpb[i] - xb[i]));
  for (int k = 0; k < xp.num_types(); ++k) rep.row_sum_err = std::max(rep.row_sum_err, std::abs(sum(xp.row(k)) - 1.0));
  if (rep.in_domain) {
    for (int i = 0; i < x.num_actions(); ++i) {
      if (xb[i] == 0.0) continue;
      const Belief a = bayes_update(xp, pp, i, xpb[i]);
      const Belief b = bayes_update(x, p, i, xb[i]);
      for (std::size_t k = 0; k < p.size(); ++k)
        rep.shift_err = std::max(rep.shift_err, std::abs((a[k] - b[k]) - (pp[k] - p[k])));
    }
  }
  if (min_positive(p) > 0.0 && support(p).size() == p.size()) {
    const double bound = norm_inf(p, pp) * inv_sup(p);
    for (int k = 0; k < x.num_types(); ++k)
      for (int i = 0; i < x.num_actions(); ++i)
        rep.row_excess = std::max(rep.row_excess, std::abs(xp.at(k, i) - x.at(k, i)) - bound);
  }
  return rep;
}

struct JumpReport {
  std::vector<std::string> violations;
  double max_nr_ratio = 0.0;  // lhs / rhs for NR actions (<= 1 expected)
  double min_r_ratio = 0.0;   // lhs / rhs for R actions (>= 1 expected)
  bool ok() const { return violations.empty(); }
};

// Checks both jump bounds; requires full-support p and an eps-concise x.
inline JumpReport jump_bounds_check(const MixedAction& x, const Belief& p, double eps) {
  for (double v : p)
    if (!(v > 0.0)) throw PreconditionError("jump bounds need a full-support belief");
  if (!concise_ambiguous_check(x, p, eps).is_concise) throw PreconditionError("mixed action is not concise");
  JumpReport rep;
  rep.min_r_ratio = std::numeric_limits<double>::infinity();
  const Vec xb = marginal(x, p);
  const NRPartition part = classify_nr(x, p, eps);
  const double pmin = *std::min_element(p.begin(), p.end());
  for (int i : part.nr) {
    const double lhs = norm1(bayes_update(x, p, i, xb[i]), p);
    const double rhs = 2.0 * inv_sup(p) * part.mass_r / part.mass_nr;
    if (lhs > rhs + 1e-12) rep.violations.push_back("NR jump above bound at action " + std::to_string(i));
    if (rhs > 0.0) rep.max_nr_ratio = std::max(rep.max_nr_ratio, lhs / rhs);
  }
  for (int i : part.r) {
    const double lhs = norm1(bayes_update(x, p, i, xb[i]), p);
    const double rhs = eps * pmin;
    if (lhs < rhs - 1e-12) rep.violations.push_back("R jump below bound at action " + std::to_string(i));
    rep.min_r_ratio = std::min(rep.min_r_ratio, lhs / rhs);
  }
  return rep;
}

}  // namespace absorb

#endif  // ABSORB_STRATEGY_TRANSFORMS_HPP_

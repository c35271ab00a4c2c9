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

// Stochastic games with incomplete information on both sides: the tuple
// (K, L, Omega, I, J, rho, g), its validation, absorbing-state classification,
// safety augmentation and the JSON document format.

#ifndef ABSORB_GAME_MODEL_HPP_
#define ABSORB_GAME_MODEL_HPP_

#include <cfloat>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "absorb/common.hpp"
#include <nlohmann/json.hpp>

namespace absorb {

inline constexpr const char* kReservedI = "i*";
inline constexpr const char* kReservedJ = "j*";
inline constexpr const char* kReservedLow = "w1*";
inline constexpr const char* kReservedHigh = "w2*";

class GameSpec {
 public:
  GameSpec() = default;

  // All transitions default to self-loops and all payoffs to zero.
  GameSpec(std::vector<std::string> types_k, std::vector<std::string> types_l,
           std::vector<std::string> states, std::vector<std::string> actions_i,
           std::vector<std::string> actions_j)
      : K(std::move(types_k)),
        L(std::move(types_l)),
        Omega(std::move(states)),
        I(std::move(actions_i)),
        J(std::move(actions_j)) {
    rho_.assign(Omega.size() * I.size() * J.size() * Omega.size(), 0.0);
    for (int w = 0; w < num_states(); ++w)
      for (int i = 0; i < num_i(); ++i)
        for (int j = 0; j < num_j(); ++j) rho_[rho_index(w, i, j, w)] = 1.0;
    g_.assign(K.size() * L.size() * Omega.size() * I.size() * J.size(), 0.0);
  }

  std::vector<std::string> K, L, Omega, I, J;

  int num_k() const { return static_cast<int>(K.size()); }
  int num_l() const { return static_cast<int>(L.size()); }
  int num_states() const { return static_cast<int>(Omega.size()); }
  int num_i() const { return static_cast<int>(I.size()); }
  int num_j() const { return static_cast<int>(J.size()); }

  double rho(int w, int i, int j, int w2) const { return rho_[rho_index(w, i, j, w2)]; }
  double& rho(int w, int i, int j, int w2) { return rho_[rho_index(w, i, j, w2)]; }
  std::span<const double> rho_row(int w, int i, int j) const {
    return {rho_.data() + rho_index(w, i, j, 0), Omega.size()};
  }
  std::span<double> rho_row(int w, int i, int j) {
    return {rho_.data() + rho_index(w, i, j, 0), Omega.size()};
  }
  void set_transition(int w, int i, int j, const Vec& dist) {
    auto row = rho_row(w, i, j);
    std::copy(dist.begin(), dist.end(), row.begin());
  }

  double g(int k, int l, int w, int i, int j) const { return g_[g_index(k, l, w, i, j)]; }
  void set_g(int k, int l, int w, int i, int j, double v) {
    g_[g_index(k, l, w, i, j)] = v;
    g_inf_dirty_ = true;
  }

  // Cached sup norm of the payoff function.
  double g_inf() const {
    if (g_inf_dirty_) {
      double m = 0.0;
      for (double v : g_) m = std::max(m, std::abs(v));
      g_inf_ = m;
      g_inf_dirty_ = false;
    }
    return g_inf_;
  }

  int state_index(const std::string& name) const { return find(Omega, name); }
  int action_i_index(const std::string& name) const { return find(I, name); }
  int action_j_index(const std::string& name) const { return find(J, name); }

  bool is_augmented() const {
    return find(I, kReservedI) >= 0 && find(J, kReservedJ) >= 0 &&
           find(Omega, kReservedLow) >= 0 && find(Omega, kReservedHigh) >= 0;
  }

  const Vec& raw_rho() const { return rho_; }
  const Vec& raw_g() const { return g_; }
  Vec& raw_rho() { return rho_; }

  friend bool operator==(const GameSpec& a, const GameSpec& b) {
    return a.K == b.K && a.L == b.L && a.Omega == b.Omega && a.I == b.I && a.J == b.J &&
           a.rho_ == b.rho_ && a.g_ == b.g_;
  }

 private:
  static int find(const std::vector<std::string>& v, const std::string& name) {
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v[i] == name) return static_cast<int>(i);
    return -1;
  }
  std::size_t rho_index(int w, int i, int j, int w2) const {
    return ((static_cast<std::size_t>(w) * I.size() + i) * J.size() + j) * Omega.size() + w2;
  }
  std::size_t g_index(int k, int l, int w, int i, int j) const {
    return (((static_cast<std::size_t>(k) * L.size() + l) * Omega.size() + w) * I.size() + i) *
               J.size() + j;
  }

  Vec rho_;
  Vec g_;
  mutable double g_inf_ = 0.0;
  mutable bool g_inf_dirty_ = true;
};

struct ValidationReport {
  std::vector<std::string> issues;
  bool ok() const { return issues.empty(); }
};

inline ValidationReport validate_game(const GameSpec& spec) {
  ValidationReport report;
  auto check_set = [&](const std::vector<std::string>& names, const char* what) {
    if (names.empty()) report.issues.push_back(std::string("empty ") + what);
    std::vector<std::string> sorted = names;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      report.issues.push_back(std::string("duplicate name in ") + what);
  };
  check_set(spec.K, "type set K");
  check_set(spec.L, "type set L");
  check_set(spec.Omega, "state set");
  check_set(spec.I, "action set I");
  check_set(spec.J, "action set J");
  if (!report.ok()) {
    // Rename to the canonical wording for empty action sets.
    for (auto& s : report.issues) {
      if (s == "empty action set I" || s == "empty action set J") s = "empty action set";
    }
    return report;
  }
  const std::size_t want_rho = spec.Omega.size() * spec.I.size() * spec.J.size() * spec.Omega.size();
  const std::size_t want_g =
      spec.K.size() * spec.L.size() * spec.Omega.size() * spec.I.size() * spec.J.size();
  if (spec.raw_rho().size() != want_rho || spec.raw_g().size() != want_g) {
    report.issues.push_back("table dimensions do not match the declared sets");
    return report;
  }
  for (int w = 0; w < spec.num_states(); ++w)
    for (int i = 0; i < spec.num_i(); ++i)
      for (int j = 0; j < spec.num_j(); ++j) {
        auto row = spec.rho_row(w, i, j);
        bool neg = false;
        for (double x : row)
          if (!(x >= 0.0)) neg = true;
        const double s = sum(row);
        if (neg || std::abs(s - 1.0) > kStochasticTol) {
          std::ostringstream os;
          os.precision(17);
          os << "rho(" << spec.Omega[w] << "," << spec.I[i] << "," << spec.J[j]
             << ") is not a probability vector (sum " << s << (neg ? ", negative entry" : "")
             << ")";
          report.issues.push_back(os.str());
        }
      }
  for (double v : spec.raw_g())
    if (!std::isfinite(v)) {
      report.issues.push_back("non-finite payoff");
      break;
    }
  return report;
}

struct AbsorbingInfo {
  std::vector<int> absorbing;
  std::vector<int> nonabsorbing;
  std::vector<bool> is_absorbing_state;
  bool is_absorbing_game = false;
  std::optional<int> omega0;
};

inline bool state_is_absorbing(const GameSpec& spec, int w) {
  for (int i = 0; i < spec.num_i(); ++i)
    for (int j = 0; j < spec.num_j(); ++j)
      if (spec.rho(w, i, j, w) != 1.0) return false;
  for (int k = 0; k < spec.num_k(); ++k)
    for (int l = 0; l < spec.num_l(); ++l) {
      const double c = spec.g(k, l, w, 0, 0);
      for (int i = 0; i < spec.num_i(); ++i)
        for (int j = 0; j < spec.num_j(); ++j)
          if (spec.g(k, l, w, i, j) != c) return false;
    }
  return true;
}

inline AbsorbingInfo classify_states(const GameSpec& spec) {
  AbsorbingInfo info;
  info.is_absorbing_state.resize(spec.Omega.size());
  for (int w = 0; w < spec.num_states(); ++w) {
    const bool a = state_is_absorbing(spec, w);
    info.is_absorbing_state[w] = a;
    (a ? info.absorbing : info.nonabsorbing).push_back(w);
  }
  info.is_absorbing_game = info.nonabsorbing.size() == 1;
  if (info.is_absorbing_game) info.omega0 = info.nonabsorbing.front();
  return info;
}

// Adds the safety actions i*, j* and the absorbing states w1* (payoff -|g|)
// and w2* (payoff +|g|). From every non-absorbing state, (i*, j) leads to w1*,
// (i, j*) to w2*, and (i*, j*) to an even lottery between the two. The stage
// payoff of these new profiles is -|g|, +|g| and 0 respectively, which makes
// the new actions dominated so the discounted values are unchanged.
inline GameSpec augment_safety(const GameSpec& spec) {
  for (const auto& n : spec.I)
    if (n == kReservedI) throw PreconditionError("spec already contains reserved action i*");
  for (const auto& n : spec.J)
    if (n == kReservedJ) throw PreconditionError("spec already contains reserved action j*");
  for (const auto& n : spec.Omega)
    if (n == kReservedLow || n == kReservedHigh)
      throw PreconditionError("spec already contains a reserved state name");

  const AbsorbingInfo info = classify_states(spec);
  const double G = spec.g_inf();
  auto I = spec.I;
  auto J = spec.J;
  auto W = spec.Omega;
  I.push_back(kReservedI);
  J.push_back(kReservedJ);
  W.push_back(kReservedLow);
  W.push_back(kReservedHigh);
  GameSpec out(spec.K, spec.L, W, I, J);
  const int ni = spec.num_i(), nj = spec.num_j(), nw = spec.num_states();
  const int istar = ni, jstar = nj, wlow = nw, whigh = nw + 1;

  for (int w = 0; w < nw; ++w) {
    for (int i = 0; i <= ni; ++i)
      for (int j = 0; j <= nj; ++j) {
        auto row = out.rho_row(w, i, j);
        std::fill(row.begin(), row.end(), 0.0);
        if (i < ni && j < nj) {
          for (int w2 = 0; w2 < nw; ++w2) row[w2] = spec.rho(w, i, j, w2);
        } else if (info.is_absorbing_state[w]) {
          row[w] = 1.0;
        } else if (i == istar && j == jstar) {
          row[wlow] = 0.5;
          row[whigh] = 0.5;
        } else if (i == istar) {
          row[wlow] = 1.0;
        } else {
          row[whigh] = 1.0;
        }
      }
    for (int k = 0; k < spec.num_k(); ++k)
      for (int l = 0; l < spec.num_l(); ++l)
        for (int i = 0; i <= ni; ++i)
          for (int j = 0; j <= nj; ++j) {
            double v;
            if (i < ni && j < nj) {
              v = spec.g(k, l, w, i, j);
            } else if (info.is_absorbing_state[w]) {
              v = spec.g(k, l, w, 0, 0);
            } else if (i == istar && j == jstar) {
              v = 0.0;
            } else {
              v = (i == istar) ? -G : G;
            }
            out.set_g(k, l, w, i, j, v);
          }
  }
  for (int k = 0; k < spec.num_k(); ++k)
    for (int l = 0; l < spec.num_l(); ++l)
      for (int i = 0; i <= ni; ++i)
        for (int j = 0; j <= nj; ++j) {
          out.set_g(k, l, wlow, i, j, -G);
          out.set_g(k, l, whigh, i, j, G);
        }
  return out;
}

// Exchanges the roles of the players: types, actions and the sign of g.
inline GameSpec swap_players(const GameSpec& spec) {
  GameSpec out(spec.L, spec.K, spec.Omega, spec.J, spec.I);
  for (int w = 0; w < spec.num_states(); ++w)
    for (int i = 0; i < spec.num_i(); ++i)
      for (int j = 0; j < spec.num_j(); ++j) {
        for (int w2 = 0; w2 < spec.num_states(); ++w2) out.rho(w, j, i, w2) = spec.rho(w, i, j, w2);
        for (int k = 0; k < spec.num_k(); ++k)
          for (int l = 0; l < spec.num_l(); ++l) out.set_g(l, k, w, j, i, -spec.g(k, l, w, i, j));
      }
  return out;
}

// Adds `delta` to every payoff.
inline GameSpec shift_payoffs(const GameSpec& spec, double delta) {
  GameSpec out = spec;
  for (int k = 0; k < spec.num_k(); ++k)
    for (int l = 0; l < spec.num_l(); ++l)
      for (int w = 0; w < spec.num_states(); ++w)
        for (int i = 0; i < spec.num_i(); ++i)
          for (int j = 0; j < spec.num_j(); ++j) out.set_g(k, l, w, i, j, spec.g(k, l, w, i, j) + delta);
  return out;
}

// ---------------------------------------------------------------------------
// Document format.

namespace detail {

inline double parse_number(const nlohmann::json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    const auto slash = s.find('/');
    try {
      if (slash == std::string::npos) {
        std::size_t pos = 0;
        const double d = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return d;
      }
      std::size_t p1 = 0, p2 = 0;
      const std::string num = s.substr(0, slash), den = s.substr(slash + 1);
      const long long a = std::stoll(num, &p1);
      const long long b = std::stoll(den, &p2);
      if (p1 != num.size() || p2 != den.size() || b == 0) throw std::invalid_argument(s);
      return static_cast<double>(a) / static_cast<double>(b);
    } catch (const std::exception&) {
      throw ParseError("malformed number '" + s + "' at " + where);
    }
  }
  throw ParseError("expected a number at " + where);
}

inline std::vector<std::string> parse_names(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
  const auto& arr = doc.at(key);
  if (!arr.is_array()) throw ParseError(std::string("field \"") + key + "\" must be an array");
  std::vector<std::string> out;
  for (const auto& e : arr) {
    if (!e.is_string()) throw ParseError(std::string("field \"") + key + "\" must hold strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

inline int lookup(const std::vector<std::string>& names, const std::string& n, const std::string& where) {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == n) return static_cast<int>(i);
  throw ParseError("unknown name '" + n + "' at " + where);
}

}  // namespace detail

// Parses a game document. Rows within the stochasticity tolerance are
// renormalized; anything else is rejected with the validator's report.
inline GameSpec spec_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ParseError("game document must be an object");
  using detail::lookup;
  using detail::parse_number;
  GameSpec spec(detail::parse_names(doc, "K"), detail::parse_names(doc, "L"),
                detail::parse_names(doc, "Omega"), detail::parse_names(doc, "I"),
                detail::parse_names(doc, "J"));
  if (!doc.contains("rho")) throw ParseError("missing field \"rho\"");
  if (!doc.contains("g")) throw ParseError("missing field \"g\"");
  const auto pre = validate_game(spec);
  if (!pre.ok()) throw ParseError("invalid game: " + pre.issues.front());

  const auto& rho = doc.at("rho");
  if (!rho.is_object()) throw ParseError("field \"rho\" must be an object");
  for (auto& [wn, by_i] : rho.items()) {
    const int w = lookup(spec.Omega, wn, "rho");
    for (auto& [in, by_j] : by_i.items()) {
      const int i = lookup(spec.I, in, "rho/" + wn);
      for (auto& [jn, dist] : by_j.items()) {
        const int j = lookup(spec.J, jn, "rho/" + wn + "/" + in);
        auto row = spec.rho_row(w, i, j);
        std::fill(row.begin(), row.end(), 0.0);
        const std::string where = "rho/" + wn + "/" + in + "/" + jn;
        if (!dist.is_object()) throw ParseError("expected an object at " + where);
        for (auto& [w2n, prob] : dist.items())
          row[lookup(spec.Omega, w2n, where)] = parse_number(prob, where + "/" + w2n);
      }
    }
  }
  const auto& g = doc.at("g");
  if (!g.is_object()) throw ParseError("field \"g\" must be an object");
  for (auto& [kn, a] : g.items()) {
    const int k = lookup(spec.K, kn, "g");
    for (auto& [ln, b] : a.items()) {
      const int l = lookup(spec.L, ln, "g/" + kn);
      for (auto& [wn, c] : b.items()) {
        const int w = lookup(spec.Omega, wn, "g/" + kn + "/" + ln);
        for (auto& [in, d] : c.items()) {
          const int i = lookup(spec.I, in, "g/" + kn + "/" + ln + "/" + wn);
          for (auto& [jn, val] : d.items()) {
            const std::string where = "g/" + kn + "/" + ln + "/" + wn + "/" + in;
            const int j = lookup(spec.J, jn, where);
            spec.set_g(k, l, w, i, j, parse_number(val, where + "/" + jn));
          }
        }
      }
    }
  }
  const auto report = validate_game(spec);
  if (!report.ok()) throw ParseError("invalid game: " + report.issues.front());
  // Renormalize rows whose sum drifted by more than a few ulps.
  const double ulp_band = 8.0 * DBL_EPSILON * static_cast<double>(spec.num_states());
  for (int w = 0; w < spec.num_states(); ++w)
    for (int i = 0; i < spec.num_i(); ++i)
      for (int j = 0; j < spec.num_j(); ++j) {
        auto row = spec.rho_row(w, i, j);
        const double s = sum(row);
        if (std::abs(s - 1.0) > ulp_band)
          for (double& x : row) x /= s;
      }
  return spec;
}

inline nlohmann::json spec_to_json(const GameSpec& spec) {
  nlohmann::json doc;
  doc["K"] = spec.K;
  doc["L"] = spec.L;
  doc["Omega"] = spec.Omega;
  doc["I"] = spec.I;
  doc["J"] = spec.J;
  nlohmann::json rho = nlohmann::json::object();
  for (int w = 0; w < spec.num_states(); ++w)
    for (int i = 0; i < spec.num_i(); ++i)
      for (int j = 0; j < spec.num_j(); ++j) {
        nlohmann::json dist = nlohmann::json::object();
        for (int w2 = 0; w2 < spec.num_states(); ++w2)
          if (spec.rho(w, i, j, w2) != 0.0) dist[spec.Omega[w2]] = spec.rho(w, i, j, w2);
        rho[spec.Omega[w]][spec.I[i]][spec.J[j]] = dist;
      }
  doc["rho"] = rho;
  nlohmann::json g = nlohmann::json::object();
  for (int k = 0; k < spec.num_k(); ++k)
    for (int l = 0; l < spec.num_l(); ++l)
      for (int w = 0; w < spec.num_states(); ++w)
        for (int i = 0; i < spec.num_i(); ++i)
          for (int j = 0; j < spec.num_j(); ++j)
            g[spec.K[k]][spec.L[l]][spec.Omega[w]][spec.I[i]][spec.J[j]] = spec.g(k, l, w, i, j);
  doc["g"] = g;
  return doc;
}

inline GameSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open game file " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("malformed game document " + path + ": " + e.what());
  }
  return spec_from_json(doc);
}

inline void save_spec(const GameSpec& spec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write game file " + path);
  out << spec_to_json(spec).dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// Canonical games.

// The Big Match: Player 1 choosing T absorbs (payoff 1 against L, 0 against
// R); B keeps play going with payoff 0 against L and 1 against R.
inline GameSpec big_match() {
  GameSpec s({"k"}, {"l"}, {"play", "one*", "zero*"}, {"T", "B"}, {"L", "R"});
  const int play = 0, one = 1, zero = 2, T = 0, B = 1, Lc = 0, Rc = 1;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      s.set_transition(play, i, j, {0.0, 0.0, 0.0});
      s.set_g(0, 0, one, i, j, 1.0);
      s.set_g(0, 0, zero, i, j, 0.0);
    }
  s.set_transition(play, T, Lc, {0.0, 1.0, 0.0});
  s.set_transition(play, T, Rc, {0.0, 0.0, 1.0});
  s.set_transition(play, B, Lc, {1.0, 0.0, 0.0});
  s.set_transition(play, B, Rc, {1.0, 0.0, 0.0});
  s.set_g(0, 0, play, T, Lc, 1.0);
  s.set_g(0, 0, play, T, Rc, 0.0);
  s.set_g(0, 0, play, B, Lc, 0.0);
  s.set_g(0, 0, play, B, Rc, 1.0);
  return s;
}

struct RandomGameOptions {
  int num_k = 2;
  int num_l = 1;
  int num_i = 2;
  int num_j = 2;
  int num_absorbing = 2;
  // Upper bound on the probability of staying in the non-absorbing state.
  double max_stay = 0.5;
};

// Random absorbing game (one non-absorbing state "w0") with payoffs in [-1,1].
template <class Rng>
GameSpec random_absorbing_game(Rng& rng, const RandomGameOptions& opt) {
  auto names = [](const char* p, int n) {
    std::vector<std::string> v;
    for (int t = 0; t < n; ++t) v.push_back(p + std::to_string(t));
    return v;
  };
  std::vector<std::string> W = {"w0"};
  for (int a = 0; a < opt.num_absorbing; ++a) W.push_back("a" + std::to_string(a) + "*");
  GameSpec s(names("k", opt.num_k), names("l", opt.num_l), W, names("i", opt.num_i),
             names("j", opt.num_j));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto payoff = [&] { return std::round((2.0 * unit(rng) - 1.0) * 1e6) / 1e6; };
  const int nw = static_cast<int>(W.size());
  for (int i = 0; i < opt.num_i; ++i)
    for (int j = 0; j < opt.num_j; ++j) {
      Vec row(nw, 0.0);
      row[0] = opt.max_stay * unit(rng);
      Vec rest(nw - 1);
      double tot = 0.0;
      for (auto& r : rest) tot += (r = unit(rng) + 1e-3);
      for (int a = 1; a < nw; ++a) row[a] = (1.0 - row[0]) * rest[a - 1] / tot;
      if (nw == 1) row[0] = 1.0;
      s.set_transition(0, i, j, row);
    }
  for (int k = 0; k < opt.num_k; ++k)
    for (int l = 0; l < opt.num_l; ++l) {
      for (int i = 0; i < opt.num_i; ++i)
        for (int j = 0; j < opt.num_j; ++j) s.set_g(k, l, 0, i, j, payoff());
      for (int a = 1; a < nw; ++a) {
        const double c = payoff();
        for (int i = 0; i < opt.num_i; ++i)
          for (int j = 0; j < opt.num_j; ++j) s.set_g(k, l, a, i, j, c);
      }
    }
  return s;
}

}  // namespace absorb

#endif  // ABSORB_GAME_MODEL_HPP_

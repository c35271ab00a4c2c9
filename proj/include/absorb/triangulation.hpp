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

// Freudenthal (Kuhn) triangulation of the probability simplex at resolution N
// and the barycentric splitting onto its vertices.
//
// Points are handled in cumulative coordinates z_t = N * sum_{s >= t} p_s,
// t = 1..d, where the simplex is N >= z_1 >= ... >= z_d >= 0. Each unit cube
// of the z-lattice is cut into d! simplices by sorting fractional parts.

#ifndef ABSORB_TRIANGULATION_HPP_
#define ABSORB_TRIANGULATION_HPP_

#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "absorb/common.hpp"

namespace absorb {

struct SplitAtom {
  int vertex = 0;
  double weight = 0.0;
};

using Splitting = std::vector<SplitAtom>;

struct Located {
  std::uint64_t cell = 0;
  std::vector<int> vertices;  // d+1 vertex ids
  Vec bary;                   // matching barycentric coordinates
};

struct CellList {
  std::vector<std::vector<int>> cells;
};

class SimplexTriangulation {
 public:
  SimplexTriangulation() = default;

  // `types` is the number of simplex coordinates (d + 1).
  SimplexTriangulation(int types, int resolution) : d_(types - 1), n_(resolution) {
    if (types < 1) throw PreconditionError("type count must be at least 1");
    if (resolution < 1) throw PreconditionError("resolution must be at least 1");
    std::vector<int> z(d_, 0);
    enumerate_vertices(0, n_, z);
    stepsize_ = compute_stepsize();
  }

  int dim() const { return d_; }
  int types() const { return d_ + 1; }
  int resolution() const { return n_; }
  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  std::uint64_t num_cells() const {
    std::uint64_t c = 1;
    for (int t = 0; t < d_; ++t) c *= static_cast<std::uint64_t>(n_);
    return c;
  }
  const Belief& vertex(int id) const { return vertices_[id]; }
  const std::vector<Belief>& vertices() const { return vertices_; }
  // Max Euclidean length of a cell edge.
  double stepsize() const { return stepsize_; }

  std::optional<int> vertex_index(const Belief& p) const {
    if (static_cast<int>(p.size()) != types()) return std::nullopt;
    std::vector<int> z(d_);
    for (int t = 0; t < d_; ++t) {
      double s = 0.0;
      for (int u = t + 1; u <= d_; ++u) s += p[u];
      const double zt = s * n_;
      const double r = std::round(zt);
      if (std::abs(zt - r) > 1e-9) return std::nullopt;
      z[t] = static_cast<int>(r);
    }
    auto it = index_.find(key(z));
    if (it == index_.end()) return std::nullopt;
    if (norm_inf(vertices_[it->second], p) > 1e-12) return std::nullopt;
    return it->second;
  }

  Located locate(const Belief& p_in) const {
    const Belief p = sanitize(p_in);
    Located out;
    if (d_ == 0) {
      out.vertices = {0};
      out.bary = {1.0};
      return out;
    }
    Vec z(d_);
    double s = 0.0;
    for (int t = d_; t >= 1; --t) {
      s += p[t];
      z[t - 1] = std::min(static_cast<double>(n_), s * n_);
    }
    std::vector<int> base(d_);
    Vec frac(d_);
    for (int t = 0; t < d_; ++t) {
      int b = static_cast<int>(std::floor(z[t]));
      b = std::clamp(b, 0, n_ - 1);
      base[t] = b;
      frac[t] = z[t] - b;
    }
    std::vector<int> perm(d_);
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) { return frac[a] > frac[b]; });

    out.vertices.resize(d_ + 1);
    out.bary.resize(d_ + 1);
    std::vector<int> v = base;
    out.vertices[0] = index_.at(key(v));
    out.bary[0] = 1.0 - frac[perm[0]];
    for (int r = 1; r <= d_; ++r) {
      v[perm[r - 1]] += 1;
      out.vertices[r] = index_.at(key(v));
      out.bary[r] = (r < d_) ? frac[perm[r - 1]] - frac[perm[r]] : frac[perm[d_ - 1]];
    }
    out.cell = cell_id(base, perm);
    return out;
  }

  // Barycentric splitting; zero-weight vertices are dropped.
  Splitting split(const Belief& p) const {
    const Located loc = locate(p);
    Splitting s;
    for (std::size_t r = 0; r < loc.vertices.size(); ++r)
      if (loc.bary[r] > 0.0) s.push_back({loc.vertices[r], loc.bary[r]});
    return s;
  }

  // All cells as lists of d+1 vertex ids.
  CellList enumerate_cells() const {
    CellList out;
    if (d_ == 0) {
      out.cells.push_back({0});
      return out;
    }
    std::vector<int> base(d_, 0);
    std::vector<int> perm(d_);
    for (;;) {
      std::iota(perm.begin(), perm.end(), 0);
      do {
        std::vector<int> v = base;
        std::vector<int> ids;
        bool inside = monotone(v);
        if (inside) ids.push_back(index_.at(key(v)));
        for (int r = 0; r < d_ && inside; ++r) {
          v[perm[r]] += 1;
          inside = monotone(v);
          if (inside) ids.push_back(index_.at(key(v)));
        }
        if (inside) out.cells.push_back(ids);
      } while (std::next_permutation(perm.begin(), perm.end()));
      int t = 0;
      while (t < d_ && ++base[t] == n_) base[t++] = 0;
      if (t == d_) break;
    }
    return out;
  }

  // Projects tiny negative coordinates to zero and renormalizes.
  Belief sanitize(const Belief& p) const {
    if (static_cast<int>(p.size()) != types()) throw PreconditionError("belief dimension mismatch");
    Belief out = p;
    for (double& v : out) {
      if (!(v >= -1e-10)) throw PreconditionError("belief outside the simplex");
      if (v < 0.0) v = 0.0;
    }
    const double s = sum(out);
    if (std::abs(s - 1.0) > 1e-10) throw PreconditionError("belief outside the simplex");
    if (s != 1.0)
      for (double& v : out) v /= s;
    return out;
  }

 private:
  std::uint64_t key(const std::vector<int>& z) const {
    std::uint64_t k = 0;
    for (int v : z) k = k * static_cast<std::uint64_t>(n_ + 1) + static_cast<std::uint64_t>(v);
    return k;
  }

  bool monotone(const std::vector<int>& z) const {
    if (!z.empty() && z[0] > n_) return false;
    for (std::size_t t = 0; t + 1 < z.size(); ++t)
      if (z[t] < z[t + 1]) return false;
    return z.empty() || z.back() >= 0;
  }

  std::uint64_t cell_id(const std::vector<int>& base, const std::vector<int>& perm) const {
    std::uint64_t b = 0;
    for (int v : base) b = b * static_cast<std::uint64_t>(n_) + static_cast<std::uint64_t>(v);
    // Lehmer rank of the permutation.
    std::uint64_t r = 0;
    for (int a = 0; a < d_; ++a) {
      int smaller = 0;
      for (int c = a + 1; c < d_; ++c)
        if (perm[c] < perm[a]) ++smaller;
      r = r * static_cast<std::uint64_t>(d_ - a) + static_cast<std::uint64_t>(smaller);
    }
    std::uint64_t fact = 1;
    for (int a = 2; a <= d_; ++a) fact *= static_cast<std::uint64_t>(a);
    return b * fact + r;
  }

  void enumerate_vertices(int t, int upper, std::vector<int>& z) {
    if (t == d_) {
      Belief p(d_ + 1);
      p[0] = d_ > 0 ? static_cast<double>(n_ - z[0]) / n_ : 1.0;
      for (int u = 1; u <= d_; ++u) {
        const int next = (u < d_) ? z[u] : 0;
        p[u] = static_cast<double>(z[u - 1] - next) / n_;
      }
      index_[key(z)] = static_cast<int>(vertices_.size());
      vertices_.push_back(std::move(p));
      return;
    }
    for (int v = upper; v >= 0; --v) {
      z[t] = v;
      enumerate_vertices(t + 1, v, z);
    }
  }

  double compute_stepsize() const {
    if (d_ == 0) return 0.0;
    double s = 0.0;
    for (const auto& cell : enumerate_cells().cells)
      for (std::size_t a = 0; a < cell.size(); ++a)
        for (std::size_t b = a + 1; b < cell.size(); ++b)
          s = std::max(s, norm2(vertices_[cell[a]], vertices_[cell[b]]));
    return s;
  }

  int d_ = 0;
  int n_ = 1;
  std::vector<Belief> vertices_;
  std::unordered_map<std::uint64_t, int> index_;
  double stepsize_ = 0.0;
};

inline SimplexTriangulation build_triangulation(int types, int resolution) {
  return SimplexTriangulation(types, resolution);
}

// Uniform point of the simplex (flat Dirichlet).
template <class Rng>
Belief sample_simplex(Rng& rng, int types) {
  std::exponential_distribution<double> e(1.0);
  Belief p(types);
  double s = 0.0;
  for (double& v : p) s += (v = e(rng));
  for (double& v : p) v /= s;
  return p;
}

struct AlphaCCertificate {
  double stepsize = 0.0;
  double c_cert = 0.0;
  std::size_t samples = 0;
  std::vector<std::string> violations;
};

// Smallest C with 1 - S[p'|p] <= (C / s) * |p' - p|_2 on sampled p.
inline AlphaCCertificate certify_alphaC(const SimplexTriangulation& tri, std::size_t samples,
                                        std::uint64_t seed = 1) {
  if (samples < 1) throw PreconditionError("need at least one sample");
  AlphaCCertificate cert;
  cert.stepsize = tri.stepsize();
  cert.samples = samples;
  if (tri.dim() == 0) return cert;
  std::mt19937_64 rng(seed);
  std::vector<std::pair<double, double>> pairs;  // (1 - S, distance)
  for (std::size_t n = 0; n < samples; ++n) {
    const Belief p = sample_simplex(rng, tri.types());
    const Splitting sp = tri.split(p);
    for (const auto& a : sp) {
      // 1 - S as the sum of the other weights; no cancellation near a vertex.
      double lhs = 0.0;
      for (const auto& b : sp)
        if (b.vertex != a.vertex) lhs += b.weight;
      // |p - v_a| through p - v_a = sum_b w_b (v_b - v_a), same reason.
      Vec d(p.size(), 0.0);
      for (const auto& b : sp)
        for (std::size_t k = 0; k < p.size(); ++k) d[k] += b.weight * (tri.vertex(b.vertex)[k] - tri.vertex(a.vertex)[k]);
      double dist = 0.0;
      for (double v : d) dist += v * v;
      dist = std::sqrt(dist);
      if (dist == 0.0) continue;
      cert.c_cert = std::max(cert.c_cert, lhs * cert.stepsize / dist);
      pairs.emplace_back(lhs, dist);
    }
  }
  for (const auto& [lhs, dist] : pairs)
    if (lhs > cert.c_cert / cert.stepsize * dist * (1.0 + 1e-12) + 1e-15)
      cert.violations.push_back("flatness inequality violated at a sampled point");
  return cert;
}

}  // namespace absorb

#endif  // ABSORB_TRIANGULATION_HPP_

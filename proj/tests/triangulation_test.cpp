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

#include <random>
#include <set>

#include <gtest/gtest.h>

#include "absorb/triangulation.hpp"

namespace absorb {
namespace {

// Determinant by Gaussian elimination with partial pivoting.
double det(std::vector<Vec> a) {
  const int n = static_cast<int>(a.size());
  double d = 1.0;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    if (a[piv][c] == 0.0) return 0.0;
    if (piv != c) {
      std::swap(a[piv], a[c]);
      d = -d;
    }
    d *= a[c][c];
    for (int r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (int k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return d;
}

std::set<Belief> vertex_set(const SimplexTriangulation& t) { return {t.vertices().begin(), t.vertices().end()}; }

TEST(Build, SingleType) {
  const auto t = build_triangulation(1, 5);
  EXPECT_EQ(t.num_vertices(), 1);
  EXPECT_EQ(t.dim(), 0);
  EXPECT_EQ(t.stepsize(), 0.0);
  EXPECT_EQ(t.split({1.0}).size(), 1u);
}

TEST(Build, SegmentN2) {
  const auto t = build_triangulation(2, 2);
  EXPECT_EQ(vertex_set(t), (std::set<Belief>{{0.0, 1.0}, {0.5, 0.5}, {1.0, 0.0}}));
  EXPECT_EQ(t.num_cells(), 2u);
  EXPECT_EQ(t.enumerate_cells().cells.size(), 2u);
}

TEST(Build, ResolutionZeroRejected) { EXPECT_THROW(build_triangulation(3, 0), PreconditionError); }

TEST(Build, CountsMatchClosedForms) {
  for (int types = 1; types <= 4; ++types)
    for (int n : {1, 2, 3, 4, 8}) {
      const auto t = build_triangulation(types, n);
      const int d = types - 1;
      EXPECT_EQ(static_cast<std::uint64_t>(t.num_vertices()), binomial(n + d, d));
      EXPECT_EQ(t.enumerate_cells().cells.size(), t.num_cells());
      std::uint64_t want = 1;
      for (int k = 0; k < d; ++k) want *= n;
      EXPECT_EQ(t.num_cells(), want);
      if (d > 0) {
        EXPECT_LE(t.stepsize(), std::sqrt(2.0) * d / n + 1e-12);
      }
    }
}

TEST(Build, EqualVolumes) {
  for (int types : {2, 3, 4})
    for (int n : {2, 3, 4}) {
      const auto t = build_triangulation(types, n);
      const int d = types - 1;
      double total = 0.0;
      for (const auto& cell : t.enumerate_cells().cells) {
        std::vector<Vec> m(d, Vec(d));
        for (int r = 1; r <= d; ++r)
          for (int c = 0; c < d; ++c) m[r - 1][c] = t.vertex(cell[r])[c] - t.vertex(cell[0])[c];
        const double v = std::abs(det(m));
        EXPECT_NEAR(v, std::pow(1.0 / n, d), 1e-12);
        total += v;
      }
      EXPECT_NEAR(total, 1.0, 1e-10);
      if (types == 3 && n == 3) {
        EXPECT_EQ(t.num_vertices(), 10);
      }
    }
}

TEST(Locate, VertexGetsFullWeight) {
  const auto t = build_triangulation(3, 4);
  for (int v = 0; v < t.num_vertices(); ++v) {
    const auto s = t.split(t.vertex(v));
    ASSERT_EQ(s.size(), 1u);
    EXPECT_EQ(s[0].vertex, v);
    EXPECT_EQ(s[0].weight, 1.0);
    EXPECT_EQ(t.vertex_index(t.vertex(v)), v);
  }
}

TEST(Locate, SegmentExample) {
  const auto t = build_triangulation(2, 2);
  const auto loc = t.locate({0.25, 0.75});
  std::set<Belief> cell;
  for (int v : loc.vertices) cell.insert(t.vertex(v));
  EXPECT_EQ(cell, (std::set<Belief>{{0.0, 1.0}, {0.5, 0.5}}));
  for (double b : loc.bary) EXPECT_NEAR(b, 0.5, 1e-15);
  const auto s = t.split({0.25, 0.75});
  ASSERT_EQ(s.size(), 2u);
  for (const auto& a : s) EXPECT_NEAR(a.weight, 0.5, 1e-15);
}

TEST(Locate, ReconstructionRandom) {
  std::mt19937_64 rng(11);
  for (int types : {2, 3, 4}) {
    const auto t = build_triangulation(types, 5);
    for (int n = 0; n < 10000; ++n) {
      const Belief p = sample_simplex(rng, types);
      const auto loc = t.locate(p);
      Vec rec(types, 0.0);
      double s = 0.0;
      for (std::size_t r = 0; r < loc.vertices.size(); ++r) {
        EXPECT_GE(loc.bary[r], 0.0);
        s += loc.bary[r];
        for (int k = 0; k < types; ++k) rec[k] += loc.bary[r] * t.vertex(loc.vertices[r])[k];
      }
      EXPECT_NEAR(s, 1.0, 1e-12);
      EXPECT_LT(norm_inf(rec, p), 1e-12);
    }
  }
}

TEST(Locate, OutsideSimplexRejected) {
  const auto t = build_triangulation(3, 2);
  EXPECT_THROW(t.locate({-0.1, 0.6, 0.5}), Error);
  EXPECT_NO_THROW(t.locate({-1e-12, 0.5, 0.5 + 1e-12}));
}

TEST(Split, ConservationAndInvariants) {
  std::mt19937_64 rng(12);
  for (int types : {2, 3, 4})
    for (int n : {2, 4, 8}) {
      const auto t = build_triangulation(types, n);
      for (int s = 0; s < 2000; ++s) {
        const Belief p = sample_simplex(rng, types);
        const auto sp = t.split(p);
        EXPECT_LE(sp.size(), static_cast<std::size_t>(types));
        Vec rec(types, 0.0);
        double w = 0.0;
        for (const auto& a : sp) {
          EXPECT_GE(a.weight, 0.0);
          w += a.weight;
          for (int k = 0; k < types; ++k) rec[k] += a.weight * t.vertex(a.vertex)[k];
        }
        EXPECT_NEAR(w, 1.0, 1e-12);
        EXPECT_LT(norm_inf(rec, p), 1e-12);
      }
    }
}

TEST(Split, FaceConsistency) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto t = build_triangulation(3, 4);
  const auto cells = t.enumerate_cells().cells;
  for (int n = 0; n < 500; ++n) {
    // A point on an edge of a random cell.
    const auto& cell = cells[n % cells.size()];
    const int a = cell[n % 3], b = cell[(n + 1) % 3];
    const double l = u(rng);
    Belief p(3);
    for (int k = 0; k < 3; ++k) p[k] = l * t.vertex(a)[k] + (1.0 - l) * t.vertex(b)[k];
    for (const auto& at : t.split(p))
      if (at.weight > 1e-12) {
        EXPECT_TRUE(at.vertex == a || at.vertex == b);
      }
  }
}

TEST(Certify, SegmentAtMostOne) {
  for (int n : {1, 2, 5, 9}) {
    const auto c = certify_alphaC(build_triangulation(2, n), 2000);
    EXPECT_LE(c.c_cert, 1.0 + 1e-12);
    EXPECT_TRUE(c.violations.empty());
  }
}

TEST(Certify, SingleTypeIsZero) { EXPECT_EQ(certify_alphaC(build_triangulation(1, 3), 10).c_cert, 0.0); }

TEST(Certify, StableAcrossResolution) {
  double lo = 1e300, hi = 0.0;
  for (int n : {2, 4, 8}) {
    const auto c = certify_alphaC(build_triangulation(3, n), 20000);
    EXPECT_TRUE(c.violations.empty());
    lo = std::min(lo, c.c_cert);
    hi = std::max(hi, c.c_cert);
  }
  EXPECT_GT(lo, 0.0);
  EXPECT_LT(hi / lo, 2.0);
}

}  // namespace
}  // namespace absorb

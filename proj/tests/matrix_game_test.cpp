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

#include <optional>
#include <random>

#include <gtest/gtest.h>

#include "absorb/matrix_game.hpp"

namespace absorb {
namespace {

// Solves A z = b in place; nullopt when singular.
std::optional<Vec> solve(std::vector<Vec> A, Vec b) {
  const int n = static_cast<int>(b.size());
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
    if (std::abs(A[piv][c]) < 1e-12) return std::nullopt;
    std::swap(A[piv], A[c]);
    std::swap(b[piv], b[c]);
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = A[r][c] / A[c][c];
      for (int k = c; k < n; ++k) A[r][k] -= f * A[c][k];
      b[r] -= f * b[c];
    }
  }
  for (int r = 0; r < n; ++r) b[r] /= A[r][r];
  return b;
}

// Value by support enumeration over equal-size supports.
double support_enumeration_value(const Matrix& M) {
  const int m = M.rows(), n = M.cols();
  for (int s = 1; s <= std::min(m, n); ++s) {
    std::vector<int> rs(m, 0), cs(n, 0);
    std::fill(rs.end() - s, rs.end(), 1);
    do {
      std::fill(cs.begin(), cs.end(), 0);
      std::fill(cs.end() - s, cs.end(), 1);
      do {
        std::vector<int> R, C;
        for (int i = 0; i < m; ++i)
          if (rs[i]) R.push_back(i);
        for (int j = 0; j < n; ++j)
          if (cs[j]) C.push_back(j);
        // Row mix x on R equalizing columns C at value v.
        std::vector<Vec> A(s + 1, Vec(s + 1, 0.0));
        Vec b(s + 1, 0.0);
        for (int c = 0; c < s; ++c) {
          for (int r = 0; r < s; ++r) A[c][r] = M(R[r], C[c]);
          A[c][s] = -1.0;
        }
        for (int r = 0; r < s; ++r) A[s][r] = 1.0;
        b[s] = 1.0;
        const auto xs = solve(A, b);
        for (int r = 0; r < s; ++r) {
          for (int c = 0; c < s; ++c) A[r][c] = M(R[r], C[c]);
          A[r][s] = -1.0;
        }
        for (int c = 0; c < s; ++c) A[s][c] = 1.0;
        A[s][s] = 0.0;
        const auto ys = solve(A, b);
        if (xs && ys) {
          bool ok = true;
          for (int r = 0; r < s; ++r) ok = ok && (*xs)[r] >= -1e-12 && (*ys)[r] >= -1e-12;
          const double v = (*xs)[s];
          Vec x(m, 0.0), y(n, 0.0);
          for (int r = 0; r < s; ++r) {
            x[R[r]] = (*xs)[r];
            y[C[r]] = (*ys)[r];
          }
          for (int j = 0; j < n && ok; ++j) {
            double t = 0.0;
            for (int i = 0; i < m; ++i) t += x[i] * M(i, j);
            ok = t >= v - 1e-9;
          }
          for (int i = 0; i < m && ok; ++i) {
            double t = 0.0;
            for (int j = 0; j < n; ++j) t += M(i, j) * y[j];
            ok = t <= v + 1e-9;
          }
          if (ok) return v;
        }
      } while (std::next_permutation(cs.begin(), cs.end()));
    } while (std::next_permutation(rs.begin(), rs.end()));
  }
  throw std::runtime_error("no equilibrium found");
}

Matrix random_matrix(std::mt19937_64& rng, int m, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix M(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = u(rng);
  return M;
}

TEST(MatrixGame, MatchingPennies) {
  Matrix M(2, 2);
  M(0, 0) = 1;
  M(0, 1) = -1;
  M(1, 0) = -1;
  M(1, 1) = 1;
  const auto s = matrix_game_value(M);
  EXPECT_NEAR(s.value, 0.0, 1e-14);
  EXPECT_NEAR(s.row[0], 0.5, 1e-14);
  EXPECT_NEAR(s.col[0], 0.5, 1e-14);
}

TEST(MatrixGame, Constant) {
  const auto s = matrix_game_value(Matrix(3, 4, 0.25));
  EXPECT_EQ(s.value, 0.25);
  EXPECT_EQ(s.gap, 0.0);
}

TEST(MatrixGame, SaddlePoint) {
  Matrix M(2, 3);
  const double a[2][3] = {{3, 1, 4}, {0, -1, 2}};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) M(i, j) = a[i][j];
  EXPECT_NEAR(matrix_game_value(M).value, 1.0, 1e-13);
}

TEST(MatrixGame, MatchesSupportEnumeration) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 200; ++t) {
    const Matrix M = random_matrix(rng, 5, 7);
    const auto s = matrix_game_value(M);
    EXPECT_NEAR(s.value, support_enumeration_value(M), 1e-10);
    EXPECT_LT(s.gap, 1e-12);
    EXPECT_TRUE(is_probability_vector(s.row, 1e-12));
    EXPECT_TRUE(is_probability_vector(s.col, 1e-12));
  }
}

TEST(MatrixGame, TransposeAntisymmetry) {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 200; ++t) {
    const Matrix M = random_matrix(rng, 1 + t % 6, 1 + (t / 6) % 6);
    Matrix N(M.cols(), M.rows());
    for (int i = 0; i < M.rows(); ++i)
      for (int j = 0; j < M.cols(); ++j) N(j, i) = -M(i, j);
    EXPECT_NEAR(matrix_game_value(M).value, -matrix_game_value(N).value, 1e-12);
  }
}

TEST(MatrixGame, DegenerateLargeIntegerGames) {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> d(-2, 2);
  for (int t = 0; t < 200; ++t) {
    Matrix M(9, 9);
    for (int i = 0; i < 9; ++i)
      for (int j = 0; j < 9; ++j) M(i, j) = d(rng);
    EXPECT_LT(matrix_game_value(M).gap, 1e-10);
  }
}

TEST(MatrixGame, EmptyRejected) { EXPECT_THROW(matrix_game_value(Matrix(0, 2)), PreconditionError); }

}  // namespace
}  // namespace absorb

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

// Zero-sum matrix games (row player maximizes) solved by a dense tableau
// simplex on the standard packing LP.

#ifndef ABSORB_MATRIX_GAME_HPP_
#define ABSORB_MATRIX_GAME_HPP_

#include <limits>
#include <vector>

#include "absorb/common.hpp"

namespace absorb {

class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, fill) {}
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double operator()(int r, int c) const { return a_[static_cast<std::size_t>(r) * cols_ + c]; }
  double& operator()(int r, int c) { return a_[static_cast<std::size_t>(r) * cols_ + c]; }
  const Vec& data() const { return a_; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  Vec a_;
};

struct MatrixGameSolution {
  double value = 0.0;
  Vec row;  // maximizer's mix
  Vec col;  // minimizer's mix
  double gap = 0.0;  // max_i (M y)_i - min_j (x^T M)_j
};

namespace detail {

// max c^T w s.t. A w <= 1, w >= 0 with A > 0 entrywise. Returns primal w
// and the duals of the packing rows.
inline void packing_lp(const Matrix& A, Vec& primal, Vec& dual) {
  const int m = A.rows(), n = A.cols();
  const int width = n + m + 1;
  // Tableau rows 0..m-1 constraints, row m objective (reduced costs, negated).
  std::vector<double> T(static_cast<std::size_t>(m + 1) * width, 0.0);
  auto at = [&](int r, int c) -> double& { return T[static_cast<std::size_t>(r) * width + c]; };
  std::vector<int> basis(m);
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < n; ++c) at(r, c) = A(r, c);
    at(r, n + r) = 1.0;
    at(r, width - 1) = 1.0;
    basis[r] = n + r;
  }
  for (int c = 0; c < n; ++c) at(m, c) = -1.0;

  const double eps = 1e-12;
  int degenerate_run = 0;
  const int max_iter = 50 * (m + n) + 1000;
  for (int iter = 0; iter < max_iter; ++iter) {
    const bool bland = degenerate_run > 20;
    int enter = -1;
    double best = -eps;
    for (int c = 0; c < n + m; ++c) {
      if (at(m, c) < best) {
        enter = c;
        if (bland) break;
        best = at(m, c);
      }
    }
    if (enter < 0) break;
    int leave = -1;
    double ratio = std::numeric_limits<double>::infinity();
    for (int r = 0; r < m; ++r) {
      const double a = at(r, enter);
      if (a > eps) {
        const double q = at(r, width - 1) / a;
        if (q < ratio - 1e-15 || (bland && leave >= 0 && std::abs(q - ratio) <= 1e-15 && basis[r] < basis[leave])) {
          ratio = q;
          leave = r;
        }
      }
    }
    if (leave < 0) throw Error("matrix game LP unbounded");
    degenerate_run = (ratio <= 1e-15) ? degenerate_run + 1 : 0;
    const double piv = at(leave, enter);
    for (int c = 0; c < width; ++c) at(leave, c) /= piv;
    for (int r = 0; r <= m; ++r) {
      if (r == leave) continue;
      const double f = at(r, enter);
      if (f == 0.0) continue;
      for (int c = 0; c < width; ++c) at(r, c) -= f * at(leave, c);
    }
    basis[leave] = enter;
  }
  primal.assign(n, 0.0);
  for (int r = 0; r < m; ++r)
    if (basis[r] < n) primal[basis[r]] = at(r, width - 1);
  dual.assign(m, 0.0);
  for (int r = 0; r < m; ++r) dual[r] = std::max(0.0, at(m, n + r));
}

}  // namespace detail

inline MatrixGameSolution matrix_game_value(const Matrix& M) {
  const int m = M.rows(), n = M.cols();
  if (m == 0 || n == 0) throw PreconditionError("empty payoff matrix");
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double v : M.data()) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  MatrixGameSolution sol;
  if (hi - lo <= 1e-15 * std::max(1.0, std::abs(hi))) {
    sol.value = hi;
    sol.row.assign(m, 1.0 / m);
    sol.col.assign(n, 1.0 / n);
    return sol;
  }
  // Column player's LP on the shifted, strictly positive matrix:
  //   max 1^T w  s.t.  M' w <= 1, w >= 0;  value' = 1 / sum(w).
  const double shift = 1.0 - lo;
  Matrix A(m, n);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < n; ++c) A(r, c) = M(r, c) + shift;
  Vec w, u;
  detail::packing_lp(A, w, u);
  const double sw = sum(w), su = sum(u);
  if (!(sw > 0.0) || !(su > 0.0)) throw Error("matrix game LP failed");
  sol.col.resize(n);
  sol.row.resize(m);
  for (int c = 0; c < n; ++c) sol.col[c] = w[c] / sw;
  for (int r = 0; r < m; ++r) sol.row[r] = u[r] / su;

  double best_row = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < m; ++r) {
    double s = 0.0;
    for (int c = 0; c < n; ++c) s += M(r, c) * sol.col[c];
    best_row = std::max(best_row, s);
  }
  double best_col = std::numeric_limits<double>::infinity();
  for (int c = 0; c < n; ++c) {
    double s = 0.0;
    for (int r = 0; r < m; ++r) s += M(r, c) * sol.row[r];
    best_col = std::min(best_col, s);
  }
  sol.gap = best_row - best_col;
  sol.value = 0.5 * (best_row + best_col);
  return sol;
}

}  // namespace absorb

#endif  // ABSORB_MATRIX_GAME_HPP_

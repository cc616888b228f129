// Copyright 2026 The thetaslab Authors
// SPDX-License-Identifier: Apache-2.0

#include "thetaslab/linalg.hpp"

#include <stdexcept>
#include <utility>

namespace thetaslab {

Echelon row_reduce(RMatrix m, std::size_t cols) {
  Echelon out;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < m.size(); ++col) {
    std::size_t pivot = row;
    while (pivot < m.size() && m[pivot][col] == 0) ++pivot;
    if (pivot == m.size()) continue;
    std::swap(m[row], m[pivot]);
    Rational inv = 1 / m[row][col];
    for (auto& x : m[row]) x *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][col] == 0) continue;
      Rational f = m[r][col];
      for (std::size_t c = 0; c < m[r].size(); ++c) m[r][c] -= f * m[row][c];
    }
    out.pivots.push_back(col);
    ++row;
  }
  m.resize(row);
  out.reduced = std::move(m);
  return out;
}

std::size_t rank(const RMatrix& m, std::size_t cols) { return row_reduce(m, cols).pivots.size(); }

Rational determinant(RMatrix m) {
  std::size_t n = m.size();
  Rational det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && m[pivot][col] == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != col) {
      std::swap(m[pivot], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (m[r][col] == 0) continue;
      Rational f = m[r][col] / m[col][col];
      for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
    }
  }
  return det;
}

std::vector<RVector> kernel(const RMatrix& m, std::size_t cols) {
  Echelon e = row_reduce(m, cols);
  std::vector<bool> is_pivot(cols, false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<RVector> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    RVector v(cols, Rational(0));
    v[free] = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = -e.reduced[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<RVector> solve(const RMatrix& a, const RVector& b, std::size_t cols) {
  if (a.size() != b.size()) throw std::invalid_argument("solve: dimension mismatch");
  RMatrix aug = a;
  for (std::size_t r = 0; r < aug.size(); ++r) {
    aug[r].resize(cols, Rational(0));
    aug[r].push_back(b[r]);
  }
  Echelon e = row_reduce(aug, cols + 1);
  RVector x(cols, Rational(0));
  for (std::size_t r = 0; r < e.pivots.size(); ++r) {
    if (e.pivots[r] == cols) return std::nullopt;
    x[e.pivots[r]] = e.reduced[r][cols];
  }
  return x;
}

RMatrix transpose(const RMatrix& m, std::size_t cols) {
  RMatrix t(cols, RVector(m.size(), Rational(0)));
  for (std::size_t r = 0; r < m.size(); ++r)
    for (std::size_t c = 0; c < cols; ++c) t[c][r] = m[r][c];
  return t;
}

RVector mat_vec(const RMatrix& m, const RVector& x) {
  RVector y(m.size(), Rational(0));
  for (std::size_t r = 0; r < m.size(); ++r)
    for (std::size_t c = 0; c < x.size(); ++c) y[r] += m[r][c] * x[c];
  return y;
}

}  // namespace thetaslab

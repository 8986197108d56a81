/*
 * Copyright 2026 The instanton-workbench Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Exact Gaussian elimination. Pivots are always the topmost usable entry in
// the leftmost usable column, so every derived object (pivot sets, kernels,
// presentations) is a deterministic function of the input entries.

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "instanton/matrix.hpp"

namespace instanton {

template <Field F>
struct Echelon {
  Matrix<F> reduced;                // reduced row echelon form
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

/// Reduced row echelon form. Over dual numbers a pivot must be a unit.
template <Field F>
Echelon<F> row_echelon(Matrix<F> m) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  const std::size_t R = m.rows(), C = m.cols();
  for (std::size_t c = 0; c < C && row < R; ++c) {
    std::size_t piv = R;
    for (std::size_t r = row; r < R; ++r)
      if (is_unit(m(r, c))) {
        piv = r;
        break;
      }
    if (piv == R) continue;
    if (piv != row)
      for (std::size_t k = 0; k < C; ++k) std::swap(m(piv, k), m(row, k));
    auto inv = inverse(m(row, c));
    for (std::size_t k = c; k < C; ++k) m(row, k) = m(row, k) * inv;
    for (std::size_t r = 0; r < R; ++r) {
      if (r == row || is_zero(m(r, c))) continue;
      auto f = m(r, c);
      for (std::size_t k = c; k < C; ++k) m(r, k) -= f * m(row, k);
    }
    pivots.push_back(c);
    ++row;
  }
  return {std::move(m), std::move(pivots)};
}

template <ExactField F>
struct RankKernel {
  std::size_t rank = 0;
  Matrix<F> kernel;  // cols x nullity; columns span the null space
};

template <ExactField F>
RankKernel<F> rank_and_kernel(const Matrix<F>& m) {
  auto e = row_echelon(m);
  const std::size_t C = m.cols();
  std::vector<bool> is_pivot(C, false);
  for (auto p : e.pivots) is_pivot[p] = true;
  Matrix<F> ker(m.field(), C, C - e.pivots.size());
  std::size_t k = 0;
  for (std::size_t f = 0; f < C; ++f) {
    if (is_pivot[f]) continue;
    ker(f, k) = m.field().one();
    for (std::size_t i = 0; i < e.pivots.size(); ++i) ker(e.pivots[i], k) = -e.reduced(i, f);
    ++k;
  }
  return {e.pivots.size(), std::move(ker)};
}

/// Over k[eps] only the eps^0 part is ranked.
template <ExactField B>
RankKernel<B> rank_and_kernel(const Matrix<DualField<B>>& m) {
  return rank_and_kernel(real_part(m));
}

template <ExactField F>
std::size_t rank(const Matrix<F>& m) {
  return row_echelon(m).pivots.size();
}

template <ExactField F>
Matrix<F> kernel(const Matrix<F>& m) {
  return rank_and_kernel(m).kernel;
}

/// Gauss-Jordan inverse; works over k[eps] when the real part is invertible.
template <Field F>
Matrix<F> inverse(const Matrix<F>& m) {
  if (!m.is_square()) throw ShapeError("inverse of non-square " + m.shape());
  const std::size_t n = m.rows();
  auto e = row_echelon(m.hcat(Matrix<F>::identity(m.field(), n)));
  if (e.pivots.size() < n || (n > 0 && e.pivots[n - 1] != n - 1))
    throw SingularMatrix("matrix of size " + std::to_string(n) + " is singular");
  return e.reduced.block(0, n, n, n);
}

template <ExactField F>
typename F::value_type determinant(Matrix<F> m) {
  if (!m.is_square()) throw ShapeError("determinant of non-square " + m.shape());
  const std::size_t n = m.rows();
  auto det = m.field().one();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = n;
    for (std::size_t r = c; r < n; ++r)
      if (!is_zero(m(r, c))) {
        piv = r;
        break;
      }
    if (piv == n) return m.field().zero();
    if (piv != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(m(piv, k), m(c, k));
      det = -det;
    }
    det = det * m(c, c);
    auto inv = inverse(m(c, c));
    for (std::size_t r = c + 1; r < n; ++r) {
      if (is_zero(m(r, c))) continue;
      typename F::value_type f = m(r, c) * inv;
      for (std::size_t k = c; k < n; ++k) m(r, k) -= f * m(c, k);
    }
  }
  return det;
}

/// Some x with a*x = b, or nullopt when the system is inconsistent.
template <ExactField F>
std::optional<Matrix<F>> solve(const Matrix<F>& a, const Matrix<F>& b) {
  if (a.rows() != b.rows()) throw ShapeError("solve: row mismatch");
  const std::size_t C = a.cols();
  auto e = row_echelon(a.hcat(b));
  Matrix<F> x(a.field(), C, b.cols());
  for (std::size_t i = 0; i < e.pivots.size(); ++i) {
    if (e.pivots[i] >= C) return std::nullopt;
    for (std::size_t j = 0; j < b.cols(); ++j) x(e.pivots[i], j) = e.reduced(i, C + j);
  }
  return x;
}

/// Pfaffian by congruence elimination: pair rows (k, k+1), clear the rest of
/// both rows with unimodular row+column operations, multiply pivots.
template <ExactField F>
typename F::value_type pfaffian(Matrix<F> a) {
  if (!a.is_square() || a.rows() % 2 != 0)
    throw ShapeError("pfaffian needs an even square matrix, got " + a.shape());
  if (!a.is_skew()) throw ShapeError("pfaffian of a non-skew matrix");
  const std::size_t n = a.rows();
  auto pf = a.field().one();
  auto swap_index = [&](std::size_t i, std::size_t j) {
    for (std::size_t k = 0; k < n; ++k) std::swap(a(i, k), a(j, k));
    for (std::size_t k = 0; k < n; ++k) std::swap(a(k, i), a(k, j));
  };
  // row_i -= c*row_j and col_i -= c*col_j
  auto add_multiple = [&](std::size_t i, std::size_t j, const typename F::value_type& c) {
    for (std::size_t k = 0; k < n; ++k) a(i, k) -= c * a(j, k);
    for (std::size_t k = 0; k < n; ++k) a(k, i) -= c * a(k, j);
  };
  for (std::size_t k = 0; k < n; k += 2) {
    std::size_t j = k + 1;
    while (j < n && is_zero(a(k, j))) ++j;
    if (j == n) return a.field().zero();
    if (j != k + 1) {
      swap_index(j, k + 1);
      pf = -pf;
    }
    pf = pf * a(k, k + 1);
    for (std::size_t i = k + 2; i < n; ++i) {
      if (!is_zero(a(k, i))) add_multiple(i, k + 1, a(k, i) / a(k, k + 1));
      if (!is_zero(a(k + 1, i))) add_multiple(i, k, a(k + 1, i) / a(k + 1, k));
    }
  }
  return pf;
}

}  // namespace instanton

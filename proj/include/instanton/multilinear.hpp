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

// Basis conventions. V = k^4 with basis e0..e3 and dual basis x0..x3.
// Lambda^2 V^v has the ordered basis
//   x0^x1, x0^x2, x0^x3, x1^x2, x1^x3, x2^x3   (indices 0..5)
// and (x_c ^ x_d)(e_a, e_b) = d_ca d_db - d_da d_cb.
// H_n (x) V is indexed by (i, a) -> 4i + a.

#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "instanton/linalg.hpp"
#include "instanton/random.hpp"

namespace instanton {

inline constexpr std::array<std::array<std::size_t, 2>, 6> kWedgePairs{
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

/// Lambda^2 index of x_a ^ x_b for a < b.
constexpr std::size_t wedge_index(std::size_t a, std::size_t b) {
  for (std::size_t k = 0; k < 6; ++k)
    if (kWedgePairs[k][0] == a && kWedgePairs[k][1] == b) return k;
  return 6;
}

template <Field F>
using TwoForm = std::array<typename F::value_type, 6>;

template <Field F>
TwoForm<F> zero_form(const F& f) {
  return {f.zero(), f.zero(), f.zero(), f.zero(), f.zero(), f.zero()};
}

template <Field F>
TwoForm<F> make_form(const F& f, std::initializer_list<long long> coeffs) {
  if (coeffs.size() != 6) throw ShapeError("a 2-form has 6 coefficients");
  TwoForm<F> w = zero_form(f);
  std::size_t k = 0;
  for (auto c : coeffs) w[k++] = f.from_int(c);
  return w;
}

template <Field F>
bool form_is_zero(const TwoForm<F>& w) {
  for (const auto& x : w)
    if (!is_zero(x)) return false;
  return true;
}

/// 4x4 matrix [w(e_a, e_b)].
template <Field F>
Matrix<F> two_form_block(const F& f, const TwoForm<F>& w) {
  Matrix<F> m(f, 4, 4);
  for (std::size_t k = 0; k < 6; ++k) {
    auto [c, d] = kWedgePairs[k];
    m(c, d) = w[k];
    m(d, c) = -w[k];
  }
  return m;
}

enum class SymmetryTag { Symmetric, General };

/// Matrix of 2-forms: an element of S^2 H^v (x) Lambda^2 V^v (Symmetric) or of
/// Hom (x) Lambda^2 V^v (General).
template <Field F>
class TwoFormMatrix {
 public:
  using value_type = typename F::value_type;
  using Form = TwoForm<F>;

  TwoFormMatrix() = default;
  TwoFormMatrix(F field, std::size_t rows, std::size_t cols, SymmetryTag tag)
      : field_(std::move(field)), rows_(rows), cols_(cols), tag_(tag),
        entries_(rows * cols, zero_form(field_)) {
    if (tag == SymmetryTag::Symmetric && rows != cols)
      throw SymmetryViolation("symmetric 2-form matrix must be square");
  }

  /// Builds from row-major entries and validates the symmetry tag.
  static TwoFormMatrix from_entries(F field, std::size_t rows, std::size_t cols, SymmetryTag tag,
                                    std::vector<Form> entries) {
    TwoFormMatrix t(std::move(field), rows, cols, tag);
    if (entries.size() != rows * cols) throw ShapeError("2-form matrix entry count mismatch");
    t.entries_ = std::move(entries);
    if (tag == SymmetryTag::Symmetric)
      for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = i + 1; j < cols; ++j)
          if (t.at(i, j) != t.at(j, i))
            throw SymmetryViolation("entry (" + std::to_string(i) + "," + std::to_string(j) +
                                    ") differs from its transpose");
    return t;
  }

  const F& field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  SymmetryTag tag() const { return tag_; }

  const Form& at(std::size_t i, std::size_t j) const {
    if (i >= rows_ || j >= cols_) throw ShapeError("2-form matrix index out of range");
    return entries_[i * cols_ + j];
  }
  /// For Symmetric, also writes the transposed entry.
  void set(std::size_t i, std::size_t j, const Form& w) {
    if (i >= rows_ || j >= cols_) throw ShapeError("2-form matrix index out of range");
    entries_[i * cols_ + j] = w;
    if (tag_ == SymmetryTag::Symmetric) entries_[j * cols_ + i] = w;
  }
  void set_component(std::size_t i, std::size_t j, std::size_t k, const value_type& x) {
    Form w = at(i, j);
    w[k] = x;
    set(i, j, w);
  }

  bool is_zero() const {
    for (const auto& w : entries_)
      if (!form_is_zero<F>(w)) return false;
    return true;
  }

  friend bool operator==(const TwoFormMatrix& a, const TwoFormMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.tag_ == b.tag_ && a.field_ == b.field_ &&
           a.entries_ == b.entries_;
  }

 private:
  F field_{};
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  SymmetryTag tag_ = SymmetryTag::General;
  std::vector<Form> entries_;
};

/// (4 rows) x (4 cols) matrix whose (i,j) block is [entry(i,j)(e_a, e_b)].
template <Field F>
Matrix<F> flatten(const TwoFormMatrix<F>& t) {
  Matrix<F> m(t.field(), 4 * t.rows(), 4 * t.cols());
  for (std::size_t i = 0; i < t.rows(); ++i)
    for (std::size_t j = 0; j < t.cols(); ++j) {
      const auto& w = t.at(i, j);
      for (std::size_t k = 0; k < 6; ++k) {
        auto [c, d] = kWedgePairs[k];
        m(4 * i + c, 4 * j + d) = w[k];
        m(4 * i + d, 4 * j + c) = -w[k];
      }
    }
  return m;
}

template <Field F>
TwoFormMatrix<F> unflatten(const Matrix<F>& m, std::size_t rows, std::size_t cols, SymmetryTag tag) {
  if (m.rows() != 4 * rows || m.cols() != 4 * cols)
    throw ShapeError("unflatten: " + m.shape() + " is not " + std::to_string(4 * rows) + "x" +
                     std::to_string(4 * cols));
  if (tag == SymmetryTag::Symmetric && rows != cols)
    throw SymmetryViolation("symmetric 2-form matrix must be square");
  std::vector<TwoForm<F>> entries;
  entries.reserve(rows * cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = a; b < 4; ++b)
          if (!is_zero(m(4 * i + a, 4 * j + b) + m(4 * i + b, 4 * j + a)))
            throw NonSkewBlock("block (" + std::to_string(i) + "," + std::to_string(j) +
                               ") is not antisymmetric");
      TwoForm<F> w = zero_form(m.field());
      for (std::size_t k = 0; k < 6; ++k) w[k] = m(4 * i + kWedgePairs[k][0], 4 * j + kWedgePairs[k][1]);
      entries.push_back(std::move(w));
    }
  return TwoFormMatrix<F>::from_entries(m.field(), rows, cols, tag, std::move(entries));
}

template <Field F>
struct SDecomposition {
  bool in_s = false;
  TwoFormMatrix<F> s_component;  // Symmetric
  Matrix<F> anti_component;      // Lambda^2 H^v (x) S^2 V^v part, as a flat matrix
};

/// Splits a skew 4m x 4m matrix along
/// Lambda^2(H^v (x) V^v) = S^2 H^v (x) Lambda^2 V^v  (+)  Lambda^2 H^v (x) S^2 V^v.
template <ExactField F>
SDecomposition<F> s_membership(const Matrix<F>& x) {
  if (!x.is_square() || x.rows() % 4 != 0) throw ShapeError("s_membership: shape " + x.shape());
  if (!x.is_skew()) throw ShapeError("s_membership: input is not skew");
  const std::size_t m = x.rows() / 4;
  const auto& f = x.field();
  const auto half = inverse(f.from_int(2));
  TwoFormMatrix<F> s(f, m, m, SymmetryTag::Symmetric);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) {
      TwoForm<F> w = zero_form(f);
      for (std::size_t k = 0; k < 6; ++k) {
        auto [c, d] = kWedgePairs[k];
        w[k] = half * (x(4 * i + c, 4 * j + d) - x(4 * i + d, 4 * j + c));
      }
      s.set(i, j, w);
    }
  Matrix<F> anti = x - flatten(s);
  bool in_s = anti.is_zero();
  return {in_s, std::move(s), std::move(anti)};
}

template <Field F>
TwoFormMatrix<F> restrict_form(const TwoFormMatrix<F>& a, const std::vector<std::size_t>& j) {
  if (a.tag() != SymmetryTag::Symmetric) throw SymmetryViolation("restrict_form needs a symmetric input");
  for (std::size_t s = 0; s < j.size(); ++s) {
    if (j[s] >= a.rows()) throw ShapeError("restrict_form: index out of range");
    if (s > 0 && j[s] <= j[s - 1]) throw ShapeError("restrict_form: indices must be strictly increasing");
  }
  TwoFormMatrix<F> r(a.field(), j.size(), j.size(), SymmetryTag::Symmetric);
  for (std::size_t s = 0; s < j.size(); ++s)
    for (std::size_t t = s; t < j.size(); ++t) r.set(s, t, a.at(j[s], j[t]));
  return r;
}

/// Pull-back along g: H_m -> H_N (an N x m matrix):
/// entry'(i,j) = sum_{k,l} g(k,i) g(l,j) entry(k,l).
template <ExactField F>
TwoFormMatrix<F> pull_back(const TwoFormMatrix<F>& a, const Matrix<F>& g) {
  if (a.tag() != SymmetryTag::Symmetric) throw SymmetryViolation("pull_back needs a symmetric input");
  if (g.rows() != a.rows()) throw ShapeError("pull_back: map has " + g.shape() + " for N=" + std::to_string(a.rows()));
  require_same_field(a.field(), g.field(), "pull_back");
  const std::size_t N = a.rows(), m = g.cols();
  const auto& f = a.field();
  // half(k, j) = sum_l g(l,j) entry(k,l)
  std::vector<TwoForm<F>> half(N * m, zero_form(f));
  for (std::size_t k = 0; k < N; ++k)
    for (std::size_t l = 0; l < N; ++l) {
      const auto& w = a.at(k, l);
      if (form_is_zero<F>(w)) continue;
      for (std::size_t j = 0; j < m; ++j) {
        if (is_zero(g(l, j))) continue;
        for (std::size_t c = 0; c < 6; ++c) half[k * m + j][c] += g(l, j) * w[c];
      }
    }
  TwoFormMatrix<F> r(f, m, m, SymmetryTag::Symmetric);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) {
      TwoForm<F> w = zero_form(f);
      for (std::size_t k = 0; k < N; ++k) {
        if (is_zero(g(k, i))) continue;
        for (std::size_t c = 0; c < 6; ++c) w[c] += g(k, i) * half[k * m + j][c];
      }
      r.set(i, j, w);
    }
  return r;
}

template <ExactField F>
TwoFormMatrix<F> change_basis(const TwoFormMatrix<F>& a, const Matrix<F>& g) {
  if (!g.is_square() || g.rows() != a.rows()) throw ShapeError("change_basis: g has shape " + g.shape());
  if (rank(g) != g.rows()) throw SingularMatrix("change_basis: g is singular");
  return pull_back(a, g);
}

/// g (x) id_V as a 4N x 4m matrix.
template <Field F>
Matrix<F> tensor_identity_v(const Matrix<F>& g) {
  Matrix<F> t(g.field(), 4 * g.rows(), 4 * g.cols());
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j)
      for (std::size_t a = 0; a < 4; ++a) t(4 * i + a, 4 * j + a) = g(i, j);
  return t;
}

/// Block diagonal sum of symmetric 2-form matrices.
template <Field F>
TwoFormMatrix<F> direct_sum(const std::vector<TwoFormMatrix<F>>& parts) {
  if (parts.empty()) throw ShapeError("direct_sum of nothing");
  std::size_t n = 0;
  for (const auto& p : parts) {
    require_same_field(p.field(), parts[0].field(), "direct_sum");
    if (p.tag() != SymmetryTag::Symmetric) throw SymmetryViolation("direct_sum needs symmetric parts");
    n += p.rows();
  }
  TwoFormMatrix<F> s(parts[0].field(), n, n, SymmetryTag::Symmetric);
  std::size_t off = 0;
  for (const auto& p : parts) {
    for (std::size_t i = 0; i < p.rows(); ++i)
      for (std::size_t j = i; j < p.rows(); ++j) s.set(off + i, off + j, p.at(i, j));
    off += p.rows();
  }
  return s;
}

template <ExactField F>
TwoFormMatrix<F> random_two_form_matrix(const F& f, std::size_t rows, std::size_t cols, SymmetryTag tag,
                                        Rng& rng) {
  TwoFormMatrix<F> t(f, rows, cols, tag);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = (tag == SymmetryTag::Symmetric ? i : 0); j < cols; ++j) {
      TwoForm<F> w = zero_form(f);
      for (auto& x : w) x = random_element(f, rng);
      t.set(i, j, w);
    }
  return t;
}

}  // namespace instanton

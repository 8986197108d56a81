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

#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "instanton/errors.hpp"
#include "instanton/exactfield.hpp"

namespace instanton {

/// Dense row-major matrix over a field descriptor F.
template <Field F>
class Matrix {
 public:
  using field_type = F;
  using value_type = typename F::value_type;

  Matrix() = default;
  Matrix(F field, std::size_t rows, std::size_t cols)
      : field_(std::move(field)), rows_(rows), cols_(cols), data_(rows * cols, field_.zero()) {}
  Matrix(F field, std::size_t rows, std::size_t cols, std::vector<value_type> entries)
      : field_(std::move(field)), rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows * cols)
      throw ShapeError("matrix entry count " + std::to_string(data_.size()) + " != " +
                       std::to_string(rows) + "x" + std::to_string(cols));
  }

  static Matrix identity(const F& field, std::size_t n) {
    Matrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = field.one();
    return m;
  }
  /// Column vector from entries.
  static Matrix column(const F& field, std::vector<value_type> v) {
    std::size_t n = v.size();
    return Matrix(field, n, 1, std::move(v));
  }

  const F& field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  const std::vector<value_type>& entries() const { return data_; }

  value_type& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const value_type& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Matrix transpose() const {
    Matrix t(field_, cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) throw ShapeError("block out of range");
    Matrix b(field_, nr, nc);
    for (std::size_t r = 0; r < nr; ++r)
      for (std::size_t c = 0; c < nc; ++c) b(r, c) = (*this)(r0 + r, c0 + c);
    return b;
  }

  void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
    if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) throw ShapeError("set_block out of range");
    for (std::size_t r = 0; r < b.rows_; ++r)
      for (std::size_t c = 0; c < b.cols_; ++c) (*this)(r0 + r, c0 + c) = b(r, c);
  }

  Matrix select(const std::vector<std::size_t>& rs, const std::vector<std::size_t>& cs) const {
    Matrix s(field_, rs.size(), cs.size());
    for (std::size_t r = 0; r < rs.size(); ++r)
      for (std::size_t c = 0; c < cs.size(); ++c) {
        if (rs[r] >= rows_ || cs[c] >= cols_) throw ShapeError("select index out of range");
        s(r, c) = (*this)(rs[r], cs[c]);
      }
    return s;
  }

  Matrix col(std::size_t c) const { return block(0, c, rows_, 1); }

  /// Horizontal concatenation [this | other].
  Matrix hcat(const Matrix& other) const {
    if (other.rows_ != rows_) throw ShapeError("hcat row mismatch");
    require_same_field(field_, other.field_, "hcat");
    Matrix m(field_, rows_, cols_ + other.cols_);
    m.set_block(0, 0, *this);
    m.set_block(0, cols_, other);
    return m;
  }
  Matrix vcat(const Matrix& other) const {
    if (other.cols_ != cols_) throw ShapeError("vcat column mismatch");
    require_same_field(field_, other.field_, "vcat");
    Matrix m(field_, rows_ + other.rows_, cols_);
    m.set_block(0, 0, *this);
    m.set_block(rows_, 0, other);
    return m;
  }

  bool is_zero() const {
    for (const auto& x : data_)
      if (!instanton::is_zero(x)) return false;
    return true;
  }
  bool is_skew() const {
    if (!is_square()) return false;
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = r; c < cols_; ++c)
        if (!instanton::is_zero((*this)(r, c) + (*this)(c, r))) return false;
    return true;
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    a.same_shape(b, "+");
    Matrix s = a;
    for (std::size_t k = 0; k < s.data_.size(); ++k) s.data_[k] += b.data_[k];
    return s;
  }
  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    a.same_shape(b, "-");
    Matrix s = a;
    for (std::size_t k = 0; k < s.data_.size(); ++k) s.data_[k] -= b.data_[k];
    return s;
  }
  Matrix operator-() const {
    Matrix s = *this;
    for (auto& x : s.data_) x = -x;
    return s;
  }
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_)
      throw ShapeError("product of " + a.shape() + " and " + b.shape());
    require_same_field(a.field_, b.field_, "matrix product");
    Matrix p(a.field_, a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const value_type& aik = a(i, k);
        if (instanton::is_zero(aik)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) p(i, j) += aik * b(k, j);
      }
    return p;
  }
  friend Matrix operator*(const value_type& s, const Matrix& a) {
    Matrix m = a;
    for (auto& x : m.data_) x = s * x;
    return m;
  }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.field_ == b.field_ && a.data_ == b.data_;
  }

  std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

 private:
  void same_shape(const Matrix& b, const char* op) const {
    if (rows_ != b.rows_ || cols_ != b.cols_)
      throw ShapeError(std::string("operator") + op + " on " + shape() + " and " + b.shape());
    require_same_field(field_, b.field_, op);
  }

  F field_{};
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<value_type> data_;
};

/// Real (eps^0) and infinitesimal (eps^1) parts of a dual matrix.
template <ExactField B>
Matrix<B> real_part(const Matrix<DualField<B>>& m) {
  Matrix<B> r(m.field().base, m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j).re;
  return r;
}
template <ExactField B>
Matrix<B> eps_part(const Matrix<DualField<B>>& m) {
  Matrix<B> r(m.field().base, m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j).eps;
  return r;
}
/// a + eps*b.
template <ExactField B>
Matrix<DualField<B>> make_dual(const Matrix<B>& a, const Matrix<B>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("make_dual shape mismatch");
  DualField<B> d(a.field());
  Matrix<DualField<B>> m(d, a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = d.make(a(i, j), b(i, j));
  return m;
}

/// Entrywise image of a rational matrix in F_p; nullopt on a bad denominator.
inline std::optional<Matrix<PrimeField>> reduce(const Matrix<RationalField>& m, const PrimeField& fp) {
  Matrix<PrimeField> r(fp, m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      auto x = fp.reduce(m(i, j));
      if (!x) return std::nullopt;
      r(i, j) = *x;
    }
  return r;
}

}  // namespace instanton

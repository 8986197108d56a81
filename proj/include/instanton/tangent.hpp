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

// First-order analysis of the rank condition rk flat(A) <= 2n + 2r near a
// point A of exact rank 2n + 2r. With U a set of pivot indices on which A is
// invertible, the condition is locally the vanishing of the skew Schur
// complement S(A') = A'_cc - A'_cU A'_UU^{-1} A'_Uc; its strictly upper
// entries are the C(2n-2r, 2) local equations.

#pragma once

#include <string>
#include <vector>

#include "instanton/hyperweb.hpp"

namespace instanton {

template <ExactField F>
class LocalEquations {
 public:
  LocalEquations(const Hyperweb<F>& a, std::size_t r) : n_(a.n()), r_(r) {
    auto e = row_echelon(a.flat());
    if (e.pivots.size() != 2 * n_ + 2 * r)
      throw NotAnInstanton("rank " + std::to_string(e.pivots.size()) + " != 2n+2r = " +
                           std::to_string(2 * n_ + 2 * r));
    u_ = e.pivots;
    std::vector<bool> in_u(4 * n_, false);
    for (auto i : u_) in_u[i] = true;
    for (std::size_t i = 0; i < 4 * n_; ++i)
      if (!in_u[i]) uc_.push_back(i);
  }

  const std::vector<std::size_t>& u() const { return u_; }
  const std::vector<std::size_t>& complement() const { return uc_; }
  std::size_t num_equations() const { return uc_.size() * (uc_.size() - (uc_.empty() ? 0 : 1)) / 2; }

  /// Schur complement of the U-block of a flat form over any field (including dual numbers).
  template <Field G>
  Matrix<G> schur(const Matrix<G>& m) const {
    Matrix<G> auu = m.select(u_, u_), auc = m.select(u_, uc_), acu = m.select(uc_, u_), acc = m.select(uc_, uc_);
    return acc - acu * inverse(auu) * auc;
  }

  /// Strictly upper entries of the Schur complement, row-major.
  template <Field G>
  std::vector<typename G::value_type> evaluate(const Matrix<G>& m) const {
    Matrix<G> s = schur(m);
    std::vector<typename G::value_type> out;
    for (std::size_t i = 0; i < s.rows(); ++i)
      for (std::size_t j = i + 1; j < s.cols(); ++j) out.push_back(s(i, j));
    return out;
  }

 private:
  std::size_t n_, r_;
  std::vector<std::size_t> u_, uc_;
};

template <ExactField F>
LocalEquations<F> local_equations(const Hyperweb<F>& a, std::size_t r) {
  return LocalEquations<F>(a, r);
}

/// Basis direction of S_n: entry (i, j) (and (j, i)) equal to the k-th basis 2-form.
template <ExactField F>
Matrix<F> basis_direction(const F& f, std::size_t n, std::size_t i, std::size_t j, std::size_t k) {
  TwoFormMatrix<F> x(f, n, n, SymmetryTag::Symmetric);
  x.set_component(i, j, k, f.one());
  return flatten(x);
}

template <ExactField F>
std::vector<Matrix<F>> s_basis(const F& f, std::size_t n) {
  std::vector<Matrix<F>> dirs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      for (std::size_t k = 0; k < 6; ++k) dirs.push_back(basis_direction(f, n, i, j, k));
  return dirs;
}

/// eps-part of the local equations at A + eps X.
template <ExactField F>
std::vector<typename F::value_type> directional_derivative(const LocalEquations<F>& eq, const Hyperweb<F>& a,
                                                           const Matrix<F>& x) {
  auto vals = eq.evaluate(make_dual(a.flat(), x));
  std::vector<typename F::value_type> out;
  for (auto& v : vals) out.push_back(v.eps);
  return out;
}

template <ExactField F>
Matrix<F> jacobian(const LocalEquations<F>& eq, const Hyperweb<F>& a) {
  auto dirs = s_basis(a.field(), a.n());
  Matrix<F> j(a.field(), eq.num_equations(), dirs.size());
  for (std::size_t c = 0; c < dirs.size(); ++c) {
    auto d = directional_derivative(eq, a, dirs[c]);
    for (std::size_t r = 0; r < d.size(); ++r) j(r, c) = d[r];
  }
  return j;
}

constexpr long long expected_dimension(long long n, long long r) { return n * n + 4 * n * (r + 1) - r * (2 * r + 1); }
constexpr long long dim_s(long long n) { return 3 * n * (n + 1); }

struct TangentReport {
  std::size_t n = 0, r = 0;
  std::string field;
  std::size_t num_equations = 0;
  std::size_t jacobian_rank = 0;
  long long tangent_dim = 0;
  long long expected_dim = 0;
  bool meets_expected = false;
  bool char_p_caveat = false;  // over F_p the Jacobian rank is a lower bound for char 0
};

template <ExactField F>
TangentReport tangent_dimension(const Hyperweb<F>& a, std::size_t r) {
  LocalEquations<F> eq(a, r);
  TangentReport rep;
  rep.n = a.n();
  rep.r = r;
  rep.field = a.field().spec().to_string();
  rep.num_equations = eq.num_equations();
  rep.jacobian_rank = rank(jacobian(eq, a));
  const long long n = static_cast<long long>(a.n());
  rep.tangent_dim = dim_s(n) - static_cast<long long>(rep.jacobian_rank);
  rep.expected_dim = expected_dimension(n, static_cast<long long>(r));
  ensure(rep.tangent_dim >= rep.expected_dim, "tangent dimension below the expected lower bound");
  rep.meets_expected = rep.tangent_dim == rep.expected_dim;
  rep.char_p_caveat = a.field().characteristic() != 0;
  return rep;
}

// ---------------------------------------------------------------------------
// Integer identities behind the dimension counts.

struct IdentityRow {
  long long n = 0, r = 0;
  long long a_lhs = 0, a_rhs = 0;  // equation count
  long long b_lhs = 0, b_rhs = 0;  // dimension chain
  long long c_lhs = 0, c_rhs = 0;  // dim Z_{n-r+1} + dim Psi_{n,r}
  bool ok() const { return a_lhs == a_rhs && b_lhs == b_rhs && c_lhs == c_rhs; }
};

struct IdentityTable {
  std::vector<IdentityRow> rows;
  bool all_pass() const {
    for (const auto& r : rows)
      if (!r.ok()) return false;
    return true;
  }
};

/// All 2 <= r < n <= n_max with r <= r_max. `inject_off_by_one` perturbs the
/// first row (negative control).
inline IdentityTable dimension_identities(long long n_max, long long r_max, bool inject_off_by_one = false) {
  if (n_max < 2 || r_max < 2) throw PreconditionViolation("dimension_identities needs bounds >= 2");
  IdentityTable t;
  for (long long n = 3; n <= n_max; ++n)
    for (long long r = 2; r < n && r <= r_max; ++r) {
      IdentityRow row;
      row.n = n;
      row.r = r;
      const long long k = 2 * n - 2 * r;
      row.a_lhs = k * (k - 1) / 2;
      row.a_rhs = 2 * n * n - n * (4 * r + 1) + r * (2 * r + 1);
      const long long m = n - r + 1, N = 2 * n - r + 1;
      row.b_lhs = m * (4 * n + 2 * r + 6) + 6 * (r - 1) * m + 3 * (r - 1) * r + (8 * n - 8 * r + 5);
      row.b_rhs = N * N + 4 * N * (r + 1) - r * (2 * r + 1);
      row.c_lhs = 4 * m * (m + 2) + 6 * (r - 1) * m;
      row.c_rhs = m * (4 * n + 2 * r + 6);
      t.rows.push_back(row);
    }
  if (inject_off_by_one && !t.rows.empty()) t.rows.front().a_rhs += 1;
  return t;
}

}  // namespace instanton

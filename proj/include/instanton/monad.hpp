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

// Monads H (x) O(-1) -> W (x) O -> H'^v (x) O(1) given by matrices of linear
// forms. Cohomology of twists is read off from multiplication maps between
// spaces of polynomials; nothing sheaf-theoretic is represented symbolically.

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "instanton/hyperweb.hpp"

namespace instanton {

/// rows x cols matrix of linear forms sum_a coeff[a] * x_a.
template <ExactField F>
struct LinearFormMatrix {
  std::array<Matrix<F>, 4> coeff;

  std::size_t rows() const { return coeff[0].rows(); }
  std::size_t cols() const { return coeff[0].cols(); }

  Matrix<F> at(const Point<F>& v) const {
    Matrix<F> m(coeff[0].field(), rows(), cols());
    for (std::size_t a = 0; a < 4; ++a)
      if (!is_zero(v[a])) m = m + v[a] * coeff[a];
    return m;
  }
};

/// Exponent vectors of degree-d monomials in x0..x3, lexicographic.
inline std::vector<std::array<int, 4>> monomials(int d) {
  std::vector<std::array<int, 4>> out;
  if (d < 0) return out;
  for (int a = 0; a <= d; ++a)
    for (int b = 0; a + b <= d; ++b)
      for (int c = 0; a + b + c <= d; ++c) out.push_back({a, b, c, d - a - b - c});
  return out;
}

inline std::size_t monomial_index(const std::vector<std::array<int, 4>>& basis, const std::array<int, 4>& e) {
  auto it = std::lower_bound(basis.begin(), basis.end(), e);
  ensure(it != basis.end() && *it == e, "monomial not in basis");
  return static_cast<std::size_t>(it - basis.begin());
}

/// Matrix of multiplication by L: src (x) S^d -> dst (x) S^{d+1}.
template <ExactField F>
Matrix<F> multiplication_map(const LinearFormMatrix<F>& l, int d) {
  auto src = monomials(d), dst = monomials(d + 1);
  const auto& f = l.coeff[0].field();
  Matrix<F> m(f, l.rows() * dst.size(), l.cols() * src.size());
  for (std::size_t j = 0; j < l.cols(); ++j)
    for (std::size_t s = 0; s < src.size(); ++s)
      for (std::size_t a = 0; a < 4; ++a) {
        auto e = src[s];
        ++e[a];
        std::size_t t = monomial_index(dst, e);
        for (std::size_t i = 0; i < l.rows(); ++i) {
          const auto& c = l.coeff[a](i, j);
          if (!is_zero(c)) m(i * dst.size() + t, j * src.size() + s) += c;
        }
      }
  return m;
}

template <ExactField F>
class MonadData {
 public:
  /// Validates shapes and b o a = 0 as quadratic forms.
  MonadData(std::size_t h_left, std::size_t w, std::size_t h_right, LinearFormMatrix<F> a, LinearFormMatrix<F> b,
            std::optional<Matrix<F>> q = std::nullopt)
      : h_left_(h_left), w_(w), h_right_(h_right), a_(std::move(a)), b_(std::move(b)), q_(std::move(q)) {
    for (std::size_t k = 0; k < 4; ++k) {
      if (a_.coeff[k].rows() != w || a_.coeff[k].cols() != h_left) throw ShapeError("monad: a has wrong shape");
      if (b_.coeff[k].rows() != h_right || b_.coeff[k].cols() != w) throw ShapeError("monad: b has wrong shape");
    }
    if (q_ && (q_->rows() != w || !q_->is_skew())) throw ShapeError("monad: q must be skew of size w");
    for (std::size_t s = 0; s < 4; ++s)
      for (std::size_t t = s; t < 4; ++t) {
        Matrix<F> ba = b_.coeff[s] * a_.coeff[t];
        if (s != t) ba = ba + b_.coeff[t] * a_.coeff[s];
        if (!ba.is_zero())
          throw NotAMonad("b o a has a nonzero x" + std::to_string(s) + "x" + std::to_string(t) + " coefficient");
      }
  }

  std::size_t h_left() const { return h_left_; }
  std::size_t w() const { return w_; }
  std::size_t h_right() const { return h_right_; }
  const LinearFormMatrix<F>& a() const { return a_; }
  const LinearFormMatrix<F>& b() const { return b_; }
  const std::optional<Matrix<F>>& q() const { return q_; }
  const F& field() const { return a_.coeff[0].field(); }

 private:
  std::size_t h_left_, w_, h_right_;
  LinearFormMatrix<F> a_, b_;
  std::optional<Matrix<F>> q_;
};

/// Anti-self-dual monad with left map a and right map a^T q.
template <ExactField F>
MonadData<F> monad_from_left_map(const LinearFormMatrix<F>& a, const Matrix<F>& q) {
  LinearFormMatrix<F> b;
  for (std::size_t k = 0; k < 4; ++k) b.coeff[k] = a.coeff[k].transpose() * q;
  return MonadData<F>(a.cols(), a.rows(), a.cols(), a, b, q);
}

template <ExactField F>
MonadData<F> monad_from_presentation(const WPresentation<F>& w, std::size_t n) {
  LinearFormMatrix<F> a;
  for (std::size_t k = 0; k < 4; ++k) {
    a.coeff[k] = Matrix<F>(w.c.field(), w.rank, n);
    for (std::size_t row = 0; row < w.rank; ++row)
      for (std::size_t h = 0; h < n; ++h) a.coeff[k](row, h) = w.c(row, 4 * h + k);
  }
  return monad_from_left_map(a, w.q);
}

/// Monad M_A of an instanton hyperweb; runs the checker first.
template <ExactField F>
MonadData<F> monad_from_hyperweb(const Hyperweb<F>& a, std::size_t r, const CheckStrategy& strategy) {
  auto rep = check_instanton(a, r, strategy);
  if (!rep.rank_ok || !rep.fiber.ok())
    throw NotAnInstanton("conditions (i)/(ii) fail: rank " + std::to_string(rep.rank_value) + ", fibre " +
                         (rep.fiber.ok() ? "ok" : rep.fiber.reason));
  return monad_from_presentation(present(a), a.n());
}

template <ExactField F>
MonadData<F> monad_from_hyperweb(const Hyperweb<F>& a, std::size_t r) {
  CheckStrategy s = std::is_same_v<F, PrimeField> ? CheckStrategy::exhaustive() : CheckStrategy::sampled(64);
  return monad_from_hyperweb(a, r, s);
}

/// Composes the left map with g : H_m -> H_n (an n x m matrix); the right map
/// is recomputed as the q-transpose.
template <ExactField F>
MonadData<F> restrict_monad(const MonadData<F>& m, const Matrix<F>& g) {
  if (!m.q()) throw PreconditionViolation("restrict_monad needs an anti-self-dual monad");
  LinearFormMatrix<F> a;
  for (std::size_t k = 0; k < 4; ++k) a.coeff[k] = m.a().coeff[k] * g;
  return monad_from_left_map(a, *m.q());
}

struct FiberRanks {
  std::size_t a_rank = 0;
  std::size_t b_rank = 0;
  std::size_t middle_dim = 0;
};

template <ExactField F>
FiberRanks fiberwise_exact(const MonadData<F>& m, const Point<F>& v) {
  FiberRanks fr;
  fr.a_rank = rank(m.a().at(v));
  fr.b_rank = rank(m.b().at(v));
  fr.middle_dim = m.w() - fr.a_rank - fr.b_rank;
  return fr;
}

template <ExactField F>
bool is_exact_fiber(const MonadData<F>& m, const Point<F>& v) {
  auto fr = fiberwise_exact(m, v);
  return fr.a_rank == m.h_left() && fr.b_rank == m.h_right();
}

template <ExactField F>
Matrix<F> symplectic_fiber_form(const MonadData<F>& m, const Point<F>& v) {
  if (!m.q()) throw PreconditionViolation("symplectic_fiber_form needs q");
  if (!is_exact_fiber(m, v)) throw NotExactFiber("monad fibre is not exact at the given point");
  Matrix<F> k = kernel(m.b().at(v));
  Matrix<F> g = k.transpose() * *m.q() * k;
  auto e = row_echelon(g);
  Matrix<F> form = g.select(e.pivots, e.pivots);
  const std::size_t expect = m.w() - m.h_left() - m.h_right();
  ensure(form.rows() == expect && form.is_skew() && rank(form) == expect,
         "symplectic_fiber_form: induced form is degenerate");
  return form;
}

struct TwistSections {
  std::size_t h0 = 0;
  std::size_t ker_b = 0;
  bool a_injective = false;
};

template <ExactField F>
TwistSections h0_twist_detail(const MonadData<F>& m, int k) {
  TwistSections ts;
  if (k < 0) {
    ts.a_injective = true;
    return ts;
  }
  Matrix<F> bk = multiplication_map(m.b(), k);
  ts.ker_b = bk.cols() - rank(bk);
  std::size_t im_a = 0;
  if (k >= 1) {
    Matrix<F> ak = multiplication_map(m.a(), k - 1);
    im_a = rank(ak);
    ts.a_injective = im_a == ak.cols();
  } else {
    ts.a_injective = true;
  }
  ts.h0 = ts.ker_b - im_a;
  return ts;
}

/// h^0(E(k)) = dim ker b_k - dim im a_k (a_k checked injective).
template <ExactField F>
std::size_t h0_twist(const MonadData<F>& m, int k) {
  auto ts = h0_twist_detail(m, k);
  if (!ts.a_injective) throw PreconditionViolation("h0_twist: a is not injective on sections");
  return ts.h0;
}

/// chi(O(d)) on P^3.
constexpr long long chi_line(long long d) { return (d + 1) * (d + 2) * (d + 3) / 6; }

/// h^q(P^3, O(d)).
constexpr long long cohomology_table(long long d, int q) {
  if (q == 0) return d >= 0 ? chi_line(d) : 0;
  if (q == 3) return d <= -4 ? -chi_line(d) : 0;
  return 0;
}

template <ExactField F>
long long euler_characteristic(const MonadData<F>& m, long long k) {
  return static_cast<long long>(m.w()) * chi_line(k) - static_cast<long long>(m.h_left()) * chi_line(k - 1) -
         static_cast<long long>(m.h_right()) * chi_line(k + 1);
}

// ---------------------------------------------------------------------------
// Chern arithmetic in Z[h]/(h^4)

struct TruncatedSeries {
  std::array<long long, 4> c{1, 0, 0, 0};

  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    TruncatedSeries r{{0, 0, 0, 0}};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; i + j < 4; ++j) r.c[i + j] += a.c[i] * b.c[j];
    return r;
  }
  TruncatedSeries inverse() const {
    if (c[0] != 1 && c[0] != -1) throw PreconditionViolation("series with non-invertible constant term");
    TruncatedSeries r{{c[0], 0, 0, 0}};  // 1/c0 = c0 for c0 = +-1
    for (int k = 1; k < 4; ++k) {
      long long s = 0;
      for (int j = 1; j <= k; ++j) s += c[j] * r.c[k - j];
      r.c[k] = -c[0] * s;
    }
    return r;
  }
  TruncatedSeries pow(long long e) const {
    TruncatedSeries base = e < 0 ? inverse() : *this;
    TruncatedSeries r;
    for (long long i = 0; i < (e < 0 ? -e : e); ++i) r = r * base;
    return r;
  }
  bool operator==(const TruncatedSeries&) const = default;
};

struct ChernClass {
  long long c1 = 0, c2 = 0, c3 = 0;
  bool operator==(const ChernClass&) const = default;
};

enum class BundleKind { Line, Omega1 };

/// `rank` copies of O(twist) or of Omega(1)(twist), entering the monad
/// alternating sum with `sign` (+1 middle, -1 outer terms).
struct ChernTerm {
  long long rank = 0;
  long long twist = 0;
  BundleKind kind = BundleKind::Line;
  int sign = 1;
};

inline TruncatedSeries chern_series(const ChernTerm& t) {
  TruncatedSeries line{{1, t.twist, 0, 0}};
  TruncatedSeries c = line;
  if (t.kind == BundleKind::Omega1)
    // 0 -> Omega(1)(t) -> V^v (x) O(t) -> O(1+t) -> 0
    c = line.pow(4) * TruncatedSeries{{1, 1 + t.twist, 0, 0}}.inverse();
  return c.pow(t.rank * t.sign);
}

inline ChernClass chern_of_terms(const std::vector<ChernTerm>& terms) {
  TruncatedSeries s;
  for (const auto& t : terms) s = s * chern_series(t);
  return {s.c[1], s.c[2], s.c[3]};
}

inline long long rank_of_terms(const std::vector<ChernTerm>& terms) {
  long long r = 0;
  for (const auto& t : terms) r += t.sign * t.rank * (t.kind == BundleKind::Line ? 1 : 3);
  return r;
}

/// chi(E(k)) by additivity over the terms.
inline long long euler_of_terms(const std::vector<ChernTerm>& terms, long long k) {
  long long chi = 0;
  for (const auto& t : terms) {
    long long one = t.kind == BundleKind::Line ? chi_line(t.twist + k)
                                               : 4 * chi_line(t.twist + k) - chi_line(t.twist + k + 1);
    chi += t.sign * t.rank * one;
  }
  return chi;
}

inline std::vector<ChernTerm> monad_terms(std::size_t h_left, std::size_t w, std::size_t h_right) {
  return {{static_cast<long long>(h_left), -1, BundleKind::Line, -1},
          {static_cast<long long>(w), 0, BundleKind::Line, 1},
          {static_cast<long long>(h_right), 1, BundleKind::Line, -1}};
}

inline ChernClass chern_of_monad(std::size_t h_left, std::size_t w, std::size_t h_right) {
  return chern_of_terms(monad_terms(h_left, w, h_right));
}

template <ExactField F>
ChernClass chern_of_monad(const MonadData<F>& m) {
  return chern_of_monad(m.h_left(), m.w(), m.h_right());
}

/// Terms of E_2(z): H_i^v (x) Omega(1) minus H_i(-1), minus H_{i-1}(-1) and
/// H_{i-1}^v(1).
inline std::vector<ChernTerm> thooft_terms(std::size_t i) {
  const long long k = static_cast<long long>(i);
  return {{k, 0, BundleKind::Omega1, 1},
          {k, -1, BundleKind::Line, -1},
          {k - 1, -1, BundleKind::Line, -1},
          {k - 1, 1, BundleKind::Line, -1}};
}

/// Riemann-Roch on P^3 for c1 = c3 = 0: chi(E(k)) = R chi(O(k)) - c2 (k+2).
constexpr long long riemann_roch_chi(long long rank, long long c2, long long k) {
  return rank * chi_line(k) - c2 * (k + 2);
}

}  // namespace instanton

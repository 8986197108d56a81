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

// 't Hooft construction from a point z = (B, phi) of Z_i.
//
// B is the inverse-side form on H_i^v (x) V^v; its inverse B_dir is a hyperweb
// and induces H_i (x) O(-1) -> H_i^v (x) Omega(1), h (x) v -> B_dir(h (x) v).
// E_2i is the cokernel, with symplectic form xi^T B eta on
// (H_i^v (x) v-perp) / B_dir(H_i (x) v). Global sections of E_2i(1) are
// (H_i^v (x) Lambda^2 V^v) / B_dir(H_i).
//
// A 4i x 4i matrix X with antisymmetric 4x4 blocks gives, for each column
// index h, the section v -> X (h (x) v) with Lambda^2 coordinates
// (h', (c,d)) -> X[(h', d), (h, c)].

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "instanton/charts.hpp"
#include "instanton/forge.hpp"
#include "instanton/monad.hpp"

namespace instanton {

/// 6i x (number of cols) matrix of the sections X(h (x) .) for h in cols.
template <ExactField F>
Matrix<F> section_columns(const Matrix<F>& x, std::size_t i, const std::vector<std::size_t>& cols) {
  Matrix<F> s(x.field(), 6 * i, cols.size());
  for (std::size_t t = 0; t < cols.size(); ++t)
    for (std::size_t hp = 0; hp < i; ++hp)
      for (std::size_t k = 0; k < 6; ++k) {
        auto [c, d] = kWedgePairs[k];
        s(6 * hp + k, t) = x(4 * hp + d, 4 * cols[t] + c);
      }
  return s;
}

inline std::vector<std::size_t> iota(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t k = 0; k < n; ++k) v[k] = k;
  return v;
}

template <ExactField F>
struct SectionSpace {
  std::size_t i = 0;
  std::size_t koszul_dim = 0;      // dim ker(V^v (x) V^v -> S^2 V^v), expected 6
  std::size_t h0_E2i_1 = 0;        // dim of sections of E_2i(1)
  bool section_map_injective = false;
  bool flagged = false;            // value differs from 5i
  Matrix<F> bdir_sections;         // 6i x i
};

/// Multiplication V^v (x) V^v -> S^2 V^v, 10 x 16 (column 4a + b).
template <ExactField F>
Matrix<F> koszul_multiplication(const F& f) {
  auto s2 = monomials(2);
  Matrix<F> m(f, s2.size(), 16);
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b) {
      std::array<int, 4> e{0, 0, 0, 0};
      ++e[a];
      ++e[b];
      m(monomial_index(s2, e), 4 * a + b) += f.one();
    }
  return m;
}

/// Sections of E_2i(1) for the bundle map B_dir.
template <ExactField F>
SectionSpace<F> thooft_section_space(std::size_t i, const Hyperweb<F>& bdir) {
  if (bdir.n() != i) throw ShapeError("thooft_section_space: bundle map is not on H_i");
  SectionSpace<F> sp;
  sp.i = i;
  const auto& f = bdir.field();
  // H^0(Omega(2)) in the Koszul model, then check each B_dir section lies in it.
  Matrix<F> kos = koszul_multiplication(f);
  Matrix<F> kos_ker = kernel(kos);
  sp.koszul_dim = kos_ker.cols();
  const std::vector<std::size_t> all = iota(i);
  for (std::size_t h = 0; h < i; ++h)
    for (std::size_t hp = 0; hp < i; ++hp) {
      Matrix<F> t(f, 16, 1);
      for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = 0; b < 4; ++b) t(4 * a + b, 0) = bdir.flat()(4 * hp + b, 4 * h + a);
      ensure((kos * t).is_zero(), "section of H^v (x) Omega(2) violates the Koszul condition");
    }
  sp.bdir_sections = section_columns(bdir.flat(), i, all);
  std::size_t rk = rank(sp.bdir_sections);
  sp.section_map_injective = rk == i;
  sp.h0_E2i_1 = i * sp.koszul_dim - rk;
  sp.flagged = sp.h0_E2i_1 != 5 * i;
  return sp;
}

template <ExactField F>
struct ThooftInput {
  std::size_t i = 0;
  Matrix<F> b;                   // inverse side, 4i x 4i skew invertible
  TwoFormMatrix<F> phi;          // General, i x i
  std::vector<std::size_t> j;    // H_{i-1} -> H_i as an index subset

  /// Throws unless the shapes fit, B_dir = B^{-1} is a hyperweb and z is in Z_i.
  Hyperweb<F> validate() const {
    if (i < 1) throw PreconditionViolation("'t Hooft input needs i >= 1");
    if (b.rows() != 4 * i || phi.rows() != i || phi.cols() != i) throw ShapeError("'t Hooft input shapes");
    if (j.size() != i - 1) throw ShapeError("j must select i-1 indices");
    for (std::size_t s = 0; s < j.size(); ++s)
      if (j[s] >= i || (s > 0 && j[s] <= j[s - 1])) throw ShapeError("j must be strictly increasing in range");
    if (!z_membership(b, phi)) throw MembershipFailure("(B, phi) is not in Z_i");
    Matrix<F> bdir = inverse(b);
    try {
      return Hyperweb<F>::from_flat(bdir);
    } catch (const Error&) {
      throw MembershipFailure("B^{-1} is not of hyperweb shape");
    }
  }
};

template <ExactField F>
struct ThooftResult {
  std::size_t i = 0;
  ChernClass chern;
  long long rank = 0;
  std::size_t h0_E2_1 = 0;
  std::size_t h0_E2i_1 = 0;
  std::size_t h0_K_1 = 0;
  std::size_t alpha_section_rank = 0;
  std::size_t points_checked = 0;
  std::string fiber_strategy;
  bool euler_crosscheck = false;   // additive chi agrees with Riemann-Roch for k in [-3, 3]
  bool h0_claim_holds = false;     // h0_E2_1 >= 1
};

/// Columns (4i x (2i-1)) spanning B_dir(H_i (x) v) + phi(j(H_{i-1}) (x) v).
template <ExactField F>
Matrix<F> thooft_fiber_matrix(const Matrix<F>& bdir, const Matrix<F>& phi, const std::vector<std::size_t>& j,
                              std::size_t i, const Point<F>& v) {
  const auto& f = bdir.field();
  Matrix<F> m(f, 4 * i, i + j.size());
  for (std::size_t a = 0; a < 4; ++a) {
    if (is_zero(v[a])) continue;
    for (std::size_t row = 0; row < 4 * i; ++row) {
      for (std::size_t h = 0; h < i; ++h) m(row, h) += v[a] * bdir(row, 4 * h + a);
      for (std::size_t s = 0; s < j.size(); ++s) m(row, i + s) += v[a] * phi(row, 4 * j[s] + a);
    }
  }
  return m;
}

/// S^2 V^v-valued pairing sym(u^T B s): 10 coordinates for each pair of
/// V-linear maps given by their 4 columns.
template <ExactField F>
std::vector<typename F::value_type> quadratic_pairing(const Matrix<F>& bu, const Matrix<F>& s,
                                                      const std::vector<std::array<int, 4>>& s2) {
  // bu: rows a -> (B u_a)^T as 4 x dim; s: dim x 4
  Matrix<F> g = bu * s;  // g(a, a') = u_a^T B s_a'
  std::vector<typename F::value_type> out(s2.size(), g.field().zero());
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t ap = 0; ap < 4; ++ap) {
      std::array<int, 4> e{0, 0, 0, 0};
      ++e[a];
      ++e[ap];
      out[monomial_index(s2, e)] += g(a, ap);
    }
  return out;
}

template <ExactField F>
ThooftResult<F> thooft_monad(const ThooftInput<F>& z, const CheckStrategy& strategy) {
  Hyperweb<F> bdir = z.validate();
  const std::size_t i = z.i;
  const auto& f = bdir.field();
  ThooftResult<F> res;
  res.i = i;
  auto terms = thooft_terms(i);
  res.chern = chern_of_terms(terms);
  res.rank = rank_of_terms(terms);
  res.euler_crosscheck = true;
  for (long long k = -3; k <= 3; ++k)
    res.euler_crosscheck =
        res.euler_crosscheck && euler_of_terms(terms, k) == riemann_roch_chi(res.rank, res.chern.c2, k);

  auto sp = thooft_section_space(i, bdir);
  res.h0_E2i_1 = sp.h0_E2i_1;
  if (!sp.section_map_injective) throw InvariantBroken("invertible B_dir with non-injective section map");

  Matrix<F> phi = flatten(z.phi);

  // Fibre condition: s_z o j injective modulo B_dir on every tested fibre.
  constexpr bool is_fp = std::is_same_v<F, PrimeField>;
  std::vector<Point<F>> pts;
  if constexpr (is_fp) {
    if (strategy.kind == CheckStrategy::Kind::ExhaustiveFp) pts = projective_points(f);
  } else {
    if (strategy.kind == CheckStrategy::Kind::ExhaustiveFp)
      throw StrategyMismatch("exhaustive enumeration needs a prime field");
  }
  if (pts.empty()) {
    Rng rng(strategy.seed);
    for (std::size_t s = 0; s < strategy.samples; ++s) pts.push_back(random_point(f, rng));
  }
  res.fiber_strategy = strategy.to_string();
  for (const auto& v : pts) {
    ++res.points_checked;
    std::size_t rk = rank(thooft_fiber_matrix(bdir.flat(), phi, z.j, i, v));
    if (rk != 2 * i - 1) {
      std::string w = "[";
      for (std::size_t a = 0; a < 4; ++a) w += (a ? "," : "") + to_string(v[a]);
      throw DegenerateThooftMonad("s_z o j is not injective on the fibre: rank " + std::to_string(rk) +
                                      " < " + std::to_string(2 * i - 1),
                                  w + "]");
    }
  }

  // Section-level right map: H^v (x) Lambda^2 -> H_{i-1}^v (x) S^2 V^v.
  auto s2 = monomials(2);
  const std::size_t dim = 4 * i;
  Matrix<F> beta(f, 10 * z.j.size(), 6 * i);
  for (std::size_t s = 0; s < z.j.size(); ++s) {
    Matrix<F> u = phi.select(iota(dim), {4 * z.j[s], 4 * z.j[s] + 1, 4 * z.j[s] + 2, 4 * z.j[s] + 3});
    Matrix<F> bu = u.transpose() * z.b;  // 4 x dim
    for (std::size_t hp = 0; hp < i; ++hp)
      for (std::size_t k = 0; k < 6; ++k) {
        // sigma = h'* (x) (x_c ^ x_d); sigma(e_a) has coordinate (h', b) = (x_c ^ x_d)(e_a, e_b)
        Matrix<F> sig(f, dim, 4);
        auto [c, d] = kWedgePairs[k];
        sig(4 * hp + d, c) = f.one();
        sig(4 * hp + c, d) = -f.one();
        auto q = quadratic_pairing(bu, sig, s2);
        for (std::size_t t = 0; t < 10; ++t) beta(10 * s + t, 6 * hp + k) = q[t];
      }
  }
  std::size_t nullity_beta = 6 * i - rank(beta);
  ensure((beta * sp.bdir_sections).is_zero(), "B_dir sections are not in the kernel of the right map");
  const std::size_t rk_bdir = i;
  res.h0_K_1 = nullity_beta - rk_bdir;
  Matrix<F> alpha = section_columns(phi, i, z.j);
  ensure((beta * alpha).is_zero(), "phi o j sections are not in the kernel of the right map");
  res.alpha_section_rank = rank(sp.bdir_sections.hcat(alpha)) - rk_bdir;
  ensure(res.alpha_section_rank == z.j.size(), "alpha is not injective on sections");
  res.h0_E2_1 = res.h0_K_1 - res.alpha_section_rank;
  res.h0_claim_holds = res.h0_E2_1 >= 1;
  if constexpr (is_fp)
    if (strategy.kind == CheckStrategy::Kind::ExhaustiveFp)
      ensure(res.h0_claim_holds, "h0(E2(z)(1)) vanishes on an exhaustively verified monad");
  return res;
}

template <ExactField F>
struct ThooftRun {
  ThooftInput<F> input;
  ThooftResult<F> result;
  std::size_t z_points_tried = 0;    // isotropic Z-points drawn
  std::size_t degenerate = 0;        // of those, rejected by the fibre check
  std::string last_witness;
};

/// Draws isotropic Z-points (seed, seed+1, ...) until M(z) passes the fibre
/// check under `strategy`. Isotropic points often degenerate at a few points of
/// P^3, so a single draw is not enough.
template <ExactField F>
ThooftRun<F> gen_thooft_input(const F& f, std::size_t i, const GeneratorSeed& gs, const CheckStrategy& strategy,
                              std::size_t max_points = 200) {
  ThooftRun<F> run;
  for (std::size_t k = 0; k < max_points; ++k) {
    auto zp = gen_z_point(f, i, ZMode::Isotropic, {gs.seed + k, gs.attempt_limit});
    ++run.z_points_tried;
    ThooftInput<F> z{i, zp.b, zp.phi, iota(i - 1)};
    try {
      run.result = thooft_monad(z, strategy);
      run.input = std::move(z);
      return run;
    } catch (const DegenerateThooftMonad& e) {
      ++run.degenerate;
      run.last_witness = e.witness();
    }
  }
  throw GeneratorFailed("gen_thooft_input: every Z-point degenerated",
                        std::to_string(run.degenerate) + " degenerate, last witness " + run.last_witness);
}

}  // namespace instanton

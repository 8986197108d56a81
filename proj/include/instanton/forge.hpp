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

// Seeded generators: charge-1 seeds, block sums, one-Pfaffian rank drops,
// tame hyperwebs through the block chart, the rank-(4n+2) restriction
// pipelines, points of Z_i and the scaling curve on fine blocks.
//
// Every generator re-runs the independent checks on its output.

#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "instanton/charts.hpp"
#include "instanton/monad.hpp"
#include "instanton/random.hpp"

namespace instanton {

struct GeneratorSeed {
  std::uint64_t seed = 1;
  std::size_t attempt_limit = 100;
};

template <ExactField F>
CheckStrategy default_strategy(std::uint64_t seed) {
  if constexpr (std::is_same_v<F, PrimeField>) {
    CheckStrategy s = CheckStrategy::exhaustive();
    s.seed = seed;
    return s;
  } else {
    return CheckStrategy::sampled(64, {7, 11}, seed);
  }
}

template <ExactField F>
Hyperweb<F> hyperweb_from_form(const F& f, const TwoForm<F>& w) {
  TwoFormMatrix<F> t(f, 1, 1, SymmetryTag::Symmetric);
  t.set(0, 0, w);
  return Hyperweb<F>(std::move(t));
}

/// Nondegenerate 2-form on V. A given omega is tried first; degenerate
/// candidates are resampled.
template <ExactField F>
Hyperweb<F> gen_charge1(const F& f, const std::optional<TwoForm<F>>& omega, const GeneratorSeed& gs) {
  Rng rng(gs.seed);
  std::ostringstream log;
  for (std::size_t att = 0; att < gs.attempt_limit; ++att) {
    TwoForm<F> w = zero_form(f);
    if (att == 0 && omega) {
      w = *omega;
    } else {
      for (auto& x : w) x = random_element(f, rng);
    }
    auto a = hyperweb_from_form(f, w);
    std::size_t rk = rank(a.flat());
    if (rk == 4) return a;
    log << "attempt " << att << ": rank " << rk << "\n";
  }
  throw GeneratorFailed("gen_charge1: attempt limit exhausted", log.str());
}

template <ExactField F>
Hyperweb<F> gen_blocksum(const std::vector<Hyperweb<F>>& parts) {
  std::vector<TwoFormMatrix<F>> bodies;
  for (const auto& p : parts) bodies.push_back(p.body());
  return Hyperweb<F>(direct_sum(bodies));
}

template <ExactField F>
Hyperweb<F> random_hyperweb(const F& f, std::size_t n, Rng& rng) {
  return Hyperweb<F>(random_two_form_matrix(f, n, n, SymmetryTag::Symmetric, rng));
}

/// Random element of S^0_n (invertible flat form).
template <ExactField F>
Hyperweb<F> random_s0(const F& f, std::size_t n, Rng& rng) {
  for (;;) {
    auto a = random_hyperweb(f, n, rng);
    if (rank(a.flat()) == 4 * n) return a;
  }
}

namespace detail {

/// Roots of a t^2 + b t + c in the field, if any.
inline std::vector<Fp> quadratic_roots(const PrimeField& f, const Fp& a, const Fp& b, const Fp& c) {
  std::vector<Fp> roots;
  for (std::uint32_t x = 0; x < f.p; ++x) {
    Fp t(x, f.p);
    if (is_zero(a * t * t + b * t + c)) roots.push_back(t);
  }
  return roots;
}

inline std::vector<Rational> quadratic_roots(const RationalField&, const Rational& a, const Rational& b,
                                             const Rational& c) {
  std::vector<Rational> roots;
  if (is_zero(a)) {
    if (!is_zero(b)) roots.push_back(Rational(-c / b));
    return roots;
  }
  Rational disc = b * b - 4 * a * c;
  if (sgn(disc) < 0) return roots;
  mpz_class num = disc.get_num(), den = disc.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t())) return roots;
  mpz_class sn, sd;
  mpz_sqrt(sn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(sd.get_mpz_t(), den.get_mpz_t());
  Rational s(sn, sd);
  s.canonicalize();
  roots.push_back(Rational((-b + s) / (2 * a)));
  if (!is_zero(s)) roots.push_back(Rational((-b - s) / (2 * a)));
  return roots;
}

}  // namespace detail

/// Hyperweb on H_n with rank 4n-2: one coefficient is solved from pf = 0.
template <ExactField F>
Hyperweb<F> gen_rank_drop(const F& f, std::size_t n, std::size_t target_rank, const GeneratorSeed& gs) {
  if (n < 1) throw PreconditionViolation("gen_rank_drop needs n >= 1");
  if (target_rank < 4 * n - 2) throw UnsupportedStratum("only the single-Pfaffian stratum rank 4n-2 is supported");
  if (target_rank != 4 * n - 2) throw PreconditionViolation("target rank must be 4n-2");
  Rng rng(gs.seed);
  std::ostringstream log;
  using V = typename F::value_type;
  for (std::size_t att = 0; att < gs.attempt_limit; ++att) {
    TwoFormMatrix<F> body = random_two_form_matrix(f, n, n, SymmetryTag::Symmetric, rng);
    std::size_t i = draw_below(rng, n), j = i + draw_below(rng, n - i), k = draw_below(rng, 6);
    auto pf_at = [&](long long t) {
      TwoFormMatrix<F> b = body;
      b.set_component(i, j, k, f.from_int(t));
      return pfaffian(flatten(b));
    };
    V p0 = pf_at(0), p1 = pf_at(1), pm = pf_at(-1), p2 = pf_at(2);
    // p(t) = a t^2 + b t + c
    V half = inverse(f.from_int(2));
    V c = p0;
    V a = half * (p1 + pm) - c;
    V b = half * (p1 - pm);
    ensure(a * f.from_int(4) + b * f.from_int(2) + c == p2, "pfaffian is not quadratic in one coefficient");
    auto roots = detail::quadratic_roots(f, a, b, c);
    if (roots.empty() || (is_zero(a) && is_zero(b))) {
      log << "attempt " << att << ": no root for coefficient (" << i << "," << j << "," << k << ")\n";
      continue;
    }
    body.set_component(i, j, k, roots[draw_below(rng, roots.size())]);
    Hyperweb<F> out(body);
    std::size_t rk = rank(out.flat());
    ensure(is_zero(pfaffian(out.flat())), "gen_rank_drop: root does not kill the pfaffian");
    if (rk == target_rank) return out;
    log << "attempt " << att << ": rank " << rk << " after solving\n";
  }
  throw GeneratorFailed("gen_rank_drop: attempt limit exhausted", log.str());
}

// ---------------------------------------------------------------------------
// Columns c_0..c_{m-1} in H_n^v (x) Lambda^2 V^v with sym(c_s^T B^{-1} c_t) = 0
// for all s, t, i.e. C^T B^{-1} C in S_m. Coordinates: (h', k) at 6h' + k,
// matching flatten: the 4x4 block of column t at row h' is the 2-form.

template <ExactField F>
struct IsotropicSolver {
  F f;
  std::size_t n;
  Matrix<F> binv;     // 4n x 4n
  Matrix<F> trivial;  // 6n x n, columns B_dir(h (x) .), always in the radical

  IsotropicSolver(const Hyperweb<F>& bdir) : f(bdir.field()), n(bdir.n()), binv(inverse(bdir.flat())) {
    trivial = Matrix<F>(f, 6 * n, n);
    for (std::size_t h = 0; h < n; ++h)
      for (std::size_t hp = 0; hp < n; ++hp)
        for (std::size_t k = 0; k < 6; ++k) trivial(6 * hp + k, h) = bdir.body().at(hp, h)[k];
  }

  Matrix<F> block(const Matrix<F>& col) const {
    Matrix<F> b(f, 4 * n, 4);
    for (std::size_t hp = 0; hp < n; ++hp)
      for (std::size_t k = 0; k < 6; ++k) {
        auto [c, d] = kWedgePairs[k];
        b(4 * hp + c, d) = col(6 * hp + k, 0);
        b(4 * hp + d, c) = -col(6 * hp + k, 0);
      }
    return b;
  }

  static std::vector<typename F::value_type> sym10(const Matrix<F>& y) {
    std::vector<typename F::value_type> out;
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = a; b < 4; ++b) out.push_back(a == b ? y(a, a) : y(a, b) + y(b, a));
    return out;
  }

  /// 10 x 6n matrix of y -> sym(x^T B^{-1} y).
  Matrix<F> constraint(const Matrix<F>& x) const {
    Matrix<F> p = block(x).transpose() * binv;  // 4 x 4n
    Matrix<F> m(f, 10, 6 * n);
    for (std::size_t hp = 0; hp < n; ++hp)
      for (std::size_t k = 0; k < 6; ++k) {
        auto [c, d] = kWedgePairs[k];
        Matrix<F> y(f, 4, 4);
        for (std::size_t a = 0; a < 4; ++a) {
          y(a, d) += p(a, 4 * hp + c);
          y(a, c) -= p(a, 4 * hp + d);
        }
        auto s = sym10(y);
        for (std::size_t t = 0; t < 10; ++t) m(t, 6 * hp + k) = s[t];
      }
    return m;
  }

  std::vector<typename F::value_type> pairing(const Matrix<F>& x, const Matrix<F>& y) const {
    return sym10(block(x).transpose() * binv * block(y));
  }

  /// Random vector of span(k) outside span(base); nullopt if span(k) = span(base).
  std::optional<Matrix<F>> fresh(const Matrix<F>& k, const Matrix<F>& base, Rng& rng) const {
    const std::size_t rb = rank(base);
    if (rank(base.hcat(k)) == rb) return std::nullopt;
    for (;;) {
      Matrix<F> v = random_combination(k, rng);
      if (rank(base.hcat(v)) > rb) return v;
    }
  }

  /// Completes `cols` by a pair (x, y) from W = K / base with sym(x^T B^{-1} y) = 0,
  /// searching the kernel of Lambda^2 W -> S^2 V^v for a decomposable element.
  std::optional<std::pair<Matrix<F>, Matrix<F>>> pair_completion(const Matrix<F>& k, const Matrix<F>& base,
                                                                 Rng& rng, std::size_t budget) const {
    // complement basis of span(base) inside span(k)
    std::vector<Matrix<F>> wb;
    Matrix<F> cur = base;
    std::size_t rc = rank(cur);
    for (std::size_t c = 0; c < k.cols(); ++c) {
      Matrix<F> cand = cur.hcat(k.col(c));
      std::size_t rn = rank(cand);
      if (rn > rc) {
        wb.push_back(k.col(c));
        cur = cand;
        rc = rn;
      }
    }
    const std::size_t w = wb.size();
    if (w < 2) return std::nullopt;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t a = 0; a < w; ++a)
      for (std::size_t b = a + 1; b < w; ++b) pairs.push_back({a, b});
    Matrix<F> beta(f, 10, pairs.size());
    for (std::size_t e = 0; e < pairs.size(); ++e) {
      auto s = pairing(wb[pairs[e].first], wb[pairs[e].second]);
      for (std::size_t t = 0; t < 10; ++t) beta(t, e) = s[t];
    }
    Matrix<F> ker = kernel(beta);
    if (ker.cols() == 0) return std::nullopt;
    auto try_vec = [&](const Matrix<F>& kv) -> std::optional<std::pair<Matrix<F>, Matrix<F>>> {
      Matrix<F> skew(f, w, w);
      for (std::size_t e = 0; e < pairs.size(); ++e) {
        skew(pairs[e].first, pairs[e].second) = kv(e, 0);
        skew(pairs[e].second, pairs[e].first) = -kv(e, 0);
      }
      if (rank(skew) != 2) return std::nullopt;
      // skew = (u v^T - v u^T) / skew(i, j) with u, v columns i, j
      std::size_t i = 0, j = 0;
      for (std::size_t a = 0; a < w && i == j; ++a)
        for (std::size_t b = a + 1; b < w; ++b)
          if (!is_zero(skew(a, b))) {
            i = a;
            j = b;
            break;
          }
      Matrix<F> u = skew.col(i), v = skew.col(j);
      Matrix<F> x(f, 6 * n, 1), y(f, 6 * n, 1);
      for (std::size_t a = 0; a < w; ++a) {
        x = x + u(a, 0) * wb[a];
        y = y + v(a, 0) * wb[a];
      }
      return std::make_pair(x, y);
    };
    if constexpr (std::is_same_v<F, PrimeField>) {
      double total = 1;
      for (std::size_t c = 0; c < ker.cols(); ++c) total *= f.p;
      if (total <= static_cast<double>(budget)) {
        std::size_t count = static_cast<std::size_t>(total);
        for (std::size_t code = 1; code < count; ++code) {
          Matrix<F> coeff(f, ker.cols(), 1);
          std::size_t rest = code;
          for (std::size_t c = 0; c < ker.cols(); ++c) {
            coeff(c, 0) = f.from_int(static_cast<long long>(rest % f.p));
            rest /= f.p;
          }
          if (auto r = try_vec(ker * coeff)) return r;
        }
        return std::nullopt;
      }
    }
    for (std::size_t s = 0; s < budget; ++s)
      if (auto r = try_vec(random_combination(ker, rng))) return r;
    return std::nullopt;
  }

  /// One randomized attempt at m columns, independent modulo the trivial part.
  std::optional<std::vector<Matrix<F>>> attempt(std::size_t m, Rng& rng, std::size_t pair_budget,
                                                std::string& why) const {
    std::vector<Matrix<F>> cols;
    Matrix<F> base = trivial;
    for (;;) {
      Matrix<F> c0 = random_matrix(f, 6 * n, 1, rng);
      if (rank(base.hcat(c0)) > rank(base)) {
        cols.push_back(c0);
        base = base.hcat(c0);
        break;
      }
    }
    Matrix<F> cons(f, 0, 6 * n);
    for (std::size_t t = 1; t < m; ++t) {
      cons = cons.vcat(constraint(cols.back()));
      Matrix<F> k = kernel(cons);
      if (t + 2 == m && m >= 3 && k.cols() - rank(base) <= 6) {
        auto pr = pair_completion(k, base, rng, pair_budget);
        if (!pr) {
          why = "no decomposable pair at step " + std::to_string(t);
          return std::nullopt;
        }
        cols.push_back(pr->first);
        cols.push_back(pr->second);
        return cols;
      }
      auto v = fresh(k, base, rng);
      if (!v) {
        why = "no new isotropic direction at step " + std::to_string(t);
        return std::nullopt;
      }
      cols.push_back(*v);
      base = base.hcat(*v);
    }
    return cols;
  }

  TwoFormMatrix<F> as_matrix(const std::vector<Matrix<F>>& cols) const {
    TwoFormMatrix<F> c(f, n, cols.size(), SymmetryTag::General);
    for (std::size_t t = 0; t < cols.size(); ++t)
      for (std::size_t hp = 0; hp < n; ++hp) {
        TwoForm<F> w = zero_form(f);
        for (std::size_t k = 0; k < 6; ++k) w[k] = cols[t](6 * hp + k, 0);
        c.set(hp, t, w);
      }
    return c;
  }
};

// ---------------------------------------------------------------------------
// Tame generator

/// (e0.e0) (x) (x0 ^ x1) on H_m, or (u.u) (x) (alpha ^ beta) when seeded.
template <ExactField F>
Matrix<F> default_kg_element(const F& f, std::size_t m, std::optional<std::uint64_t> variant = std::nullopt) {
  TwoFormMatrix<F> d(f, m, m, SymmetryTag::Symmetric);
  if (!variant) {
    d.set(0, 0, make_form(f, {1, 0, 0, 0, 0, 0}));
    return flatten(d);
  }
  Rng rng(*variant);
  for (;;) {
    Matrix<F> u = random_matrix(f, m, 1, rng);
    Matrix<F> al = random_matrix(f, 4, 1, rng), be = random_matrix(f, 4, 1, rng);
    TwoForm<F> w = zero_form(f);
    for (std::size_t k = 0; k < 6; ++k) {
      auto [c, dd] = kWedgePairs[k];
      w[k] = al(c, 0) * be(dd, 0) - al(dd, 0) * be(c, 0);
    }
    if (u.is_zero() || form_is_zero<F>(w)) continue;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i; j < m; ++j) {
        TwoForm<F> e = w;
        for (auto& x : e) x = u(i, 0) * u(j, 0) * x;
        d.set(i, j, e);
      }
    return flatten(d);
  }
}

template <ExactField F>
struct TameResult {
  Hyperweb<F> a;
  DecompositionXi xi;
  BlockTriple<F> triple;
  InstantonReport<F> report;
  std::size_t schur_rank = 0;
  KgClass kg = KgClass::Outside;
  std::size_t attempts = 0;        // outer attempts used
  std::size_t column_restarts = 0; // inner restarts of the column solve
  std::string log;
};

struct TameOptions {
  std::size_t column_restarts = 20000;
  std::size_t pair_budget = 4096;
  std::optional<std::uint64_t> d_variant;
  std::size_t tame_attempts = 50;
};

template <ExactField F>
TameResult<F> make_tame(const F& f, std::size_t n, std::size_t r, const GeneratorSeed& gs,
                        const TameOptions& opt = {}) {
  if (r < 2 || r + 1 > n) throw PreconditionViolation("make_tame needs 2 <= r <= n-1");
  const auto xi = DecompositionXi::standard(n, r);
  const std::size_t m = xi.m();
  Rng rng(gs.seed);
  std::ostringstream log;
  TameResult<F> res;
  for (std::size_t att = 1; att <= gs.attempt_limit; ++att) {
    res.attempts = att;
    Hyperweb<F> b = random_s0(f, n, rng);
    IsotropicSolver<F> solver(b);
    std::optional<std::vector<Matrix<F>>> cols;
    std::string why;
    for (std::size_t k = 0; k < opt.column_restarts && !cols; ++k) {
      ++res.column_restarts;
      cols = solver.attempt(m, rng, opt.pair_budget, why);
    }
    if (!cols) {
      log << "attempt " << att << ": column solve failed (" << why << ")\n";
      continue;
    }
    BlockTriple<F> t{b, solver.as_matrix(*cols), default_kg_element(f, m, opt.d_variant)};
    auto mem = xtilde_membership(t);
    if (!mem.ok) {
      log << "attempt " << att << ": triple not in X~\n";
      continue;
    }
    Hyperweb<F> a = f_nr_inverse(t, xi);
    CheckStrategy strat = default_strategy<F>(gs.seed + att);
    auto rep = check_instanton(a, r, strat);
    if (!rep.passed()) {
      log << "attempt " << att << ": checker rejected (rank " << rep.rank_value << ", fibre "
          << (rep.fiber.ok() ? "ok" : rep.fiber.reason) << ")\n";
      continue;
    }
    auto parts = block_decompose(a, xi);
    std::size_t srank = rank(schur_residual(parts.a1, parts.a2, parts.a3));
    KgClass kg = kg_membership(t.d);
    rep.tame = property_star_search(a, r, opt.tame_attempts, gs.seed + att);
    bool witness_ok = rep.tame.kind == TameStatus<F>::Kind::Yes && rep.tame.subset == xi.first;
    if (srank != 2 || kg != KgClass::InKGStar || !witness_ok) {
      log << "attempt " << att << ": schur rank " << srank << ", D " << to_string(kg) << ", witness "
          << (witness_ok ? "ok" : "missing") << "\n";
      continue;
    }
    res.a = std::move(a);
    res.xi = xi;
    res.triple = std::move(t);
    res.report = std::move(rep);
    res.schur_rank = srank;
    res.kg = kg;
    res.log = log.str();
    return res;
  }
  throw GeneratorFailed("make_tame: attempt limit exhausted", log.str());
}

// ---------------------------------------------------------------------------
// Restriction pipelines from MI_{2n,1}

template <ExactField F>
struct Pipeline2n1Result {
  Hyperweb<F> b;            // on H_{n+1}
  bool rank_equal = false;
  Matrix<F> zeta;           // 2n x 2n basis change; i_zeta = its first n+1 columns
  std::size_t attempts = 0;
  InstantonReport<F> report;
  bool monad_exact = false; // M_B fibrewise exact at the tested points
};

template <ExactField F>
Matrix<F> first_columns(const Matrix<F>& g, std::size_t k) {
  return g.block(0, 0, g.rows(), k);
}

/// B = restriction of A along the first n+1 columns of zeta.
template <ExactField F>
std::pair<Hyperweb<F>, bool> restrict_along_zeta(const Hyperweb<F>& a, const Matrix<F>& zeta) {
  const std::size_t N = a.n();
  if (N % 2 != 0) throw PreconditionViolation("MI_{2n,1} input must live on an even-dimensional H");
  const std::size_t n = N / 2;
  Hyperweb<F> b(pull_back(a.body(), first_columns(zeta, n + 1)));
  const std::size_t ra = rank(a.flat()), rb = rank(b.flat());
  ensure(rb <= ra, "restriction raised the rank");
  return {b, ra == 4 * n + 2 && rb == ra};
}

template <ExactField F>
Pipeline2n1Result<F> pipeline_2n1(const Hyperweb<F>& a, const GeneratorSeed& gs) {
  const std::size_t N = a.n();
  if (N % 2 != 0 || N < 2) throw PreconditionViolation("pipeline_2n1 needs A on H_2n");
  const std::size_t n = N / 2;
  const auto strat = default_strategy<F>(gs.seed);
  auto rep_a = check_instanton(a, 1, strat);
  if (!rep_a.passed()) throw PreconditionViolation("pipeline_2n1: A does not pass check_instanton(2n, 1)");
  auto w = present(a);
  auto ma = monad_from_presentation(w, N);
  Rng rng(gs.seed);
  Pipeline2n1Result<F> res;
  for (std::size_t att = 1; att <= gs.attempt_limit; ++att) {
    res.attempts = att;
    Matrix<F> g = random_invertible(a.field(), N, rng);
    auto [b, eq] = restrict_along_zeta(a, g);
    if (!eq) continue;
    res.b = b;
    res.rank_equal = true;
    res.zeta = g;
    res.report = check_instanton(b, n, strat);
    // M_B: left map a_A o i_zeta on the same W_A.
    auto mb = restrict_monad(ma, first_columns(g, n + 1));
    res.monad_exact = true;
    if constexpr (std::is_same_v<F, PrimeField>) {
      for (const auto& v : projective_points(a.field()))
        if (!is_exact_fiber(mb, v)) {
          res.monad_exact = false;
          break;
        }
    } else {
      Rng prng(gs.seed);
      for (std::size_t s = 0; s < 64; ++s)
        if (!is_exact_fiber(mb, random_point(a.field(), prng))) {
          res.monad_exact = false;
          break;
        }
    }
    return res;
  }
  throw GeneratorFailed("pipeline_2n1: every sampled zeta dropped the rank", "");
}

template <ExactField F>
struct PipelineTauResult {
  Hyperweb<F> a_tau;          // on H_{2n-r+1}
  Matrix<F> tau;              // 2n x (2n-r+1)
  InstantonReport<F> report;
  ChernClass chern;
  std::size_t rank_value = 0;
  bool rank_ok = false;       // rank = 4n+2
};

/// Restriction along tau after checking im(tau) contains im(i_zeta).
template <ExactField F>
Hyperweb<F> restrict_along_tau(const Hyperweb<F>& a, const Matrix<F>& i_zeta, const Matrix<F>& tau) {
  if (tau.rows() != a.n() || i_zeta.rows() != a.n()) throw ShapeError("tau / i_zeta have the wrong target");
  const std::size_t rt = rank(tau);
  if (rt != tau.cols()) throw PreconditionViolation("tau is not a monomorphism");
  if (rank(tau.hcat(i_zeta)) != rt) throw PreconditionViolation("im(tau) does not contain im(i_zeta)");
  return Hyperweb<F>(pull_back(a.body(), tau));
}

template <ExactField F>
PipelineTauResult<F> pipeline_tau(const Hyperweb<F>& a, const Matrix<F>& zeta, std::size_t r, const GeneratorSeed& gs) {
  const std::size_t N = a.n();
  if (N % 2 != 0) throw PreconditionViolation("pipeline_tau needs A on H_2n");
  const std::size_t n = N / 2;
  if (r < 2 || r + 1 > n) throw PreconditionViolation("pipeline_tau needs 2 <= r <= n-1");
  auto [b, eq] = restrict_along_zeta(a, zeta);
  if (!eq) throw PreconditionViolation("pipeline_tau: (A, zeta) does not satisfy rank(B) = rank(A) = 4n+2");
  Rng rng(gs.seed);
  const std::size_t dim = 2 * n - r + 1;
  // coordinates (zeta basis): 0..n plus a random (n-r)-subset of the rest
  auto extra = random_subset(N - (n + 1), n - r, rng);
  std::vector<std::size_t> sel;
  for (std::size_t k = 0; k <= n; ++k) sel.push_back(k);
  for (auto e : extra) sel.push_back(n + 1 + e);
  Matrix<F> e(a.field(), N, dim);
  for (std::size_t c = 0; c < dim; ++c) e(sel[c], c) = a.field().one();
  Matrix<F> tau = zeta * e * random_invertible(a.field(), dim, rng);
  PipelineTauResult<F> res;
  res.tau = tau;
  res.a_tau = restrict_along_tau(a, first_columns(zeta, n + 1), tau);
  res.rank_value = rank(res.a_tau.flat());
  res.rank_ok = res.rank_value == 4 * n + 2;
  res.report = check_instanton(res.a_tau, r, default_strategy<F>(gs.seed));
  res.chern = chern_of_monad(dim, 4 * n + 2, dim);
  return res;
}

// ---------------------------------------------------------------------------
// Points of Z_i

enum class ZMode { ZeroPhi, InverseTrick, RandomReject, Isotropic };

inline const char* to_string(ZMode m) {
  switch (m) {
    case ZMode::ZeroPhi: return "zero_phi";
    case ZMode::InverseTrick: return "inverse_trick";
    case ZMode::RandomReject: return "random_reject";
    default: return "isotropic";
  }
}

template <ExactField F>
struct ZPoint {
  Matrix<F> b;            // inverse side
  TwoFormMatrix<F> phi;   // General i x i
  std::size_t attempts = 0;
};

template <ExactField F>
TwoFormMatrix<F> as_general(const TwoFormMatrix<F>& s) {
  TwoFormMatrix<F> g(s.field(), s.rows(), s.cols(), SymmetryTag::General);
  for (std::size_t i = 0; i < s.rows(); ++i)
    for (std::size_t j = 0; j < s.cols(); ++j) g.set(i, j, s.at(i, j));
  return g;
}

/// A general pair: arbitrary invertible skew B and arbitrary phi.
template <ExactField F>
ZPoint<F> random_pair(const F& f, std::size_t i, Rng& rng) {
  for (;;) {
    Matrix<F> b = random_skew(f, 4 * i, rng);
    if (rank(b) == 4 * i)
      return {b, random_two_form_matrix(f, i, i, SymmetryTag::General, rng), 1};
  }
}

template <ExactField F>
ZPoint<F> gen_z_point(const F& f, std::size_t i, ZMode mode, const GeneratorSeed& gs, const TameOptions& opt = {}) {
  if (i < 1) throw PreconditionViolation("gen_z_point needs i >= 1");
  Rng rng(gs.seed);
  ZPoint<F> z;
  switch (mode) {
    case ZMode::ZeroPhi: {
      z.b = inverse(random_s0(f, i, rng).flat());
      z.phi = TwoFormMatrix<F>(f, i, i, SymmetryTag::General);
      z.attempts = 1;
      break;
    }
    case ZMode::InverseTrick: {
      auto phi0 = random_s0(f, i, rng);
      z.b = inverse(phi0.flat());
      z.phi = as_general(phi0.body());
      z.attempts = 1;
      break;
    }
    case ZMode::RandomReject: {
      for (std::size_t att = 1; att <= gs.attempt_limit; ++att) {
        auto p = random_pair(f, i, rng);
        if (z_membership(p.b, p.phi)) {
          p.attempts = att;
          return p;
        }
      }
      throw GeneratorFailed("gen_z_point(random_reject): no member among the samples",
                            std::to_string(gs.attempt_limit) + " general pairs rejected");
    }
    case ZMode::Isotropic: {
      std::string why;
      for (std::size_t att = 1; att <= gs.attempt_limit; ++att) {
        auto bdir = random_s0(f, i, rng);
        IsotropicSolver<F> solver(bdir);
        for (std::size_t k = 0; k < opt.column_restarts; ++k) {
          auto cols = solver.attempt(i, rng, opt.pair_budget, why);
          if (!cols) continue;
          z.b = solver.binv;
          z.phi = solver.as_matrix(*cols);
          z.attempts = (att - 1) * opt.column_restarts + k + 1;
          ensure(z_membership(z.b, z.phi), "isotropic Z-point is not in Z_i");
          return z;
        }
      }
      throw GeneratorFailed("gen_z_point(isotropic): attempt limit exhausted", why);
    }
  }
  ensure(z_membership(z.b, z.phi), "generated Z-point is not in Z_i");
  return z;
}

// ---------------------------------------------------------------------------
// Fine blocks

template <ExactField F>
TwoFormMatrix<F> scale(const TwoFormMatrix<F>& t, const typename F::value_type& s) {
  TwoFormMatrix<F> r = t;
  for (std::size_t i = 0; i < t.rows(); ++i)
    for (std::size_t j = 0; j < t.cols(); ++j) {
      TwoForm<F> w = t.at(i, j);
      for (auto& x : w) x = s * x;
      r.set(i, j, w);
    }
  return r;
}

/// t -> (B1, t^2 phi, t psi, t lambda, t^2 mu, t^4 D).
template <ExactField F>
FineBlocks<F> scaling_curve(const FineBlocks<F>& fb, const typename F::value_type& t) {
  using V = typename F::value_type;
  V t2 = t * t;
  V t4 = t2 * t2;
  return {fb.b1, scale(fb.phi, t2), scale(fb.psi, t), t * fb.lambda, t2 * fb.mu, t4 * fb.d};
}

template <ExactField F>
FineBlocks<F> random_fine_blocks(const F& f, std::size_t n, std::size_t r, Rng& rng) {
  const std::size_t m = n + 1 - r, k = r - 1;
  return {random_skew(f, 4 * m, rng),
          random_two_form_matrix(f, m, m, SymmetryTag::General, rng),
          random_two_form_matrix(f, k, m, SymmetryTag::General, rng),
          random_matrix(f, 4 * m, 4 * k, rng),
          random_skew(f, 4 * k, rng),
          random_skew(f, 4 * m, rng)};
}

}  // namespace instanton

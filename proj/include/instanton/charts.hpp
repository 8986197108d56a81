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

// Block charts on S_{2n-r+1}: the splitting H_{2n-r+1} = H_n (+) H_{n-r+1},
// the Schur residual whose rank-2 condition cuts out the tame locus, the
// KG* cone, fine blocks of the inverse-side form, and the sets Z_i.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "instanton/hyperweb.hpp"

namespace instanton {

struct DecompositionXi {
  std::size_t n = 0;
  std::size_t r = 0;
  std::vector<std::size_t> first;   // H_n part, size n
  std::vector<std::size_t> second;  // H_{n-r+1} part, size n-r+1

  std::size_t m() const { return n + 1 - r; }
  std::size_t total() const { return 2 * n + 1 - r; }

  static DecompositionXi standard(std::size_t n, std::size_t r) {
    DecompositionXi xi{n, r, {}, {}};
    xi.validate();
    for (std::size_t i = 0; i < n; ++i) xi.first.push_back(i);
    for (std::size_t i = n; i < xi.total(); ++i) xi.second.push_back(i);
    return xi;
  }

  /// Throws unless both parts have the right sizes and partition 0..N-1.
  void validate() const {
    if (r < 1 || r > n) throw PreconditionViolation("xi needs 1 <= r <= n (n-r+1 >= 1)");
    if (first.empty() && second.empty()) return;
    if (first.size() != n || second.size() != m()) throw ShapeError("xi part sizes do not match (n, r)");
    std::vector<int> seen(total(), 0);
    for (auto i : first) {
      if (i >= total()) throw ShapeError("xi index out of range");
      ++seen[i];
    }
    for (auto i : second) {
      if (i >= total()) throw ShapeError("xi index out of range");
      ++seen[i];
    }
    for (int s : seen)
      if (s != 1) throw ShapeError("xi parts are not a partition");
  }
};

inline std::vector<std::size_t> index4(const std::vector<std::size_t>& idx) {
  std::vector<std::size_t> out;
  for (auto i : idx)
    for (std::size_t a = 0; a < 4; ++a) out.push_back(4 * i + a);
  return out;
}

/// entry'(s,t) = entry(rows[s], cols[t]).
template <Field F>
TwoFormMatrix<F> select_entries(const TwoFormMatrix<F>& a, const std::vector<std::size_t>& rows,
                                const std::vector<std::size_t>& cols, SymmetryTag tag) {
  TwoFormMatrix<F> r(a.field(), rows.size(), cols.size(), tag);
  for (std::size_t s = 0; s < rows.size(); ++s)
    for (std::size_t t = (tag == SymmetryTag::Symmetric ? s : 0); t < cols.size(); ++t)
      r.set(s, t, a.at(rows[s], cols[t]));
  return r;
}

template <ExactField F>
struct BlockParts {
  Hyperweb<F> a1;
  TwoFormMatrix<F> a2;  // General, n x (n-r+1)
  Hyperweb<F> a3;
};

template <ExactField F>
BlockParts<F> block_decompose(const Hyperweb<F>& a, const DecompositionXi& xi) {
  xi.validate();
  if (a.n() != xi.total()) throw ShapeError("block_decompose: A lives on H_" + std::to_string(a.n()));
  return {Hyperweb<F>(select_entries(a.body(), xi.first, xi.first, SymmetryTag::Symmetric)),
          select_entries(a.body(), xi.first, xi.second, SymmetryTag::General),
          Hyperweb<F>(select_entries(a.body(), xi.second, xi.second, SymmetryTag::Symmetric))};
}

template <ExactField F>
Hyperweb<F> block_compose(const Hyperweb<F>& a1, const TwoFormMatrix<F>& a2, const Hyperweb<F>& a3,
                          const DecompositionXi& xi) {
  xi.validate();
  if (a1.n() != xi.n || a3.n() != xi.m() || a2.rows() != xi.n || a2.cols() != xi.m())
    throw ShapeError("block_compose: block shapes do not match xi");
  require_same_field(a1.field(), a3.field(), "block_compose");
  TwoFormMatrix<F> body(a1.field(), xi.total(), xi.total(), SymmetryTag::Symmetric);
  for (std::size_t s = 0; s < xi.n; ++s)
    for (std::size_t t = s; t < xi.n; ++t) body.set(xi.first[s], xi.first[t], a1.body().at(s, t));
  for (std::size_t s = 0; s < xi.m(); ++s)
    for (std::size_t t = s; t < xi.m(); ++t) body.set(xi.second[s], xi.second[t], a3.body().at(s, t));
  for (std::size_t s = 0; s < xi.n; ++s)
    for (std::size_t t = 0; t < xi.m(); ++t) body.set(xi.first[s], xi.second[t], a2.at(s, t));
  return Hyperweb<F>(std::move(body));
}

template <ExactField F>
Hyperweb<F> block_compose(const BlockParts<F>& p, const DecompositionXi& xi) {
  return block_compose(p.a1, p.a2, p.a3, xi);
}

template <ExactField F>
Matrix<F> inverse_of_invertible_block(const Hyperweb<F>& b) {
  try {
    return inverse(b.flat());
  } catch (const SingularMatrix&) {
    throw NotInS0("block on H_" + std::to_string(b.n()) + " is not invertible");
  }
}

/// flat(A2)^T flat(A1)^{-1} flat(A2) + flat(A3).
template <ExactField F>
Matrix<F> schur_residual(const Hyperweb<F>& a1, const TwoFormMatrix<F>& a2, const Hyperweb<F>& a3) {
  Matrix<F> c = flatten(a2);
  return c.transpose() * inverse_of_invertible_block(a1) * c + a3.flat();
}

enum class KgClass { Zero, InKGStar, Outside };

inline const char* to_string(KgClass k) {
  switch (k) {
    case KgClass::Zero: return "Zero";
    case KgClass::InKGStar: return "InKGStar";
    default: return "Outside";
  }
}

/// Rank classification of a skew form, cross-checked against the 4x4
/// principal Pfaffians (rank <= 2 iff all of them vanish).
template <ExactField F>
KgClass kg_membership(const Matrix<F>& d) {
  if (!d.is_square() || !d.is_skew()) throw ShapeError("kg_membership: input is not skew");
  const std::size_t rk = rank(d);
  const std::size_t N = d.rows();
  bool all_vanish = true;
  for (std::size_t i = 0; i < N && all_vanish; ++i)
    for (std::size_t j = i + 1; j < N && all_vanish; ++j)
      for (std::size_t k = j + 1; k < N && all_vanish; ++k)
        for (std::size_t l = k + 1; l < N; ++l) {
          typename F::value_type pf = d(i, j) * d(k, l) - d(i, k) * d(j, l) + d(i, l) * d(j, k);
          if (!is_zero(pf)) {
            all_vanish = false;
            break;
          }
        }
  ensure(all_vanish == (rk <= 2), "kg_membership: rank and Pluecker test disagree");
  if (rk == 0) return KgClass::Zero;
  return rk == 2 ? KgClass::InKGStar : KgClass::Outside;
}

template <ExactField F>
struct BlockTriple {
  Hyperweb<F> b;          // on H_n, invertible
  TwoFormMatrix<F> c;     // General, n x (n-r+1)
  Matrix<F> d;            // skew, 4(n-r+1) square

  friend bool operator==(const BlockTriple& x, const BlockTriple& y) {
    return x.b == y.b && x.c == y.c && x.d == y.d;
  }
};

template <ExactField F>
struct XtildeResult {
  bool ok = false;
  bool residual_in_s = false;
  KgClass kg = KgClass::Outside;
  Matrix<F> residual;           // D - C^T B^{-1} C
  std::optional<Hyperweb<F>> a3;
};

template <ExactField F>
XtildeResult<F> xtilde_membership(const BlockTriple<F>& t) {
  const std::size_t n = t.b.n(), m = t.c.cols();
  if (t.c.rows() != n || t.d.rows() != 4 * m || t.d.cols() != 4 * m)
    throw ShapeError("xtilde_membership: inconsistent triple shapes");
  if (!t.d.is_skew()) throw ShapeError("xtilde_membership: D is not skew");
  Matrix<F> c = flatten(t.c);
  XtildeResult<F> res;
  res.residual = t.d - c.transpose() * inverse_of_invertible_block(t.b) * c;
  auto split = s_membership(res.residual);
  res.residual_in_s = split.in_s;
  res.kg = kg_membership(t.d);
  res.ok = res.residual_in_s && res.kg == KgClass::InKGStar;
  if (res.residual_in_s) res.a3 = Hyperweb<F>(split.s_component);
  return res;
}

/// A -> (A1, A2, Schur residual).
template <ExactField F>
BlockTriple<F> f_nr(const Hyperweb<F>& a, const DecompositionXi& xi) {
  auto p = block_decompose(a, xi);
  Matrix<F> d = schur_residual(p.a1, p.a2, p.a3);
  return {p.a1, p.a2, std::move(d)};
}

template <ExactField F>
Hyperweb<F> f_nr_inverse(const BlockTriple<F>& t, const DecompositionXi& xi) {
  auto mem = xtilde_membership(t);
  if (!mem.ok)
    throw MembershipFailure(std::string("triple is not in X~: residual in S = ") +
                            (mem.residual_in_s ? "yes" : "no") + ", D class = " + to_string(mem.kg));
  return block_compose(t.b, t.c, *mem.a3, xi);
}

// ---------------------------------------------------------------------------
// Fine blocks of the inverse-side form.

struct HSplit {
  std::vector<std::size_t> first;   // H_{n-r+1} part
  std::vector<std::size_t> second;  // H_{r-1} part

  static HSplit standard(std::size_t n, std::size_t r) {
    if (r < 1 || r > n) throw PreconditionViolation("HSplit needs 1 <= r <= n");
    HSplit s;
    for (std::size_t i = 0; i < n + 1 - r; ++i) s.first.push_back(i);
    for (std::size_t i = n + 1 - r; i < n; ++i) s.second.push_back(i);
    return s;
  }
};

template <ExactField F>
struct FineBlocks {
  Matrix<F> b1;           // 4m x 4m skew
  TwoFormMatrix<F> phi;   // General, m x m
  TwoFormMatrix<F> psi;   // General, (r-1) x m
  Matrix<F> lambda;       // 4m x 4(r-1)
  Matrix<F> mu;           // 4(r-1) x 4(r-1) skew
  Matrix<F> d;            // 4m x 4m skew

  friend bool operator==(const FineBlocks& x, const FineBlocks& y) {
    return x.b1 == y.b1 && x.phi == y.phi && x.psi == y.psi && x.lambda == y.lambda && x.mu == y.mu &&
           x.d == y.d;
  }
};

/// Inverse-side form assembled in split order: [[B1, lambda], [-lambda^T, mu]].
template <ExactField F>
Matrix<F> fine_inverse_form(const FineBlocks<F>& fb) {
  const std::size_t a = fb.b1.rows(), b = fb.mu.rows();
  Matrix<F> m(fb.b1.field(), a + b, a + b);
  m.set_block(0, 0, fb.b1);
  m.set_block(0, a, fb.lambda);
  m.set_block(a, 0, -fb.lambda.transpose());
  m.set_block(a, a, fb.mu);
  return m;
}

/// C in split order: [phi; psi].
template <ExactField F>
Matrix<F> fine_c(const FineBlocks<F>& fb) {
  return flatten(fb.phi).vcat(flatten(fb.psi));
}

/// phi^T B1 phi + phi^T lambda psi - psi^T lambda^T phi + psi^T mu psi.
template <ExactField F>
Matrix<F> cdc_expansion(const FineBlocks<F>& fb) {
  Matrix<F> phi = flatten(fb.phi), psi = flatten(fb.psi);
  return phi.transpose() * fb.b1 * phi + phi.transpose() * fb.lambda * psi -
         psi.transpose() * fb.lambda.transpose() * phi + psi.transpose() * fb.mu * psi;
}

template <ExactField F>
bool cdc_identity_holds(const FineBlocks<F>& fb) {
  Matrix<F> c = fine_c(fb);
  return c.transpose() * fine_inverse_form(fb) * c == cdc_expansion(fb);
}

template <ExactField F>
FineBlocks<F> fine_decompose(const BlockTriple<F>& t, const HSplit& split) {
  const std::size_t n = t.b.n(), m = t.c.cols();
  if (split.first.size() != m || split.first.size() + split.second.size() != n)
    throw ShapeError("fine_decompose: split sizes do not match the triple");
  std::vector<std::size_t> all = split.first;
  all.insert(all.end(), split.second.begin(), split.second.end());
  {
    std::vector<int> seen(n, 0);
    for (auto i : all) {
      if (i >= n) throw ShapeError("fine_decompose: split index out of range");
      ++seen[i];
    }
    for (int s : seen)
      if (s != 1) throw ShapeError("fine_decompose: split is not a partition");
  }
  Matrix<F> binv = inverse_of_invertible_block(t.b);
  auto f4 = index4(split.first), s4 = index4(split.second);
  std::vector<std::size_t> c_cols(4 * m);
  for (std::size_t k = 0; k < 4 * m; ++k) c_cols[k] = k;
  Matrix<F> c = flatten(t.c);
  FineBlocks<F> fb{binv.select(f4, f4),
                   unflatten(c.select(f4, c_cols), m, m, SymmetryTag::General),
                   unflatten(c.select(s4, c_cols), split.second.size(), m, SymmetryTag::General),
                   binv.select(f4, s4),
                   binv.select(s4, s4),
                   t.d};
  ensure(c.transpose() * binv * c == cdc_expansion(fb), "fine_decompose: CDC identity failed");
  return fb;
}

template <ExactField F>
struct FineMembership {
  bool residual_in_s = false;
  KgClass kg = KgClass::Outside;
};

/// The X~ condition in fine coordinates: D - C^T B C in S (B inverse side).
template <ExactField F>
FineMembership<F> fine_membership(const FineBlocks<F>& fb) {
  Matrix<F> c = fine_c(fb);
  Matrix<F> r = fb.d - c.transpose() * fine_inverse_form(fb) * c;
  return {s_membership(r).in_s, kg_membership(fb.d)};
}

// ---------------------------------------------------------------------------
// Z_i = {(B, phi) : phi^T B phi in S_i}, B on the inverse side.

template <ExactField F>
bool z_membership(const Matrix<F>& b, const TwoFormMatrix<F>& phi) {
  if (!b.is_square() || !b.is_skew()) throw ShapeError("z_membership: B is not skew");
  if (phi.rows() != phi.cols() || b.rows() != 4 * phi.rows()) throw ShapeError("z_membership: shape mismatch");
  if (rank(b) != b.rows()) throw SingularMatrix("z_membership: B is singular");
  Matrix<F> f = flatten(phi);
  return s_membership(f.transpose() * b * f).in_s;
}

}  // namespace instanton

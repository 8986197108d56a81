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

// Hyperwebs of quadrics A in S^2 H_n^v (x) Lambda^2 V^v, their image
// presentation A = c^T q c, and the instanton conditions
//   (i)   rank flat(A) = 2n + 2r
//   (ii)  h -> c(h (x) v) is injective for every point [v] of P^3
//   (iii) the section map W_A -> H_n^v (x) V^v, w -> c^T q w, is injective.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "instanton/multilinear.hpp"
#include "instanton/random.hpp"

namespace instanton {

template <ExactField F>
class Hyperweb {
 public:
  using field_type = F;
  using value_type = typename F::value_type;

  Hyperweb() = default;
  explicit Hyperweb(TwoFormMatrix<F> body) : body_(std::move(body)) {
    if (body_.tag() != SymmetryTag::Symmetric) throw SymmetryViolation("a hyperweb body must be symmetric");
    flat_ = flatten(body_);
  }
  static Hyperweb from_flat(const Matrix<F>& m) {
    if (!m.is_square() || m.rows() % 4 != 0) throw ShapeError("hyperweb flat form has shape " + m.shape());
    return Hyperweb(unflatten(m, m.rows() / 4, m.rows() / 4, SymmetryTag::Symmetric));
  }

  std::size_t n() const { return body_.rows(); }
  const F& field() const { return body_.field(); }
  const TwoFormMatrix<F>& body() const { return body_; }
  const Matrix<F>& flat() const { return flat_; }

  friend bool operator==(const Hyperweb& a, const Hyperweb& b) { return a.body_ == b.body_; }

 private:
  TwoFormMatrix<F> body_;
  Matrix<F> flat_;
};

template <ExactField F>
struct WPresentation {
  std::size_t rank = 0;
  Matrix<F> c;                        // rank x 4n, rows of the RREF of flat(A)
  Matrix<F> q;                        // flat(A) restricted to pivot_set, skew invertible
  std::vector<std::size_t> pivot_set;
};

template <ExactField F>
WPresentation<F> present(const Hyperweb<F>& a) {
  const auto& m = a.flat();
  if (m.is_zero()) throw ZeroHyperweb("present: A = 0");
  auto e = row_echelon(m);
  const std::size_t r = e.pivots.size();
  WPresentation<F> w{r, e.reduced.block(0, 0, r, m.cols()), m.select(e.pivots, e.pivots), e.pivots};
  ensure(w.c.transpose() * w.q * w.c == m, "present: c^T q c != flat(A)");
  return w;
}

template <Field F>
using Point = std::array<typename F::value_type, 4>;

template <Field F>
std::vector<std::string> point_strings(const Point<F>& v) {
  std::vector<std::string> s;
  for (const auto& x : v) s.push_back(to_string(x));
  return s;
}

/// All points of P^3(F_p), normalized so the first nonzero coordinate is 1;
/// ordered by the position of that 1, then lexicographically.
inline std::vector<Point<PrimeField>> projective_points(const PrimeField& f) {
  std::vector<Point<PrimeField>> pts;
  const std::uint32_t p = f.p;
  pts.reserve(std::size_t{p} * p * p + p * p + p + 1);
  for (std::size_t lead = 0; lead < 4; ++lead) {
    std::size_t free = 3 - lead;
    std::size_t count = 1;
    for (std::size_t k = 0; k < free; ++k) count *= p;
    for (std::size_t code = 0; code < count; ++code) {
      Point<PrimeField> v{f.zero(), f.zero(), f.zero(), f.zero()};
      v[lead] = f.one();
      std::size_t rest = code;
      for (std::size_t k = 3; k > lead; --k) {
        v[k] = f.from_int(static_cast<long long>(rest % p));
        rest /= p;
      }
      pts.push_back(v);
    }
  }
  return pts;
}

template <ExactField F>
Point<F> random_point(const F& f, Rng& rng) {
  for (;;) {
    Point<F> v{random_element(f, rng), random_element(f, rng), random_element(f, rng), random_element(f, rng)};
    if (!(is_zero(v[0]) && is_zero(v[1]) && is_zero(v[2]) && is_zero(v[3]))) return v;
  }
}

/// a_v : H_n -> W_A, h -> c(h (x) v), as a rank x n matrix.
template <ExactField F>
Matrix<F> fiber_map(const Matrix<F>& c, std::size_t n, const Point<F>& v) {
  Matrix<F> a(c.field(), c.rows(), n);
  for (std::size_t h = 0; h < n; ++h)
    for (std::size_t a_ = 0; a_ < 4; ++a_) {
      if (is_zero(v[a_])) continue;
      for (std::size_t w = 0; w < c.rows(); ++w) a(w, h) += v[a_] * c(w, 4 * h + a_);
    }
  return a;
}

template <ExactField F>
struct FiberResult {
  std::size_t a_rank = 0;
  bool exact = false;          // a_v injective
  bool symplectic_ok = false;  // q descends to a nondegenerate form of the expected size
  std::optional<Matrix<F>> form;
};

/// Form on ker(a_v^T q) / im(a_v) induced by q, restricted to the leftmost
/// pivot columns of K^T q K (a complement of the radical).
template <ExactField F>
FiberResult<F> fiber_check(const WPresentation<F>& w, std::size_t n, const Point<F>& v) {
  FiberResult<F> res;
  Matrix<F> a = fiber_map(w.c, n, v);
  res.a_rank = rank(a);
  res.exact = res.a_rank == n;
  if (!res.exact || w.rank < 2 * n) return res;
  Matrix<F> k = kernel(a.transpose() * w.q);
  Matrix<F> g = k.transpose() * w.q * k;
  auto e = row_echelon(g);
  Matrix<F> form = g.select(e.pivots, e.pivots);
  std::size_t expect = w.rank - 2 * n;
  res.symplectic_ok = e.pivots.size() == expect && form.is_skew() && rank(form) == expect;
  res.form = std::move(form);
  return res;
}

// ---------------------------------------------------------------------------
// Property (*): an n-dimensional subspace of H_N on which A is invertible.

template <ExactField F>
struct TameStatus {
  enum class Kind { Yes, NotFound, Unchecked };
  Kind kind = Kind::Unchecked;
  std::vector<std::size_t> subset;   // coordinate witness
  std::optional<Matrix<F>> basis;    // N x n monomorphism witness
  std::size_t attempts = 0;
};

inline bool next_subset(std::vector<std::size_t>& s, std::size_t N) {
  const std::size_t k = s.size();
  for (std::size_t i = k; i-- > 0;) {
    if (s[i] < N - k + i) {
      ++s[i];
      for (std::size_t j = i + 1; j < k; ++j) s[j] = s[j - 1] + 1;
      return true;
    }
  }
  return false;
}

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

template <ExactField F>
TameStatus<F> property_star_search(const Hyperweb<F>& a, std::size_t r, std::size_t attempts, std::uint64_t seed) {
  const std::size_t N = a.n();
  if ((N + r) % 2 == 0 || N + r < 1)
    throw PreconditionViolation("property (*): N + r - 1 must be even");
  const std::size_t n = (N + r - 1) / 2;
  TameStatus<F> st;
  st.kind = TameStatus<F>::Kind::NotFound;
  if (n == 0 || n + 1 < r) throw PreconditionViolation("property (*): need n >= max(1, r-1)");
  if (binomial(N, n) <= 5000) {
    std::vector<std::size_t> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = i;
    do {
      ++st.attempts;
      if (rank(flatten(restrict_form(a.body(), s))) == 4 * n) {
        st.kind = TameStatus<F>::Kind::Yes;
        st.subset = s;
        return st;
      }
    } while (next_subset(s, N));
  }
  Rng rng(seed);
  for (std::size_t t = 0; t < attempts; ++t) {
    ++st.attempts;
    auto g = random_matrix(a.field(), N, n, rng);
    if (rank(g) < n) continue;
    if (rank(flatten(pull_back(a.body(), g))) == 4 * n) {
      st.kind = TameStatus<F>::Kind::Yes;
      st.basis = g;
      return st;
    }
  }
  return st;
}

// ---------------------------------------------------------------------------
// Instanton check

struct CheckStrategy {
  enum class Kind { ExhaustiveFp, Sampled };
  Kind kind = Kind::ExhaustiveFp;
  std::size_t samples = 64;
  std::vector<std::uint32_t> primes{7, 11};
  std::uint64_t seed = 1;
  bool search_tame = false;
  std::size_t tame_attempts = 200;

  static CheckStrategy exhaustive() { return {}; }
  static CheckStrategy sampled(std::size_t count, std::vector<std::uint32_t> primes = {7, 11},
                               std::uint64_t seed = 1) {
    CheckStrategy s;
    s.kind = Kind::Sampled;
    s.samples = count;
    s.primes = std::move(primes);
    s.seed = seed;
    return s;
  }
  std::string to_string() const {
    if (kind == Kind::ExhaustiveFp) return "exhaustive";
    return "sampled:" + std::to_string(samples);
  }
};

struct FiberStatus {
  enum class Kind { VerifiedExhaustive, VerifiedSampled, Failed };
  Kind kind = Kind::Failed;
  std::size_t points = 0;                       // points tested
  std::vector<std::uint32_t> primes;            // reductions that certified (ii) exhaustively
  std::vector<std::uint32_t> inconclusive_primes;
  std::vector<std::string> witness;             // failing point, when Failed
  std::string witness_field;
  std::string reason;

  bool ok() const { return kind != Kind::Failed; }
};

template <ExactField F>
struct InstantonReport {
  std::size_t n = 0;
  std::size_t r = 0;
  std::string field;
  std::string strategy;
  std::size_t rank_value = 0;
  bool rank_ok = false;
  FiberStatus fiber;
  std::size_t h0_value = 0;
  bool h0_ok = false;
  bool symplectic_fiber_ok = false;
  TameStatus<F> tame;

  /// r read off from the rank, when it is even and exceeds 2n.
  std::optional<std::size_t> derived_r() const {
    if (rank_value % 2 != 0 || rank_value <= 2 * n) return std::nullopt;
    return (rank_value - 2 * n) / 2;
  }
  bool passed() const { return rank_ok && fiber.ok() && h0_ok && symplectic_fiber_ok; }
};

namespace detail {

template <ExactField F, class Points>
bool scan_points(const WPresentation<F>& w, std::size_t n, const Points& pts, FiberStatus& fs, bool& sympl) {
  for (const auto& v : pts) {
    ++fs.points;
    auto res = fiber_check(w, n, v);
    if (!res.exact) {
      fs.kind = FiberStatus::Kind::Failed;
      fs.witness = point_strings<F>(v);
      fs.witness_field = w.c.field().spec().to_string();
      fs.reason = "a_v has rank " + std::to_string(res.a_rank) + " < " + std::to_string(n);
      return false;
    }
    sympl = sympl && res.symplectic_ok;
  }
  return true;
}

}  // namespace detail

template <ExactField F>
InstantonReport<F> check_instanton(const Hyperweb<F>& a, std::size_t r, const CheckStrategy& strategy) {
  if (r < 1 || a.n() < 1) throw PreconditionViolation("check_instanton needs n >= 1 and r >= 1");
  constexpr bool is_fp = std::is_same_v<F, PrimeField>;
  if constexpr (!is_fp)
    if (strategy.kind == CheckStrategy::Kind::ExhaustiveFp)
      throw StrategyMismatch("exhaustive enumeration needs a prime field");

  InstantonReport<F> rep;
  rep.n = a.n();
  rep.r = r;
  rep.field = a.field().spec().to_string();
  rep.strategy = strategy.to_string();
  const std::size_t n = a.n();

  if (a.flat().is_zero()) {
    rep.fiber.reason = "A = 0";
    return rep;
  }
  auto w = present(a);
  rep.rank_value = w.rank;
  rep.rank_ok = w.rank == 2 * n + 2 * r;

  // (iii): kernel of c^T q.
  rep.h0_value = w.rank - rank(w.c.transpose() * w.q);
  rep.h0_ok = rep.h0_value == 0;

  bool sympl = true;
  FiberStatus& fs = rep.fiber;
  if constexpr (is_fp) {
    if (strategy.kind == CheckStrategy::Kind::ExhaustiveFp) {
      if (detail::scan_points(w, n, projective_points(a.field()), fs, sympl)) {
        fs.kind = FiberStatus::Kind::VerifiedExhaustive;
        fs.primes = {a.field().p};
      }
    } else {
      Rng rng(strategy.seed);
      std::vector<Point<F>> pts;
      for (std::size_t s = 0; s < strategy.samples; ++s) pts.push_back(random_point(a.field(), rng));
      if (detail::scan_points(w, n, pts, fs, sympl)) {
        fs.kind = FiberStatus::Kind::VerifiedSampled;
        fs.primes = {a.field().p};
      }
    }
  } else {
    Rng rng(strategy.seed);
    std::vector<Point<F>> pts;
    for (std::size_t s = 0; s < strategy.samples; ++s) pts.push_back(random_point(a.field(), rng));
    if (detail::scan_points(w, n, pts, fs, sympl)) {
      fs.kind = FiberStatus::Kind::VerifiedSampled;
      // Exhaustive verification in each good reduction; a failure mod p is
      // not a failure over Q, so it only marks the prime inconclusive.
      for (auto p : strategy.primes) {
        PrimeField fp(p);
        auto red = reduce(a.flat(), fp);
        if (!red || rank(*red) != w.rank) {
          fs.inconclusive_primes.push_back(p);
          continue;
        }
        auto ap = Hyperweb<PrimeField>::from_flat(*red);
        auto wp = present(ap);
        FiberStatus sub;
        bool sp = true;
        if (detail::scan_points(wp, n, projective_points(fp), sub, sp) && sp)
          fs.primes.push_back(p);
        else
          fs.inconclusive_primes.push_back(p);
      }
    }
  }
  rep.symplectic_fiber_ok = fs.ok() && sympl;
  if (strategy.search_tame)
    rep.tame = property_star_search(a, r, strategy.tame_attempts, strategy.seed);
  return rep;
}

}  // namespace instanton

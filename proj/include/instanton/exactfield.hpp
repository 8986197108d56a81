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

// Exact scalars: rationals (GMP), prime fields, and first-order dual numbers
// over either. A field is a small descriptor object; elements of F_p carry
// their modulus so mixing fields is caught at the operation that mixes them.

#pragma once

#include <gmpxx.h>

#include <compare>
#include <concepts>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "instanton/errors.hpp"

namespace instanton {

using Rational = mpq_class;

struct FieldSpec {
  enum class Kind { Rationals, PrimeField };
  Kind kind = Kind::Rationals;
  std::uint32_t p = 0;
  bool dual = false;  // k[eps]/(eps^2) over the base; never nested

  bool operator==(const FieldSpec&) const = default;

  std::string to_string() const {
    std::string base = kind == Kind::Rationals ? "Q" : "F_" + std::to_string(p);
    return dual ? base + "[eps]" : base;
  }
  FieldSpec base() const { return {kind, p, false}; }
};

inline bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

// ---------------------------------------------------------------------------
// F_p elements

class Fp {
 public:
  Fp() = default;
  Fp(std::uint32_t value, std::uint32_t p) : v_(value % p), p_(p) {}

  std::uint32_t value() const { return v_; }
  std::uint32_t modulus() const { return p_; }

  friend Fp operator+(const Fp& a, const Fp& b) {
    check(a, b);
    std::uint32_t s = a.v_ + b.v_;
    return raw(s >= a.p_ ? s - a.p_ : s, a.p_);
  }
  friend Fp operator-(const Fp& a, const Fp& b) {
    check(a, b);
    return raw(a.v_ >= b.v_ ? a.v_ - b.v_ : a.v_ + a.p_ - b.v_, a.p_);
  }
  friend Fp operator*(const Fp& a, const Fp& b) {
    check(a, b);
    return raw(static_cast<std::uint32_t>(std::uint64_t{a.v_} * b.v_ % a.p_), a.p_);
  }
  friend Fp operator/(const Fp& a, const Fp& b) { return a * b.inverse(); }
  Fp operator-() const { return raw(v_ == 0 ? 0 : p_ - v_, p_); }
  Fp& operator+=(const Fp& b) { return *this = *this + b; }
  Fp& operator-=(const Fp& b) { return *this = *this - b; }
  Fp& operator*=(const Fp& b) { return *this = *this * b; }

  friend bool operator==(const Fp& a, const Fp& b) {
    check(a, b);
    return a.v_ == b.v_;
  }

  Fp inverse() const {
    if (v_ == 0) throw DivisionByZero("division by zero in F_" + std::to_string(p_));
    // extended Euclid
    std::int64_t t = 0, nt = 1, r = p_, nr = v_;
    while (nr != 0) {
      std::int64_t q = r / nr;
      t -= q * nt;
      std::swap(t, nt);
      r -= q * nr;
      std::swap(r, nr);
    }
    if (t < 0) t += p_;
    return raw(static_cast<std::uint32_t>(t), p_);
  }

 private:
  static Fp raw(std::uint32_t v, std::uint32_t p) {
    Fp x;
    x.v_ = v;
    x.p_ = p;
    return x;
  }
  static void check(const Fp& a, const Fp& b) {
    if (a.p_ != b.p_ || a.p_ == 0)
      throw FieldMismatch("F_p elements with moduli " + std::to_string(a.p_) +
                          " and " + std::to_string(b.p_));
  }

  std::uint32_t v_ = 0;
  std::uint32_t p_ = 0;
};

// ---------------------------------------------------------------------------
// Dual numbers a + b*eps with eps^2 = 0

template <class T>
struct Dual {
  T re;
  T eps;

  friend Dual operator+(const Dual& a, const Dual& b) { return {T(a.re + b.re), T(a.eps + b.eps)}; }
  friend Dual operator-(const Dual& a, const Dual& b) { return {T(a.re - b.re), T(a.eps - b.eps)}; }
  friend Dual operator*(const Dual& a, const Dual& b) {
    return {T(a.re * b.re), T(a.re * b.eps + a.eps * b.re)};
  }
  friend Dual operator/(const Dual& a, const Dual& b) { return a * b.inverse(); }
  Dual operator-() const { return {T(-re), T(-eps)}; }
  Dual& operator+=(const Dual& b) { return *this = *this + b; }
  Dual& operator-=(const Dual& b) { return *this = *this - b; }
  Dual& operator*=(const Dual& b) { return *this = *this * b; }
  friend bool operator==(const Dual& a, const Dual& b) { return a.re == b.re && a.eps == b.eps; }

  Dual inverse() const;
};

// ---------------------------------------------------------------------------
// Scalar helpers found by overload resolution in generic code.

inline bool is_zero(const Rational& x) { return sgn(x) == 0; }
inline bool is_zero(const Fp& x) { return x.value() == 0; }
template <class T>
bool is_zero(const Dual<T>& x) { return is_zero(x.re) && is_zero(x.eps); }

inline bool is_unit(const Rational& x) { return !is_zero(x); }
inline bool is_unit(const Fp& x) { return !is_zero(x); }
template <class T>
bool is_unit(const Dual<T>& x) { return is_unit(x.re); }

inline Rational inverse(const Rational& x) {
  if (is_zero(x)) throw DivisionByZero("division by zero in Q");
  return Rational(1) / x;
}
inline Fp inverse(const Fp& x) { return x.inverse(); }
template <class T>
Dual<T> inverse(const Dual<T>& x) { return x.inverse(); }

template <class T>
Dual<T> Dual<T>::inverse() const {
  if (!is_unit(re)) throw DivisionByZero("dual number with zero real part is not invertible");
  T ir = instanton::inverse(re);
  return {ir, T(-(eps * ir * ir))};
}

inline std::string to_string(const Rational& x) { return x.get_str(); }
inline std::string to_string(const Fp& x) { return std::to_string(x.value()); }
template <class T>
std::string to_string(const Dual<T>& x) {
  return to_string(x.re) + "+" + to_string(x.eps) + "e";
}

inline std::ostream& operator<<(std::ostream& os, const Fp& x) { return os << x.value(); }
template <class T>
std::ostream& operator<<(std::ostream& os, const Dual<T>& x) { return os << to_string(x); }

/// Parses "a" or "a/b" with optional leading '-'. Result is in lowest terms.
inline Rational parse_rational(std::string_view s) {
  auto digits = [](std::string_view t) {
    if (!t.empty() && (t[0] == '-' || t[0] == '+')) t.remove_prefix(1);
    if (t.empty()) return false;
    for (char c : t)
      if (c < '0' || c > '9') return false;
    return true;
  };
  auto slash = s.find('/');
  std::string_view num = s.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : s.substr(slash + 1);
  if (!digits(num) || !digits(den) || den[0] == '-' || den[0] == '+')
    throw ParseError("malformed rational '" + std::string(s) + "'");
  mpz_class a(std::string(num[0] == '+' ? num.substr(1) : num), 10);
  mpz_class b(std::string(den), 10);
  if (b == 0) throw ParseError("zero denominator in '" + std::string(s) + "'");
  Rational q(a, b);
  q.canonicalize();
  return q;
}

// ---------------------------------------------------------------------------
// Field descriptors

struct RationalField {
  using value_type = Rational;
  static constexpr bool is_dual = false;

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type from_int(long long k) const { return Rational(mpz_class(std::to_string(k))); }
  value_type from_rational(const Rational& q) const { return q; }
  value_type parse(std::string_view s) const { return parse_rational(s); }
  std::uint32_t characteristic() const { return 0; }
  FieldSpec spec() const { return {}; }
  bool operator==(const RationalField&) const = default;
};

struct PrimeField {
  using value_type = Fp;
  static constexpr bool is_dual = false;

  std::uint32_t p = 7;

  PrimeField() = default;
  explicit PrimeField(std::uint64_t prime) : p(static_cast<std::uint32_t>(prime)) {
    if (prime > (1u << 31) || !is_prime(prime))
      throw PreconditionViolation("F_p requires a prime p < 2^31, got " + std::to_string(prime));
    if (prime == 2)
      throw PreconditionViolation("characteristic 2 is not supported");
  }

  value_type zero() const { return Fp(0, p); }
  value_type one() const { return Fp(1, p); }
  value_type from_int(long long k) const {
    long long r = k % static_cast<long long>(p);
    if (r < 0) r += p;
    return Fp(static_cast<std::uint32_t>(r), p);
  }
  /// Reduction of a rational; nullopt when p divides the denominator.
  std::optional<value_type> reduce(const Rational& q) const {
    mpz_class pz(p);
    mpz_class den = q.get_den() % pz;
    if (den == 0) return std::nullopt;
    mpz_class num = q.get_num() % pz;
    if (num < 0) num += pz;
    return Fp(static_cast<std::uint32_t>(num.get_ui()), p) /
           Fp(static_cast<std::uint32_t>(den.get_ui()), p);
  }
  value_type from_rational(const Rational& q) const {
    auto r = reduce(q);
    if (!r) throw DivisionByZero(q.get_str() + " has no reduction mod " + std::to_string(p));
    return *r;
  }
  value_type parse(std::string_view s) const {
    auto r = reduce(parse_rational(s));
    if (!r) throw ParseError("'" + std::string(s) + "' has no reduction mod " + std::to_string(p));
    return *r;
  }
  std::uint32_t characteristic() const { return p; }
  FieldSpec spec() const { return {FieldSpec::Kind::PrimeField, p, false}; }
  bool operator==(const PrimeField&) const = default;
};

template <class Base>
struct DualField {
  static_assert(!Base::is_dual, "dual numbers do not nest");
  using base_value = typename Base::value_type;
  using value_type = Dual<base_value>;
  static constexpr bool is_dual = true;

  Base base;

  DualField() = default;
  explicit DualField(Base b) : base(std::move(b)) {}

  value_type zero() const { return {base.zero(), base.zero()}; }
  value_type one() const { return {base.one(), base.zero()}; }
  value_type from_int(long long k) const { return {base.from_int(k), base.zero()}; }
  value_type from_rational(const Rational& q) const { return {base.from_rational(q), base.zero()}; }
  value_type lift(const base_value& x) const { return {x, base.zero()}; }
  value_type make(const base_value& re, const base_value& eps) const { return {re, eps}; }
  std::uint32_t characteristic() const { return base.characteristic(); }
  FieldSpec spec() const {
    FieldSpec s = base.spec();
    s.dual = true;
    return s;
  }
  bool operator==(const DualField&) const = default;
};

template <class F>
concept Field = requires(const F& f, long long k) {
  typename F::value_type;
  { F::is_dual } -> std::convertible_to<bool>;
  { f.zero() } -> std::same_as<typename F::value_type>;
  { f.one() } -> std::same_as<typename F::value_type>;
  { f.from_int(k) } -> std::same_as<typename F::value_type>;
  { f.spec() } -> std::same_as<FieldSpec>;
};

/// Rationals or a prime field: the fields that hyperwebs live over.
template <class F>
concept ExactField = Field<F> && !F::is_dual;

template <class F>
void require_same_field(const F& a, const F& b, const char* where) {
  if (!(a == b))
    throw FieldMismatch(std::string(where) + ": " + a.spec().to_string() + " vs " +
                        b.spec().to_string());
}

}  // namespace instanton

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

// Seeded sampling. std::mt19937_64 is fully specified by the standard; the
// bounded draws below avoid the implementation-defined distributions so that
// a seed reproduces the same objects on every platform.

#pragma once

#include <cstdint>
#include <algorithm>
#include <cstdlib>
#include <random>
#include <vector>

#include "instanton/linalg.hpp"

namespace instanton {

using Rng = std::mt19937_64;

/// Default seed, overridable through INSTANTON_SEED.
inline std::uint64_t default_seed() {
  if (const char* s = std::getenv("INSTANTON_SEED")) {
    char* end = nullptr;
    auto v = std::strtoull(s, &end, 10);
    if (end && *end == '\0') return v;
  }
  return 20260101;
}

inline std::uint64_t draw_below(Rng& rng, std::uint64_t bound) {
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t x;
  do x = rng();
  while (x >= limit);
  return x % bound;
}

inline Fp random_element(const PrimeField& f, Rng& rng) {
  return Fp(static_cast<std::uint32_t>(draw_below(rng, f.p)), f.p);
}

/// Small integers in [-9, 9]; keeps rational growth tame in elimination.
inline Rational random_element(const RationalField& f, Rng& rng) {
  return f.from_int(static_cast<long long>(draw_below(rng, 19)) - 9);
}

template <ExactField F>
Matrix<F> random_matrix(const F& f, std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix<F> m(f, rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = random_element(f, rng);
  return m;
}

template <ExactField F>
Matrix<F> random_skew(const F& f, std::size_t n, Rng& rng) {
  Matrix<F> m(f, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      m(i, j) = random_element(f, rng);
      m(j, i) = -m(i, j);
    }
  return m;
}

template <ExactField F>
Matrix<F> random_invertible(const F& f, std::size_t n, Rng& rng) {
  for (;;) {
    auto g = random_matrix(f, n, n, rng);
    if (rank(g) == n) return g;
  }
}

/// Random vector in the column span of `basis`.
template <ExactField F>
Matrix<F> random_combination(const Matrix<F>& basis, Rng& rng) {
  Matrix<F> coeff = random_matrix(basis.field(), basis.cols(), 1, rng);
  return basis * coeff;
}

/// Uniform random k-subset of {0..n-1}, sorted.
inline std::vector<std::size_t> random_subset(std::size_t n, std::size_t k, Rng& rng) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = i + static_cast<std::size_t>(draw_below(rng, n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace instanton

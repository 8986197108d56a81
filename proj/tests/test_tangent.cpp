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

#include <gtest/gtest.h>

#include "instanton/forge.hpp"
#include "instanton/tangent.hpp"
#include "fd_oracle.hpp"
#include "oracles.hpp"

using namespace instanton;

TEST(LocalEquations, VanishAtBasePoint) {
  PrimeField f(7);
  auto t = make_tame(f, 3, 2, {1, 100});
  auto eq = local_equations(t.a, 2);
  EXPECT_EQ(eq.u().size(), 14u);
  EXPECT_EQ(eq.num_equations(), 15u);
  for (const auto& v : eq.evaluate(t.a.flat())) EXPECT_TRUE(is_zero(v));
  auto c = gen_charge1(f, std::nullopt, {1, 100});
  EXPECT_EQ(local_equations(c, 1).num_equations(), 0u);
  for (std::uint64_t s = 1; s <= 5; ++s) {
    auto d = gen_rank_drop(RationalField{}, 2, 6, {s, 100});
    auto e = local_equations(d, 1);
    EXPECT_EQ(e.num_equations(), 1u);
    for (const auto& v : e.evaluate(d.flat())) EXPECT_EQ(v, 0);
  }
  EXPECT_THROW(local_equations(c, 2), NotAnInstanton);
}

TEST(Jacobian, DualNumbersMatchExactFiniteDifferences) {
  RationalField q;
  auto t = make_tame(q, 3, 2, {1, 20});
  auto eq = local_equations(t.a, 2);
  Rng rng(400);
  for (int d = 0; d < 10; ++d) {
    auto x = flatten(random_two_form_matrix(q, 5, 5, SymmetryTag::Symmetric, rng));
    auto dual = directional_derivative(eq, t.a, x);
    auto fd = oracle::fd_derivative(eq, t.a.flat(), x);
    ASSERT_EQ(dual.size(), fd.size());
    for (std::size_t e = 0; e < fd.size(); ++e) EXPECT_EQ(dual[e], fd[e]) << "direction " << d << " eq " << e;
  }
}

TEST(Jacobian, LinearInTheDirection) {
  PrimeField f(7);
  auto t = make_tame(f, 3, 2, {2, 100});
  auto eq = local_equations(t.a, 2);
  auto j = jacobian(eq, t.a);
  EXPECT_EQ(j.rows(), 15u);
  EXPECT_EQ(j.cols(), static_cast<std::size_t>(dim_s(5)));
  Rng rng(401);
  auto x = random_two_form_matrix(f, 5, 5, SymmetryTag::Symmetric, rng);
  // coordinates of x in s_basis order
  Matrix<PrimeField> coords(f, j.cols(), 1);
  std::size_t c = 0;
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t k = i; k < 5; ++k)
      for (std::size_t w = 0; w < 6; ++w) coords(c++, 0) = x.at(i, k)[w];
  auto lhs = j * coords;
  auto rhs = directional_derivative(eq, t.a, flatten(x));
  for (std::size_t e = 0; e < rhs.size(); ++e) EXPECT_EQ(lhs(e, 0), rhs[e]);
}

TEST(Tangent, ChargeOneIsExpected) {
  PrimeField f(11);
  auto rep = tangent_dimension(gen_charge1(f, std::nullopt, {1, 100}), 1);
  EXPECT_EQ(rep.tangent_dim, 6);
  EXPECT_EQ(rep.expected_dim, 6);
  EXPECT_TRUE(rep.meets_expected);
  EXPECT_TRUE(rep.char_p_caveat);
}

TEST(Tangent, LowerBoundHoldsOnGeneratedHyperwebs) {
  PrimeField f(7);
  for (std::uint64_t s = 1; s <= 5; ++s) {
    auto rep = tangent_dimension(make_tame(f, 3, 2, {s, 100}).a, 2);
    EXPECT_GE(rep.tangent_dim, 75);
    EXPECT_EQ(rep.expected_dim, 75);
  }
  std::vector<Hyperweb<PrimeField>> parts{gen_charge1(f, std::nullopt, {1, 100}), gen_charge1(f, std::nullopt, {2, 100})};
  auto bs = tangent_dimension(gen_blocksum(parts), 2);
  EXPECT_EQ(bs.expected_dim, 4 + 24 - 10);
  EXPECT_GE(bs.tangent_dim, bs.expected_dim);
  auto q = tangent_dimension(make_tame(RationalField{}, 3, 2, {1, 20}).a, 2);
  EXPECT_FALSE(q.char_p_caveat);
  EXPECT_GE(q.tangent_dim, 75);
}

TEST(Identities, ThreeTwoRow) {
  auto t = dimension_identities(3, 2);
  ASSERT_EQ(t.rows.size(), 1u);
  const auto& r = t.rows[0];
  EXPECT_EQ(r.a_lhs, 1);
  EXPECT_EQ(r.a_rhs, 1);
  EXPECT_EQ(r.b_lhs, 75);
  EXPECT_EQ(r.b_rhs, 75);
  EXPECT_EQ(r.c_lhs, 44);
  EXPECT_EQ(r.c_rhs, 44);
}

TEST(Identities, FullSweepAndNegativeControl) {
  auto t = dimension_identities(50, 49);
  EXPECT_EQ(t.rows.size(), 48u * 49u / 2u);
  EXPECT_TRUE(t.all_pass());
  // Independent recomputation of identity (a) as a binomial coefficient.
  for (const auto& r : t.rows) EXPECT_EQ(static_cast<std::uint64_t>(r.a_rhs), oracle::binom(2 * r.n - 2 * r.r, 2));
  EXPECT_FALSE(dimension_identities(50, 49, true).all_pass());
  EXPECT_THROW(dimension_identities(1, 2), PreconditionViolation);
  EXPECT_EQ(expected_dimension(1, 1), 6);
  EXPECT_EQ(dim_s(5), 90);
}

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
#include "oracles.hpp"

using namespace instanton;

TEST(GenCharge1, ResamplesDegenerateForm) {
  PrimeField f(7);
  auto a = gen_charge1(f, make_form(f, {1, 0, 0, 0, 0, 0}), {4, 100});
  EXPECT_EQ(rank(a.flat()), 4u);
  auto b = gen_charge1(f, make_form(f, {1, 0, 0, 0, 0, 1}), {4, 100});
  EXPECT_EQ(b.body().at(0, 0), make_form(f, {1, 0, 0, 0, 0, 1}));
  EXPECT_EQ(gen_charge1(f, std::nullopt, {9, 100}), gen_charge1(f, std::nullopt, {9, 100}));
  EXPECT_THROW(gen_charge1(f, make_form(f, {1, 0, 0, 0, 0, 0}), {1, 1}), GeneratorFailed);
}

TEST(GenRankDrop, SinglePfaffianStratum) {
  PrimeField f(11);
  RationalField q;
  for (std::size_t n = 1; n <= 3; ++n) {
    auto a = gen_rank_drop(f, n, 4 * n - 2, {n, 100});
    EXPECT_EQ(oracle::rank_by_columns(oracle::grid(a.flat()), f.zero()), 4 * n - 2);
    auto b = gen_rank_drop(q, n, 4 * n - 2, {n, 100});
    EXPECT_EQ(rank(b.flat()), 4 * n - 2);
  }
  EXPECT_THROW(gen_rank_drop(f, 2, 4, {1, 100}), UnsupportedStratum);
  EXPECT_THROW(gen_rank_drop(f, 2, 7, {1, 100}), PreconditionViolation);
}

TEST(Isotropic, TrivialDirectionsAreInTheRadical) {
  PrimeField f(7);
  Rng rng(300);
  auto b = random_s0(f, 2, rng);
  IsotropicSolver<PrimeField> s(b);
  for (std::size_t h = 0; h < 2; ++h)
    for (int t = 0; t < 5; ++t) {
      auto y = random_matrix(f, 12, 1, rng);
      for (const auto& x : s.pairing(s.trivial.col(h), y)) EXPECT_TRUE(is_zero(x));
    }
  // constraint(x) y = pairing(x, y)
  auto x = random_matrix(f, 12, 1, rng), y = random_matrix(f, 12, 1, rng);
  auto c = s.constraint(x) * y;
  auto p = s.pairing(x, y);
  for (std::size_t t = 0; t < 10; ++t) EXPECT_EQ(c(t, 0), p[t]);
}

TEST(MakeTame, ThreeTwoProperties) {
  PrimeField f(7);
  auto t = make_tame(f, 3, 2, {42, 100});
  EXPECT_EQ(t.a.n(), 5u);
  EXPECT_EQ(rank(t.a.flat()), 14u);
  EXPECT_EQ(t.schur_rank, 2u);
  EXPECT_EQ(t.kg, KgClass::InKGStar);
  EXPECT_TRUE(t.report.passed());
  EXPECT_EQ(t.report.fiber.kind, FiberStatus::Kind::VerifiedExhaustive);
  ASSERT_EQ(t.report.tame.kind, TameStatus<PrimeField>::Kind::Yes);
  EXPECT_EQ(t.report.tame.subset, t.xi.first);
  EXPECT_LE(t.attempts, 100u);
}

TEST(MakeTame, OtherRangesAndReproducibility) {
  PrimeField f(7);
  for (auto [n, r] : std::vector<std::pair<std::size_t, std::size_t>>{{4, 3}, {4, 2}, {5, 4}}) {
    auto t = make_tame(f, n, r, {1, 100});
    EXPECT_EQ(t.a.n(), 2 * n - r + 1);
    EXPECT_EQ(rank(t.a.flat()), 2 * (2 * n - r + 1) + 2 * r);
    EXPECT_TRUE(t.report.passed());
  }
  EXPECT_EQ(make_tame(f, 3, 2, {7, 100}).a, make_tame(f, 3, 2, {7, 100}).a);
  EXPECT_THROW(make_tame(f, 2, 2, {1, 100}), PreconditionViolation);
  EXPECT_THROW(make_tame(f, 3, 1, {1, 100}), PreconditionViolation);
}

TEST(MakeTame, RationalField) {
  auto t = make_tame(RationalField{}, 3, 2, {1, 20});
  EXPECT_EQ(rank(t.a.flat()), 14u);
  EXPECT_TRUE(t.report.passed());
  EXPECT_EQ(t.report.fiber.primes, (std::vector<std::uint32_t>{7, 11}));
}

TEST(Pipeline2n1, RankDropInputOnH2) {
  PrimeField f(7);
  int ran = 0;
  for (std::uint64_t s = 1; s <= 6; ++s) {
    auto a = gen_rank_drop(f, 2, 6, {s, 100});
    if (!check_instanton(a, 1, CheckStrategy::exhaustive()).passed()) {
      EXPECT_THROW(pipeline_2n1(a, {s, 100}), PreconditionViolation);
      continue;
    }
    ++ran;
    auto p = pipeline_2n1(a, {s, 100});
    EXPECT_TRUE(p.rank_equal);
    EXPECT_EQ(p.b.n(), 2u);
    EXPECT_EQ(rank(p.b.flat()), 6u);
    EXPECT_TRUE(p.report.passed());  // B in MI_{n+1,n} with n = 1
    EXPECT_TRUE(p.monad_exact);
  }
  EXPECT_GT(ran, 0);
}

TEST(PipelineTau, Preconditions) {
  PrimeField f(7);
  auto a = gen_rank_drop(f, 2, 6, {1, 100});
  auto zeta = Matrix<PrimeField>::identity(f, 2);
  EXPECT_THROW(pipeline_tau(a, zeta, 2, {1, 100}), PreconditionViolation);
  Matrix<PrimeField> tau(f, 2, 1);
  tau(0, 0) = f.one();
  EXPECT_THROW(restrict_along_tau(a, Matrix<PrimeField>::identity(f, 2), tau), PreconditionViolation);
}

TEST(ZPoint, IsotropicMembership) {
  PrimeField f(7);
  for (std::size_t i : {1u, 2u, 3u}) {
    auto z = gen_z_point(f, i, ZMode::Isotropic, {i + 10, 100});
    EXPECT_TRUE(z_membership(z.b, z.phi));
    EXPECT_EQ(z.phi.rows(), i);
  }
}

TEST(Scaling, CurveStaysInClosureIncludingZero) {
  PrimeField f(7);
  auto t = make_tame(f, 3, 2, {11, 100});
  auto fb = fine_decompose(t.triple, HSplit::standard(3, 2));
  for (long long s = 0; s < 7; ++s) {
    auto g = scaling_curve(fb, f.from_int(s));
    EXPECT_TRUE(cdc_identity_holds(g));
    auto fm = fine_membership(g);
    EXPECT_TRUE(fm.residual_in_s) << "t=" << s;
    EXPECT_EQ(fm.kg, s == 0 ? KgClass::Zero : KgClass::InKGStar) << "t=" << s;
  }
  EXPECT_EQ(scaling_curve(fb, f.one()), fb);
}

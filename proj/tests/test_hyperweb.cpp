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

#include <set>

#include "instanton/forge.hpp"
#include "instanton/hyperweb.hpp"
#include "oracles.hpp"

using namespace instanton;

namespace {

// (ii) brute force: flat(A) (1_n (x) v) has rank n at every point.
bool fibre_oracle(const Hyperweb<PrimeField>& a) {
  const auto& f = a.field();
  const std::size_t n = a.n();
  for (const auto& v : projective_points(f)) {
    oracle::Grid<Fp> iv(4 * n, std::vector<Fp>(n, f.zero()));
    for (std::size_t h = 0; h < n; ++h)
      for (std::size_t k = 0; k < 4; ++k) iv[4 * h + k][h] = v[k];
    auto m = oracle::matmul(oracle::grid(a.flat()), iv, f.zero());
    if (oracle::rank_by_columns(m, f.zero()) != n) return false;
  }
  return true;
}

}  // namespace

TEST(ProjectivePoints, CountOrderAndNormalization) {
  for (std::uint32_t p : {3u, 7u, 11u}) {
    PrimeField f(p);
    auto pts = projective_points(f);
    EXPECT_EQ(pts.size(), std::size_t{p} * p * p + p * p + p + 1);
    std::set<std::array<std::uint32_t, 4>> seen;
    for (const auto& v : pts) {
      std::size_t lead = 0;
      while (is_zero(v[lead])) ++lead;
      EXPECT_EQ(v[lead], f.one());
      seen.insert({v[0].value(), v[1].value(), v[2].value(), v[3].value()});
    }
    EXPECT_EQ(seen.size(), pts.size());
    EXPECT_EQ(pts.front()[0], f.one());
    EXPECT_EQ(pts.back()[3], f.one());
  }
}

TEST(Present, FactorizationHoldsOnRandomHyperwebs) {
  PrimeField f(7);
  RationalField q;
  Rng rng(8);
  for (int t = 0; t < 20; ++t) {
    auto a = random_hyperweb(f, 1 + t % 3, rng);
    auto w = present(a);
    EXPECT_EQ(w.rank, rank(a.flat()));
    EXPECT_EQ(w.c.transpose() * w.q * w.c, a.flat());
    EXPECT_TRUE(w.q.is_skew());
    EXPECT_EQ(rank(w.q), w.rank);
    auto b = gen_rank_drop(q, 2, 6, {static_cast<std::uint64_t>(t + 1), 100});
    auto wb = present(b);
    EXPECT_EQ(wb.rank, 6u);
    EXPECT_EQ(wb.c.transpose() * wb.q * wb.c, b.flat());
  }
  EXPECT_THROW(present(Hyperweb<PrimeField>(TwoFormMatrix<PrimeField>(f, 2, 2, SymmetryTag::Symmetric))), ZeroHyperweb);
}

TEST(CheckInstanton, ChargeOneExhaustive) {
  for (std::uint32_t p : {7u, 11u}) {
    PrimeField f(p);
    auto a = gen_charge1(f, std::nullopt, {1, 100});
    auto rep = check_instanton(a, 1, CheckStrategy::exhaustive());
    EXPECT_TRUE(rep.passed());
    EXPECT_EQ(rep.fiber.kind, FiberStatus::Kind::VerifiedExhaustive);
    EXPECT_EQ(rep.fiber.points, std::size_t{p} * p * p + p * p + p + 1);
    EXPECT_EQ(rep.rank_value, 4u);
    EXPECT_EQ(rep.h0_value, 0u);
    EXPECT_EQ(rep.derived_r(), std::optional<std::size_t>(1));
  }
}

TEST(CheckInstanton, DecomposableFormFailsRank) {
  PrimeField f(7);
  auto a = hyperweb_from_form(f, make_form(f, {1, 0, 0, 0, 0, 0}));
  auto rep = check_instanton(a, 1, CheckStrategy::exhaustive());
  EXPECT_FALSE(rep.passed());
  EXPECT_FALSE(rep.rank_ok);
  EXPECT_EQ(rep.rank_value, 2u);
}

TEST(CheckInstanton, FibreVerdictMatchesBruteForce) {
  PrimeField f(7);
  int agree = 0, failures = 0;
  for (std::uint64_t s = 1; s <= 12; ++s) {
    auto a = gen_rank_drop(f, 2, 6, {s, 100});
    auto rep = check_instanton(a, 1, CheckStrategy::exhaustive());
    bool brute = fibre_oracle(a);
    EXPECT_EQ(rep.fiber.ok(), brute) << "seed " << s;
    agree += rep.fiber.ok() == brute;
    failures += !brute;
    if (!rep.fiber.ok()) {
      // The witness point really drops rank.
      ASSERT_EQ(rep.fiber.witness.size(), 4u);
      Point<PrimeField> v;
      for (std::size_t k = 0; k < 4; ++k) v[k] = f.parse(rep.fiber.witness[k]);
      EXPECT_LT(rank(fiber_map(present(a).c, 2, v)), 2u);
    }
  }
  EXPECT_EQ(agree, 12);
  EXPECT_GT(failures, 0);  // the stratum contains non-instantons
}

TEST(CheckInstanton, RationalSampledWithReductions) {
  RationalField q;
  auto a = hyperweb_from_form(q, make_form(q, {1, 0, 0, 0, 0, 1}));
  auto rep = check_instanton(a, 1, CheckStrategy::sampled(32, {7, 11}, 3));
  EXPECT_TRUE(rep.passed());
  EXPECT_EQ(rep.fiber.kind, FiberStatus::Kind::VerifiedSampled);
  EXPECT_EQ(rep.fiber.primes, (std::vector<std::uint32_t>{7, 11}));
  EXPECT_THROW(check_instanton(a, 1, CheckStrategy::exhaustive()), StrategyMismatch);
  // 7 divides a coefficient's denominator: that reduction is inconclusive, not a failure.
  auto b = hyperweb_from_form(q, make_form(q, {1, 0, 0, 0, 0, 1}));
  TwoForm<RationalField> w = b.body().at(0, 0);
  w[5] = Rational(1, 7);
  auto c = hyperweb_from_form(q, w);
  auto rc = check_instanton(c, 1, CheckStrategy::sampled(16, {7, 11}, 3));
  EXPECT_TRUE(rc.passed());
  EXPECT_EQ(rc.fiber.inconclusive_primes, (std::vector<std::uint32_t>{7}));
}

TEST(CheckInstanton, SymplecticFibreFormHasSize2r) {
  PrimeField f(7);
  auto a = gen_charge1(f, std::nullopt, {2, 100});
  auto w = present(a);
  Rng rng(4);
  for (int t = 0; t < 10; ++t) {
    auto res = fiber_check(w, 1, random_point(f, rng));
    ASSERT_TRUE(res.exact);
    ASSERT_TRUE(res.form.has_value());
    EXPECT_EQ(res.form->rows(), 2u);
    EXPECT_TRUE(res.form->is_skew());
    EXPECT_FALSE(is_zero(pfaffian(*res.form)));
  }
}

TEST(CheckInstanton, BlockSumIsInstantonWithREqualN) {
  PrimeField f(7);
  std::vector<Hyperweb<PrimeField>> parts;
  for (std::uint64_t s = 1; s <= 2; ++s) parts.push_back(gen_charge1(f, std::nullopt, {s, 100}));
  auto a = gen_blocksum(parts);
  auto rep = check_instanton(a, 2, CheckStrategy::exhaustive());
  EXPECT_TRUE(rep.passed());
  EXPECT_EQ(rep.rank_value, 8u);
}

TEST(PropertyStar, SubsetWitnessIsInvertible) {
  PrimeField f(7);
  auto a = make_tame(f, 3, 2, {5, 100}).a;  // H_5, r = 2, subsets of size 3
  auto t = property_star_search(a, 2, 10, 1);
  ASSERT_EQ(t.kind, TameStatus<PrimeField>::Kind::Yes);
  EXPECT_EQ(t.subset.size(), 3u);
  EXPECT_EQ(rank(flatten(restrict_form(a.body(), t.subset))), 12u);
  EXPECT_THROW(property_star_search(gen_charge1(f, std::nullopt, {5, 100}), 1, 10, 1), PreconditionViolation);
  EXPECT_EQ(binomial(5, 2), 10u);
  std::vector<std::size_t> s{0, 1};
  int count = 1;
  while (next_subset(s, 5)) ++count;
  EXPECT_EQ(count, 10);
}

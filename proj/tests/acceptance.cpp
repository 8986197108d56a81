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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

#include "instanton/cli.hpp"
#include "fd_oracle.hpp"
#include "oracles.hpp"

using namespace instanton;

namespace {

struct Outcome {
  bool ok = true;
  std::string failures;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      failures += (ok ? "" : "; ") + what;
      ok = false;
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

template <class F>
bool composition_zero(const MonadData<F>& m) {
  for (std::size_t s = 0; s < 4; ++s)
    for (std::size_t t = s; t < 4; ++t) {
      auto p = m.b().coeff[s] * m.a().coeff[t];
      if (s != t) p = p + m.b().coeff[t] * m.a().coeff[s];
      if (!p.is_zero()) return false;
    }
  return true;
}

void identity_audit(Outcome& o) {
  auto t0 = Clock::now();
  auto t = dimension_identities(50, 49);
  const double secs = seconds_since(t0);
  o.require(t.rows.size() == 48u * 49u / 2u, "row count");
  o.require(t.all_pass(), "an identity row disagrees");
  for (const auto& r : t.rows) {
    const long long n = r.n, k = r.r;
    const long long a = 2 * n * n - n * (4 * k + 1) + k * (2 * k + 1);
    const long long m = 2 * n - k + 1;
    const long long lhs =
        (n - k + 1) * (4 * n + 2 * k + 6) + 6 * (k - 1) * (n - k + 1) + 3 * (k - 1) * k + (8 * n - 8 * k + 5);
    const long long rhs = m * m + 4 * m * (k + 1) - k * (2 * k + 1);
    if (static_cast<long long>(oracle::binom(2 * n - 2 * k, 2)) != a || lhs != rhs) {
      o.require(false, "closed form at n=" + std::to_string(n) + " r=" + std::to_string(k));
      break;
    }
  }
  o.require(secs < 1.0, "took " + std::to_string(secs) + " s");
  o.detail << t.rows.size() << " rows in " << secs << " s";
}

void charge_one(Outcome& o) {
  auto t0 = Clock::now();
  for (std::uint32_t p : {7u, 11u}) {
    PrimeField f(p);
    auto a = gen_charge1(f, std::nullopt, {1, 100});
    auto rep = check_instanton(a, 1, CheckStrategy::exhaustive());
    const std::size_t pts = std::size_t{p} * p * p + p * p + p + 1;
    o.require(rep.passed(), "check over F_" + std::to_string(p));
    o.require(rep.fiber.kind == FiberStatus::Kind::VerifiedExhaustive && rep.fiber.points == pts,
              "exhaustive fibre count over F_" + std::to_string(p));
    auto tan = tangent_dimension(a, 1);
    o.require(tan.tangent_dim == 6 && tan.expected_dim == 6, "tangent over F_" + std::to_string(p));
    o.detail << "F_" << p << ": " << rep.fiber.points << " points, tangent " << tan.tangent_dim << "; ";
  }
  const double secs = seconds_since(t0);
  o.require(secs < 5.0, "took " + std::to_string(secs) + " s");
  o.detail << secs << " s";
}

void tame_generator(Outcome& o) {
  auto t0 = Clock::now();
  PrimeField f(7);
  auto t = make_tame(f, 3, 2, {42, 100});
  o.require(t.a.n() == 5, "A on H_5");
  o.require(rank(t.a.flat()) == 14, "rank(flat) = 14");
  o.require(t.schur_rank == 2, "Schur residual rank 2");
  o.require(t.kg == KgClass::InKGStar, "kg_membership InKGStar");
  o.require(t.report.tame.kind == TameStatus<PrimeField>::Kind::Yes, "property (*) witness");
  o.require(t.report.passed(), "instanton check");
  auto m = monad_from_hyperweb(t.a, 2);
  o.require(chern_of_monad(5, 14, 5) == ChernClass{0, 5, 0} && chern_of_monad(m) == ChernClass{0, 5, 0}, "c2 = 5");
  o.require(t.attempts <= 100, "attempts");
  const double secs = seconds_since(t0);
  o.require(secs < 60.0, "took " + std::to_string(secs) + " s");
  o.detail << "attempts " << t.attempts << ", " << secs << " s";
}

void chart_round_trip(Outcome& o) {
  PrimeField f(7);
  int n_ok = 0;
  for (std::uint64_t s = 1; s <= 25; ++s) {
    auto t = make_tame(f, 3, 2, {s, 100});
    auto a = f_nr_inverse(t.triple, t.xi);
    const bool fwd = f_nr(a, t.xi) == t.triple;
    const bool back = f_nr_inverse(f_nr(t.a, t.xi), t.xi) == t.a && a == t.a;
    o.require(fwd && back, "seed " + std::to_string(s));
    n_ok += fwd && back;
  }
  o.detail << n_ok << "/25 seeds bit-exact both ways";
}

void z_and_scaling(Outcome& o) {
  PrimeField f7(7);
  for (std::size_t i : {2u, 3u}) {
    auto z = gen_z_point(f7, i, ZMode::InverseTrick, {i, 100});
    o.require(z_membership(z.b, z.phi), "inverse_trick i=" + std::to_string(i));
  }
  // 20 distinct t need a field larger than F_7; the fine blocks come from a
  // rational tame triple.
  RationalField q;
  auto t = make_tame(q, 3, 2, {1, 20});
  auto fb = fine_decompose(t.triple, HSplit::standard(3, 2));
  int sampled = 0;
  for (long k = 0; sampled < 20; ++k, ++sampled) {
    Rational tv = k == 0 ? Rational(0) : Rational(k % 2 ? (k + 1) / 2 : -(k / 2), 1 + k % 3);
    tv.canonicalize();
    auto g = scaling_curve(fb, tv);
    auto fm = fine_membership(g);
    const KgClass want = k == 0 ? KgClass::Zero : KgClass::InKGStar;
    o.require(cdc_identity_holds(g) && fm.residual_in_s && fm.kg == want, "scaling at t=" + tv.get_str());
  }
  Rng rng(77);
  int cdc_ok = 0;
  for (int s = 0; s < 50; ++s) {
    std::size_t n = 2 + s % 3, r = 2 + draw_below(rng, n - 1);
    auto b = random_fine_blocks(f7, n, r, rng);
    auto c = oracle::grid(fine_c(b));
    auto lhs = oracle::matmul(oracle::matmul(oracle::transpose(c), oracle::grid(fine_inverse_form(b)), f7.zero()), c,
                              f7.zero());
    const bool ok = cdc_identity_holds(b) && oracle::same(lhs, oracle::grid(cdc_expansion(b)));
    cdc_ok += ok;
  }
  o.require(cdc_ok == 50, "CDC on " + std::to_string(50 - cdc_ok) + " tuples");
  o.detail << "z_membership i=2,3; " << sampled << " t values over Q; CDC " << cdc_ok << "/50";
}

void thooft_pipeline(Outcome& o) {
  auto t0 = Clock::now();
  for (std::size_t i : {2u, 3u}) {
    cli::ThooftOptions opt;
    opt.common.seed = 1;
    opt.i = i;
    auto res = cli::cmd_thooft(opt);
    const std::string tag = "--i " + std::to_string(i);
    if (res.exit_code != cli::kPass) {
      o.require(false, tag + " exit " + std::to_string(res.exit_code));
      continue;
    }
    const auto& r = res.report["results"];
    const long long c2 = r["chern"]["c2"].get<long long>();
    o.require(c2 == 2 * static_cast<long long>(i) - 1, tag + " c2");
    if (i == 2) o.require(r["h0_E2_1"].get<std::size_t>() >= 1, tag + " h0(E(1)) >= 1");
    o.require(r["euler_crosscheck"].get<bool>(), tag + " euler crosscheck");
    for (long long k = -3; k <= 3; ++k)
      o.require(euler_of_terms(thooft_terms(i), k) == oracle::hrr_chi(2, c2, k), tag + " chi oracle");
    o.detail << tag << ": c2 " << c2 << ", h0 " << r["h0_E2_1"] << "; ";
  }
  const double secs = seconds_since(t0);
  o.require(secs < 120.0, "took " + std::to_string(secs) + " s");
  o.detail << secs << " s";
}

void monad_suite(Outcome& o) {
  PrimeField f(7);
  auto c1 = monad_from_hyperweb(gen_charge1(f, std::nullopt, {1, 100}), 1);
  auto tame = monad_from_hyperweb(make_tame(f, 3, 2, {2, 100}).a, 2);
  std::vector<Hyperweb<PrimeField>> parts{gen_charge1(f, std::nullopt, {3, 100}),
                                          gen_charge1(f, std::nullopt, {4, 100})};
  auto sum = monad_from_hyperweb(gen_blocksum(parts), 2);
  o.require(composition_zero(c1) && composition_zero(tame) && composition_zero(sum), "b o a = 0");
  for (const auto* m : {&c1, &tame, &sum})
    for (const auto& term : monad_terms(m->h_left(), m->w(), m->h_right()))
      for (int qd = 0; qd <= 3; ++qd)
        if (cohomology_table(term.twist - 2, qd) != 0)
          o.require(false, "E(-2) term O(" + std::to_string(term.twist - 2) + ")");
  o.require(h0_twist(c1, 1) == 5 && euler_characteristic(c1, 1) == 5, "h0(E(1)) = 5 = chi");
  Rng rng(9);
  int forms = 0;
  while (forms < 10) {
    auto v = random_point(f, rng);
    if (!is_exact_fiber(tame, v)) {
      o.require(false, "non-exact fibre on a checked instanton");
      break;
    }
    auto form = symplectic_fiber_form(tame, v);
    o.require(form.is_skew() && rank(form) == form.rows(), "fibre form skew and invertible");
    ++forms;
  }
  o.detail << "3 monads, " << forms << " fibre forms";
}

void tangent_bound(Outcome& o) {
  PrimeField f(7);
  int checked = 0, equal = 0, tame_samples = 0;
  auto see = [&](const TangentReport& rep) {
    ++checked;
    o.require(rep.tangent_dim >= rep.expected_dim, "tangent below expected");
  };
  see(tangent_dimension(gen_charge1(f, std::nullopt, {1, 100}), 1));
  std::vector<Hyperweb<PrimeField>> parts{gen_charge1(f, std::nullopt, {1, 100}),
                                          gen_charge1(f, std::nullopt, {2, 100})};
  see(tangent_dimension(gen_blocksum(parts), 2));
  for (std::uint64_t s = 1; s <= 10; ++s) {
    auto rep = tangent_dimension(make_tame(f, 3, 2, {s, 100}).a, 2);
    o.require(rep.expected_dim == 5 * 5 + 4 * 5 * 3 - 2 * 5, "expected dim for (3,2)");
    see(rep);
    ++tame_samples;
    equal += rep.tangent_dim == rep.expected_dim;
  }
  see(tangent_dimension(make_tame(RationalField{}, 3, 2, {1, 20}).a, 2));
  o.detail << checked << " hyperwebs; equality on " << equal << "/" << tame_samples << " make_tame(3,2) samples";
}

void oracle_suite(Outcome& o) {
  RationalField q;
  PrimeField f(11);
  Rng rng(2026);
  int pf_ok = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 * (1 + t % 5);
    if (t % 2) {
      auto a = random_skew(q, n, rng);
      Rational pf = pfaffian(a);
      Rational pf2 = pf * pf;
      auto g = oracle::grid(a);
      pf_ok += pf2 == determinant(a) && pf == oracle::pfaffian_recursive(g, q.zero(), q.one());
    } else {
      auto a = random_skew(f, n, rng);
      auto pf = pfaffian(a);
      pf_ok += pf * pf == determinant(a);
    }
  }
  o.require(pf_ok == 200, "pf^2 = det");

  auto tq = make_tame(q, 3, 2, {1, 20});
  auto eq = local_equations(tq.a, 2);
  int jac_ok = 0;
  for (int d = 0; d < 10; ++d) {
    auto x = flatten(random_two_form_matrix(q, 5, 5, SymmetryTag::Symmetric, rng));
    jac_ok += directional_derivative(eq, tq.a, x) == oracle::fd_derivative(eq, tq.a.flat(), x);
  }
  o.require(jac_ok == 10, "dual Jacobian vs finite differences");

  int flat_ok = 0, block_ok = 0;
  for (int t = 0; t < 100; ++t) {
    std::size_t r = 1 + draw_below(rng, 4), c = 1 + draw_below(rng, 4);
    auto g = random_two_form_matrix(f, r, c, SymmetryTag::General, rng);
    auto s = random_two_form_matrix(q, r, r, SymmetryTag::Symmetric, rng);
    flat_ok += unflatten(flatten(g), r, c, SymmetryTag::General) == g &&
               unflatten(flatten(s), r, r, SymmetryTag::Symmetric) == s;

    std::size_t n = 1 + draw_below(rng, 4);
    std::size_t k = 1 + draw_below(rng, n);
    DecompositionXi xi{n, k, random_subset(2 * n + 1 - k, n, rng), {}};
    std::vector<bool> in(xi.total(), false);
    for (auto i : xi.first) in[i] = true;
    for (std::size_t i = 0; i < xi.total(); ++i)
      if (!in[i]) xi.second.push_back(i);
    auto a = random_hyperweb(f, xi.total(), rng);
    block_ok += block_compose(block_decompose(a, xi), xi) == a;
  }
  o.require(flat_ok == 100 && block_ok == 100, "round trips");
  o.detail << "pf " << pf_ok << "/200, jacobian " << jac_ok << "/10, flatten " << flat_ok << "/100, blocks "
           << block_ok << "/100";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"identity audit", identity_audit},   {"charge-1 instanton", charge_one},
      {"tame generator", tame_generator},   {"chart round trip", chart_round_trip},
      {"Z and scaling", z_and_scaling},     {"'t Hooft pipeline", thooft_pipeline},
      {"monad suite", monad_suite},         {"tangent bound", tangent_bound},
      {"oracle suite", oracle_suite},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      criteria[k].second(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    failed += !o.ok;
    std::cout << (o.ok ? "PASS" : "FAIL") << " criterion " << k + 1 << " (" << criteria[k].first
              << "): " << o.detail.str();
    if (!o.ok) std::cout << " | failed: " << o.failures;
    std::cout << std::endl;
  }
  return failed == 0 ? 0 : 1;
}

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

#include <cstdio>
#include <filesystem>

#include "instanton/cli.hpp"

using namespace instanton;

namespace {

std::string sample(const std::string& name) { return std::string(INSTANTON_SAMPLES_DIR) + "/" + name; }

cli::Common seeded(std::uint64_t s) {
  cli::Common c;
  c.seed = s;
  return c;
}

}  // namespace

TEST(Io, HyperwebRoundTrip) {
  PrimeField f(7);
  auto a = gen_rank_drop(f, 3, 10, {4, 100});
  auto doc = io::hyperweb_json(a);
  auto back = std::get<Hyperweb<PrimeField>>(io::parse_hyperweb(doc.dump()));
  EXPECT_EQ(io::hyperweb_json(back).dump(), doc.dump());

  RationalField q;
  TwoForm<RationalField> w{Rational(1, 3), 0, 0, 0, 0, -2};
  auto c = hyperweb_from_form(q, w);
  auto qdoc = io::hyperweb_json(c);
  auto qback = std::get<Hyperweb<RationalField>>(io::parse_hyperweb(qdoc.dump()));
  EXPECT_EQ(io::hyperweb_json(qback).dump(), qdoc.dump());
}

TEST(Io, RejectsBadDocuments) {
  const std::string good_form = R"(["1","0","0","0","0","1"])";
  auto doc = [&](const std::string& field, const std::string& entries) {
    return R"({"field":)" + field + R"(,"n":2,"entries":)" + entries + "}";
  };
  const std::string grid = "[[" + good_form + "," + good_form + "],[null," + good_form + "]]";
  EXPECT_NO_THROW(io::parse_hyperweb(doc(R"({"kind":"Fp","p":7})", grid)));
  const std::string mirror_bad =
      "[[" + good_form + "," + good_form + R"(],[["2","0","0","0","0","1"],)" + good_form + "]]";
  EXPECT_THROW(io::parse_hyperweb(doc(R"({"kind":"Fp","p":7})", mirror_bad)), ParseError);
  EXPECT_THROW(io::parse_hyperweb(doc(R"({"kind":"Fp","p":8})", grid)), ParseError);
  EXPECT_THROW(io::parse_hyperweb(doc(R"({"kind":"R"})", grid)), ParseError);
  EXPECT_THROW(io::parse_hyperweb(doc(R"({"kind":"Q"})", "[[1]]")), ParseError);
  EXPECT_THROW(io::parse_hyperweb("{not json"), ParseError);
  EXPECT_THROW(io::load_hyperweb(sample("malformed.json")), ParseError);
  EXPECT_THROW(io::load_hyperweb(sample("does_not_exist.json")), ParseError);
}

TEST(Io, ZPointRoundTrip) {
  PrimeField f(7);
  auto z = gen_z_point(f, 2, ZMode::Isotropic, {5, 100});
  auto doc = io::zpoint_json(f, 2, z.b, z.phi, {0});
  auto back = std::get<ThooftInput<PrimeField>>(io::parse_zpoint(doc.dump()));
  EXPECT_EQ(back.b, z.b);
  EXPECT_EQ(back.phi, z.phi);
  EXPECT_EQ(back.j, (std::vector<std::size_t>{0}));
}

TEST(Cli, CheckExitCodes) {
  cli::CheckOptions o;
  o.common = seeded(1);
  o.file = sample("charge1_f7.json");
  auto ok = cli::cmd_check(o);
  EXPECT_EQ(ok.exit_code, cli::kPass);
  EXPECT_EQ(ok.report["command"], "check");

  o.file = sample("charge1_q.json");
  EXPECT_EQ(cli::cmd_check(o).exit_code, cli::kPass);

  o.file = sample("rank2_form.json");
  auto bad = cli::cmd_check(o);
  EXPECT_EQ(bad.exit_code, cli::kFail);
  EXPECT_TRUE(bad.report.contains("witness"));

  o.file = sample("malformed.json");
  EXPECT_EQ(cli::cmd_check(o).exit_code, cli::kUsage);

  o.file = sample("tame_5_2_f7.json");
  o.r = 2;
  o.tame = true;
  EXPECT_EQ(cli::cmd_check(o).exit_code, cli::kPass);
}

TEST(Cli, GenIsReproducibleAndValidatesRanges) {
  cli::GenOptions g;
  g.common = seeded(42);
  g.kind = "tame";
  g.n = 3;
  g.r = 2;
  auto a = cli::cmd_gen(g);
  auto b = cli::cmd_gen(g);
  ASSERT_EQ(a.exit_code, cli::kPass);
  EXPECT_EQ(a.report["document"].dump(), b.report["document"].dump());

  g.n = 2;
  EXPECT_EQ(cli::cmd_gen(g).exit_code, cli::kUsage);

  auto tmp = std::filesystem::temp_directory_path() / "instanton_gen_test.json";
  g.kind = "charge1";
  g.out = tmp.string();
  ASSERT_EQ(cli::cmd_gen(g).exit_code, cli::kPass);
  cli::CheckOptions c;
  c.file = tmp.string();
  EXPECT_EQ(cli::cmd_check(c).exit_code, cli::kPass);
  std::filesystem::remove(tmp);
}

TEST(Cli, AuditTangentThooft) {
  cli::AuditOptions au;
  EXPECT_EQ(cli::cmd_audit(au).exit_code, cli::kPass);
  au.inject_off_by_one = true;
  auto neg = cli::cmd_audit(au);
  EXPECT_EQ(neg.exit_code, cli::kFail);
  EXPECT_TRUE(neg.report.contains("witness"));

  cli::TangentOptions t;
  t.file = sample("charge1_f7.json");
  EXPECT_EQ(cli::cmd_tangent(t).exit_code, cli::kPass);
  t.file = sample("rank2_form.json");
  EXPECT_EQ(cli::cmd_tangent(t).exit_code, cli::kFail);

  cli::ThooftOptions th;
  th.file = sample("zpoint_i2_f7.json");
  EXPECT_EQ(cli::cmd_thooft(th).exit_code, cli::kPass);
  th.file = sample("zpoint_i2_degenerate_f7.json");
  auto deg = cli::cmd_thooft(th);
  EXPECT_EQ(deg.exit_code, cli::kFail);
  EXPECT_TRUE(deg.report.contains("witness"));
}

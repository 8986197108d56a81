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

#include <iostream>

#include <CLI11.hpp>

#include "instanton/cli.hpp"

using namespace instanton;

namespace {

void add_common(CLI::App* app, cli::Common& c) {
  app->add_option("--seed", c.seed, "RNG seed (default: $INSTANTON_SEED or 20260101)");
  app->add_flag("--timings", c.timings, "Add wall-clock timings to the report");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"instanton: exact workbench for hyperwebs of quadrics and their monads"};
  app.set_version_flag("--version", std::string(cli::kToolVersion));
  app.require_subcommand(1);
  app.allow_windows_style_options(false);

  cli::CheckOptions check;
  auto* c = app.add_subcommand("check", "Verify the instanton conditions for a hyperweb file");
  c->add_option("file", check.file, "Hyperweb file")->required();
  c->add_option("--r", check.r, "Rank parameter r");
  c->add_option("--strategy", check.strategy, "exhaustive | sampled:N");
  c->add_option("--primes", check.primes, "Primes for exhaustive reduction checks over Q")->delimiter(',');
  c->add_flag("--tame", check.tame, "Also search for a property (*) witness");
  add_common(c, check.common);

  cli::GenOptions gen;
  auto* g = app.add_subcommand("gen", "Generate a hyperweb or Z-point file");
  g->add_option("kind", gen.kind, "charge1 | blocksum | rankdrop | tame | zpoint")
      ->required()
      ->check(CLI::IsMember({"charge1", "blocksum", "rankdrop", "tame", "zpoint"}));
  g->add_option("--field", gen.field, "Q | Fp")->check(CLI::IsMember({"Q", "Fp"}));
  g->add_option("--p", gen.p, "Prime for Fp");
  g->add_option("--n", gen.n, "n (blocksum, rankdrop, tame)");
  g->add_option("--r", gen.r, "r (tame)");
  g->add_option("--i", gen.i, "i (zpoint)");
  g->add_option("--target", gen.target, "Target rank (rankdrop, default 4n-2)");
  g->add_option("--mode", gen.mode, "zpoint mode: zero_phi | inverse_trick | random_reject | isotropic");
  g->add_option("--attempts", gen.attempts, "Attempt limit");
  g->add_option("--out", gen.out, "Output file (default: embed in the report)");
  add_common(g, gen.common);

  cli::AuditOptions audit;
  auto* a = app.add_subcommand("audit", "Check the dimension identities");
  a->add_option("--n-max", audit.n_max, "Largest n");
  a->add_option("--r-max", audit.r_max, "Largest r");
  a->add_flag("--inject-off-by-one", audit.inject_off_by_one, "Test hook: perturb one identity");
  add_common(a, audit.common);

  cli::TangentOptions tangent;
  auto* t = app.add_subcommand("tangent", "Zariski tangent dimension at a hyperweb");
  t->add_option("file", tangent.file, "Hyperweb file")->required();
  t->add_option("--r", tangent.r, "Rank parameter r");
  add_common(t, tangent.common);

  cli::ThooftOptions thooft;
  auto* h = app.add_subcommand("thooft", "Build a 't Hooft monad from a point of Z_i");
  h->add_option("--i", thooft.i, "i (c2 = 2i-1)");
  h->add_option("--p", thooft.p, "Prime field for generation");
  h->add_option("--mode", thooft.mode, "Z-point generator (isotropic | inverse_trick | zero_phi)");
  h->add_option("--file", thooft.file, "Z-point file instead of generation");
  add_common(h, thooft.common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : cli::kUsage;
  }

  cli::CmdResult res;
  if (*c) res = cli::cmd_check(check);
  else if (*g) res = cli::cmd_gen(gen);
  else if (*a) res = cli::cmd_audit(audit);
  else if (*t) res = cli::cmd_tangent(tangent);
  else res = cli::cmd_thooft(thooft);
  std::cout << res.report.dump(2) << "\n";
  return res.exit_code;
}

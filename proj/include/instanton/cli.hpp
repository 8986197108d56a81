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

// Command implementations behind the `instanton` tool. Each command returns
// its exit code and a report; main() only parses flags and prints.
// Exit codes: 0 pass, 1 mathematical failure, 2 usage or parse error.

#pragma once

#include <chrono>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "instanton/forge.hpp"
#include "instanton/io.hpp"
#include "instanton/tangent.hpp"
#include "instanton/thooft.hpp"

namespace instanton::cli {

inline constexpr const char* kToolVersion = "0.1.0";

enum Exit : int { kPass = 0, kFail = 1, kUsage = 2 };

struct CmdResult {
  int exit_code = kPass;
  Json report;
};

/// Thrown for bad flag combinations; maps to exit 2.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct Common {
  std::optional<std::uint64_t> seed;
  bool timings = false;
  std::uint64_t resolved_seed() const { return seed ? *seed : default_seed(); }
};

inline Json base_report(const std::string& command, std::uint64_t seed) {
  Json j;
  j["command"] = command;
  j["tool_version"] = kToolVersion;
  j["seed"] = seed;
  return j;
}

inline CmdResult fail(Json report, int code, const std::string& kind, const std::string& message) {
  report["status"] = code == kUsage ? "usage_error" : "fail";
  report["error"] = {{"kind", kind}, {"message", message}};
  return {code, std::move(report)};
}

/// Runs `body` with the exit-code mapping and optional timings.
inline CmdResult run(const std::string& command, const Common& common,
                     const std::function<CmdResult(Json&)>& body) {
  const auto seed = common.resolved_seed();
  Json report = base_report(command, seed);
  const auto t0 = std::chrono::steady_clock::now();
  CmdResult res;
  try {
    res = body(report);
  } catch (const ParseError& e) {
    res = fail(report, kUsage, "parse", e.what());
  } catch (const UsageError& e) {
    res = fail(report, kUsage, "usage", e.what());
  } catch (const PreconditionViolation& e) {
    res = fail(report, kUsage, "usage", e.what());
  } catch (const StrategyMismatch& e) {
    res = fail(report, kUsage, "usage", e.what());
  } catch (const GeneratorFailed& e) {
    res = fail(report, kFail, "generator_failed", e.what());
    res.report["error"]["log"] = e.log();
  } catch (const DegenerateThooftMonad& e) {
    res = fail(report, kFail, "degenerate_monad", e.what());
    // witness is "[x0,x1,x2,x3]"
    Json pt = Json::array();
    std::string w = e.witness();
    std::string cur;
    for (char ch : w.substr(1, w.size() > 1 ? w.size() - 2 : 0)) {
      if (ch == ',') {
        pt.push_back(cur);
        cur.clear();
      } else {
        cur += ch;
      }
    }
    if (!cur.empty()) pt.push_back(cur);
    res.report["witness"] = {{"kind", "point"}, {"point", pt}};
  } catch (const Error& e) {
    res = fail(report, kFail, "math", e.what());
  }
  if (common.timings) {
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    res.report["timings"] = {{"total_ms", ms}};
  }
  return res;
}

inline CheckStrategy parse_strategy(const std::string& s, const std::vector<std::uint32_t>& primes,
                                    std::uint64_t seed) {
  if (s == "exhaustive") {
    CheckStrategy c = CheckStrategy::exhaustive();
    c.primes = primes;
    c.seed = seed;
    return c;
  }
  const std::string pre = "sampled:";
  if (s.rfind(pre, 0) == 0) {
    const std::string num = s.substr(pre.size());
    if (num.empty() || num.find_first_not_of("0123456789") != std::string::npos || num.size() > 9)
      throw UsageError("--strategy sampled:N needs a positive integer N");
    auto n = static_cast<std::size_t>(std::stoul(num));
    if (n == 0) throw UsageError("--strategy sampled:N needs N >= 1");
    return CheckStrategy::sampled(n, primes, seed);
  }
  throw UsageError("--strategy must be 'exhaustive' or 'sampled:N'");
}

/// Any library error raised while reading input counts as a parse error.
template <class Fn>
auto parse_input(Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
}

inline void write_document(const std::string& path, const Json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << doc.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// check

struct CheckOptions {
  Common common;
  std::string file;
  std::size_t r = 1;
  std::string strategy = "exhaustive";
  std::vector<std::uint32_t> primes{7, 11};
  bool tame = false;
};

inline CmdResult cmd_check(const CheckOptions& o) {
  return run("check", o.common, [&](Json& rep) -> CmdResult {
    auto a = parse_input([&] { return io::load_hyperweb(o.file); });
    if (o.r < 1) throw UsageError("--r must be >= 1");
    for (auto p : o.primes)
      if (!is_prime(p)) throw UsageError("--primes: " + std::to_string(p) + " is not prime");
    auto strat = parse_strategy(o.strategy, o.primes, o.common.resolved_seed());
    strat.search_tame = o.tame;
    return std::visit(
        [&](const auto& h) -> CmdResult {
          using F = std::decay_t<decltype(h.field())>;
          rep["field"] = h.field().spec().to_string();
          CheckStrategy s = strat;
          if constexpr (std::is_same_v<F, RationalField>) {
            // Over Q "exhaustive" means sampled Q-points plus exhaustive scans of each reduction.
            if (s.kind == CheckStrategy::Kind::ExhaustiveFp) {
              s = CheckStrategy::sampled(64, o.primes, strat.seed);
              s.search_tame = o.tame;
              rep["strategy_note"] = "Q: 64 sampled points, exhaustive over each listed prime";
            }
          }
          auto r = check_instanton(h, o.r, s);
          rep["results"] = io::report_json(r);
          if (r.passed()) {
            rep["status"] = "pass";
            return {kPass, rep};
          }
          rep["status"] = "fail";
          rep["witness"] = io::failure_witness(r);
          return {kFail, rep};
        },
        a);
  });
}

// ---------------------------------------------------------------------------
// gen

struct GenOptions {
  Common common;
  std::string kind;
  std::string field = "Fp";
  std::uint32_t p = 7;
  std::size_t n = 0, r = 0, i = 0, target = 0;
  std::string mode = "isotropic";
  std::size_t attempts = 100;
  std::string out;
};

inline ZMode parse_zmode(const std::string& s) {
  if (s == "zero_phi") return ZMode::ZeroPhi;
  if (s == "inverse_trick") return ZMode::InverseTrick;
  if (s == "random_reject") return ZMode::RandomReject;
  if (s == "isotropic") return ZMode::Isotropic;
  throw UsageError("--mode must be zero_phi, inverse_trick, random_reject or isotropic");
}

template <ExactField F>
Json gen_document(const F& f, const GenOptions& o, std::uint64_t seed, Json& rep) {
  GeneratorSeed gs{seed, o.attempts};
  Json meta{{"generator", o.kind}, {"seed", seed}};
  if (o.kind == "charge1") {
    auto a = gen_charge1(f, std::nullopt, gs);
    meta["r"] = 1;
    return io::hyperweb_json(a, meta);
  }
  if (o.kind == "blocksum") {
    if (o.n < 1) throw UsageError("gen blocksum needs --n >= 1");
    std::vector<Hyperweb<F>> parts;
    for (std::size_t k = 0; k < o.n; ++k) parts.push_back(gen_charge1(f, std::nullopt, {seed + k, o.attempts}));
    meta["r"] = o.n;
    return io::hyperweb_json(gen_blocksum(parts), meta);
  }
  if (o.kind == "rankdrop") {
    if (o.n < 1) throw UsageError("gen rankdrop needs --n >= 1");
    const std::size_t target = o.target ? o.target : 4 * o.n - 2;
    auto a = gen_rank_drop(f, o.n, target, gs);
    meta["rank"] = target;
    return io::hyperweb_json(a, meta);
  }
  if (o.kind == "tame") {
    if (o.r < 2 || o.r + 1 > o.n) throw UsageError("gen tame needs 2 <= r <= n-1");
    auto t = make_tame(f, o.n, o.r, gs);
    meta["n_param"] = o.n;
    meta["r"] = o.r;
    meta["schur_rank"] = t.schur_rank;
    meta["kg"] = to_string(t.kg);
    meta["attempts"] = t.attempts;
    rep["results"] = {{"hyperweb_n", t.a.n()}, {"r", o.r}, {"attempts", t.attempts},
                      {"schur_rank", t.schur_rank}, {"kg", to_string(t.kg)},
                      {"check", io::report_json(t.report)}};
    return io::hyperweb_json(t.a, meta);
  }
  if (o.kind == "zpoint") {
    if (o.i < 1) throw UsageError("gen zpoint needs --i >= 1");
    auto mode = parse_zmode(o.mode);
    auto z = gen_z_point(f, o.i, mode, gs);
    meta["mode"] = to_string(mode);
    meta["attempts"] = z.attempts;
    return io::zpoint_json(f, o.i, z.b, z.phi, iota(o.i - 1), meta);
  }
  throw UsageError("unknown generator '" + o.kind + "'");
}

inline CmdResult cmd_gen(const GenOptions& o) {
  return run("gen", o.common, [&](Json& rep) -> CmdResult {
    const auto seed = o.common.resolved_seed();
    rep["kind"] = o.kind;
    Json doc;
    if (o.field == "Q") {
      rep["field"] = "Q";
      doc = gen_document(RationalField{}, o, seed, rep);
    } else if (o.field == "Fp") {
      if (!is_prime(o.p) || o.p > 0x7fffffffu) throw UsageError("--p must be a prime below 2^31");
      PrimeField f(o.p);
      rep["field"] = f.spec().to_string();
      doc = gen_document(f, o, seed, rep);
    } else {
      throw UsageError("--field must be Q or Fp");
    }
    if (o.out.empty()) {
      rep["document"] = doc;
    } else {
      write_document(o.out, doc);
      rep["out"] = o.out;
    }
    rep["status"] = "pass";
    return {kPass, rep};
  });
}

// ---------------------------------------------------------------------------
// audit

struct AuditOptions {
  Common common;
  long long n_max = 50, r_max = 49;
  bool inject_off_by_one = false;  // negative control
};

inline CmdResult cmd_audit(const AuditOptions& o) {
  return run("audit", o.common, [&](Json& rep) -> CmdResult {
    if (o.n_max < 2 || o.r_max < 2) throw UsageError("--n-max and --r-max must be >= 2");
    auto t = dimension_identities(o.n_max, o.r_max, o.inject_off_by_one);
    rep["results"] = io::report_json(t, 20);
    if (o.inject_off_by_one) rep["injected_off_by_one"] = true;
    if (t.all_pass()) {
      rep["status"] = "pass";
      return {kPass, rep};
    }
    rep["status"] = "fail";
    for (const auto& row : t.rows)
      if (!row.ok()) {
        rep["witness"] = {{"kind", "index"}, {"n", row.n}, {"r", row.r}};
        break;
      }
    return {kFail, rep};
  });
}

// ---------------------------------------------------------------------------
// tangent

struct TangentOptions {
  Common common;
  std::string file;
  std::size_t r = 1;
};

inline CmdResult cmd_tangent(const TangentOptions& o) {
  return run("tangent", o.common, [&](Json& rep) -> CmdResult {
    auto a = parse_input([&] { return io::load_hyperweb(o.file); });
    if (o.r < 1) throw UsageError("--r must be >= 1");
    return std::visit(
        [&](const auto& h) -> CmdResult {
          rep["field"] = h.field().spec().to_string();
          std::size_t rk = rank(h.flat());
          if (rk != 2 * h.n() + 2 * o.r) {
            rep["status"] = "fail";
            rep["witness"] = {{"kind", "rank"}, {"value", rk}, {"expected", 2 * h.n() + 2 * o.r},
                              {"text", "rank " + std::to_string(rk) + " ≠ " + std::to_string(2 * h.n() + 2 * o.r)}};
            return {kFail, rep};
          }
          auto t = tangent_dimension(h, o.r);
          rep["results"] = io::report_json(t);
          rep["status"] = "pass";
          return {kPass, rep};
        },
        a);
  });
}

// ---------------------------------------------------------------------------
// thooft

struct ThooftOptions {
  Common common;
  std::size_t i = 2;
  std::uint32_t p = 7;
  std::string mode = "isotropic";  // or inverse_trick / zero_phi (these degenerate)
  std::string file;                // optional z-point file instead of generation
};

template <ExactField F>
CmdResult thooft_finish(Json& rep, const ThooftResult<F>& r, std::size_t i) {
  rep["results"] = io::report_json(r);
  if (i == 1) rep["note"] = "i = 1: H_0 = 0, the monad is trivial and E_2(z) = E_2";
  rep["status"] = "pass";
  return {kPass, rep};
}

inline CmdResult cmd_thooft(const ThooftOptions& o) {
  return run("thooft", o.common, [&](Json& rep) -> CmdResult {
    const auto seed = o.common.resolved_seed();
    if (!o.file.empty()) {
      auto z = parse_input([&] { return io::parse_zpoint(io::read_file(o.file)); });
      return std::visit(
          [&](const auto& in) -> CmdResult {
            using F = std::decay_t<decltype(in.b.field())>;
            rep["field"] = in.b.field().spec().to_string();
            rep["source"] = o.file;
            auto r = thooft_monad(in, default_strategy<F>(seed));
            return thooft_finish(rep, r, in.i);
          },
          z);
    }
    if (o.i < 1) throw UsageError("--i must be >= 1");
    if (!is_prime(o.p) || o.p > 0x7fffffffu) throw UsageError("--p must be a prime below 2^31");
    PrimeField f(o.p);
    rep["field"] = f.spec().to_string();
    auto mode = parse_zmode(o.mode);
    rep["mode"] = to_string(mode);
    const auto strat = CheckStrategy::exhaustive();
    if (mode == ZMode::Isotropic) {
      auto run = gen_thooft_input(f, o.i, {seed, 100}, strat);
      rep["z_points_tried"] = run.z_points_tried;
      rep["degenerate_z_points"] = run.degenerate;
      return thooft_finish(rep, run.result, o.i);
    }
    auto zp = gen_z_point(f, o.i, mode, {seed, 100});
    ThooftInput<PrimeField> in{o.i, zp.b, zp.phi, iota(o.i - 1)};
    return thooft_finish(rep, thooft_monad(in, strat), o.i);
  });
}

}  // namespace instanton::cli

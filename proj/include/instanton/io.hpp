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

// Text serialization: hyperweb and Z-point files, report objects.
//
// Files are JSON. Field: {"kind":"Q"} or {"kind":"Fp","p":7}. Scalars are
// strings "a" or "a/b" (over F_p they are reduced on read and written as
// residues). 2-forms are 6-vectors in the order (01,02,03,12,13,23).

#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "instanton/hyperweb.hpp"
#include "instanton/monad.hpp"
#include "instanton/tangent.hpp"
#include "instanton/thooft.hpp"

namespace instanton {

using Json = nlohmann::ordered_json;

using AnyField = std::variant<RationalField, PrimeField>;
using AnyHyperweb = std::variant<Hyperweb<RationalField>, Hyperweb<PrimeField>>;
using AnyThooftInput = std::variant<ThooftInput<RationalField>, ThooftInput<PrimeField>>;

namespace io {

inline Json field_json(const RationalField&) { return Json{{"kind", "Q"}}; }
inline Json field_json(const PrimeField& f) { return Json{{"kind", "Fp"}, {"p", f.p}}; }

inline AnyField parse_field(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) throw ParseError("field: missing kind");
  auto kind = j["kind"].get<std::string>();
  if (kind == "Q") return RationalField{};
  if (kind == "Fp") {
    if (!j.contains("p") || !j["p"].is_number_unsigned()) throw ParseError("field: Fp needs a positive integer p");
    auto p = j["p"].get<std::uint64_t>();
    if (p > 0x7fffffffULL || !is_prime(static_cast<std::uint32_t>(p)))
      throw ParseError("field: p = " + std::to_string(p) + " is not a supported prime");
    return PrimeField(static_cast<std::uint32_t>(p));
  }
  throw ParseError("field: unknown kind '" + kind + "'");
}

template <ExactField F>
typename F::value_type parse_scalar(const F& f, const Json& j) {
  if (j.is_string()) return f.parse(j.get<std::string>());
  if (j.is_number_integer()) return f.from_int(j.get<long long>());
  throw ParseError("scalar must be a string 'a' or 'a/b' or an integer");
}

template <ExactField F>
TwoForm<F> parse_form(const F& f, const Json& j) {
  if (!j.is_array() || j.size() != 6) throw ParseError("2-form must be an array of 6 scalars");
  TwoForm<F> w = zero_form(f);
  for (std::size_t k = 0; k < 6; ++k) w[k] = parse_scalar(f, j[k]);
  return w;
}

template <ExactField F>
Json form_json(const TwoForm<F>& w) {
  Json a = Json::array();
  for (const auto& x : w) a.push_back(to_string(x));
  return a;
}

template <ExactField F>
Json matrix_json(const Matrix<F>& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_string(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <ExactField F>
Matrix<F> parse_matrix(const F& f, const Json& j, std::size_t rows, std::size_t cols, const char* what) {
  if (!j.is_array() || j.size() != rows) throw ParseError(std::string(what) + ": expected " + std::to_string(rows) + " rows");
  Matrix<F> m(f, rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      throw ParseError(std::string(what) + ": row " + std::to_string(r) + " needs " + std::to_string(cols) + " entries");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = parse_scalar(f, j[r][c]);
  }
  return m;
}

/// Upper triangle is enough; a lower entry may be null or must equal its mirror.
template <ExactField F>
Hyperweb<F> parse_hyperweb_body(const F& f, const Json& doc) {
  if (!doc.contains("n") || !doc["n"].is_number_unsigned()) throw ParseError("hyperweb: missing n");
  const auto n = doc["n"].get<std::size_t>();
  if (n < 1) throw ParseError("hyperweb: n must be >= 1");
  const Json& e = doc.contains("entries") ? doc["entries"] : Json();
  if (!e.is_array() || e.size() != n) throw ParseError("hyperweb: entries must have n rows");
  TwoFormMatrix<F> body(f, n, n, SymmetryTag::Symmetric);
  for (std::size_t i = 0; i < n; ++i) {
    if (!e[i].is_array() || e[i].size() != n) throw ParseError("hyperweb: row " + std::to_string(i) + " must have n entries");
    for (std::size_t j = i; j < n; ++j) body.set(i, j, parse_form(f, e[i][j]));
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) {
      if (e[i][j].is_null()) continue;
      if (parse_form(f, e[i][j]) != body.at(j, i))
        throw ParseError("hyperweb: entry (" + std::to_string(i) + "," + std::to_string(j) +
                         ") disagrees with (" + std::to_string(j) + "," + std::to_string(i) + ")");
    }
  return Hyperweb<F>(std::move(body));
}

inline Json parse_document(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed document: ") + e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline AnyHyperweb parse_hyperweb(const std::string& text) {
  Json doc = parse_document(text);
  if (!doc.is_object()) throw ParseError("hyperweb: top level must be an object");
  if (!doc.contains("field")) throw ParseError("hyperweb: missing field");
  AnyField f = parse_field(doc["field"]);
  return std::visit([&](const auto& fld) -> AnyHyperweb { return parse_hyperweb_body(fld, doc); }, f);
}

inline AnyHyperweb load_hyperweb(const std::string& path) { return parse_hyperweb(read_file(path)); }

template <ExactField F>
Json hyperweb_json(const Hyperweb<F>& a, Json meta = Json::object()) {
  Json doc;
  doc["field"] = field_json(a.field());
  doc["n"] = a.n();
  Json rows = Json::array();
  for (std::size_t i = 0; i < a.n(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < a.n(); ++j) row.push_back(j < i ? Json() : form_json<F>(a.body().at(i, j)));
    rows.push_back(std::move(row));
  }
  doc["entries"] = std::move(rows);
  if (!meta.empty()) doc["meta"] = std::move(meta);
  return doc;
}

// Z-point files: {"field", "i", "b": 4i x 4i inverse-side form, "phi": i x i
// of 6-vectors, "j": index subset of size i-1 (optional, default 0..i-2)}.

template <ExactField F>
Json zpoint_json(const F& f, std::size_t i, const Matrix<F>& b, const TwoFormMatrix<F>& phi,
                 const std::vector<std::size_t>& j, Json meta = Json::object()) {
  Json doc;
  doc["field"] = field_json(f);
  doc["i"] = i;
  doc["b"] = matrix_json(b);
  Json rows = Json::array();
  for (std::size_t r = 0; r < phi.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < phi.cols(); ++c) row.push_back(form_json<F>(phi.at(r, c)));
    rows.push_back(std::move(row));
  }
  doc["phi"] = std::move(rows);
  doc["j"] = j;
  if (!meta.empty()) doc["meta"] = std::move(meta);
  return doc;
}

template <ExactField F>
ThooftInput<F> parse_zpoint_body(const F& f, const Json& doc) {
  if (!doc.contains("i") || !doc["i"].is_number_unsigned()) throw ParseError("z-point: missing i");
  const auto i = doc["i"].get<std::size_t>();
  if (i < 1) throw ParseError("z-point: i must be >= 1");
  ThooftInput<F> z;
  z.i = i;
  z.b = parse_matrix(f, doc.value("b", Json()), 4 * i, 4 * i, "z-point b");
  const Json& p = doc.contains("phi") ? doc["phi"] : Json();
  if (!p.is_array() || p.size() != i) throw ParseError("z-point: phi must have i rows");
  z.phi = TwoFormMatrix<F>(f, i, i, SymmetryTag::General);
  for (std::size_t r = 0; r < i; ++r) {
    if (!p[r].is_array() || p[r].size() != i) throw ParseError("z-point: phi rows must have i entries");
    for (std::size_t c = 0; c < i; ++c) z.phi.set(r, c, parse_form(f, p[r][c]));
  }
  if (doc.contains("j")) {
    if (!doc["j"].is_array()) throw ParseError("z-point: j must be an array");
    for (const auto& x : doc["j"]) {
      if (!x.is_number_unsigned()) throw ParseError("z-point: j entries must be indices");
      z.j.push_back(x.get<std::size_t>());
    }
  } else {
    z.j = iota(i - 1);
  }
  return z;
}

inline AnyThooftInput parse_zpoint(const std::string& text) {
  Json doc = parse_document(text);
  if (!doc.is_object() || !doc.contains("field")) throw ParseError("z-point: missing field");
  AnyField f = parse_field(doc["field"]);
  return std::visit([&](const auto& fld) -> AnyThooftInput { return parse_zpoint_body(fld, doc); }, f);
}

// ---------------------------------------------------------------------------
// Reports

inline Json chern_json(const ChernClass& c) { return Json{{"c1", c.c1}, {"c2", c.c2}, {"c3", c.c3}}; }

inline const char* fiber_kind(FiberStatus::Kind k) {
  switch (k) {
    case FiberStatus::Kind::VerifiedExhaustive: return "verified_exhaustive";
    case FiberStatus::Kind::VerifiedSampled: return "verified_sampled";
    default: return "failed";
  }
}

template <ExactField F>
Json report_json(const InstantonReport<F>& r) {
  Json j;
  j["n"] = r.n;
  j["r"] = r.r;
  j["field"] = r.field;
  j["strategy"] = r.strategy;
  j["rank"] = {{"value", r.rank_value}, {"expected", 2 * r.n + 2 * r.r}, {"ok", r.rank_ok}};
  if (auto d = r.derived_r()) j["rank"]["derived_r"] = *d;
  Json fib;
  fib["status"] = fiber_kind(r.fiber.kind);
  fib["points"] = r.fiber.points;
  fib["primes"] = r.fiber.primes;
  if (!r.fiber.inconclusive_primes.empty()) fib["inconclusive_primes"] = r.fiber.inconclusive_primes;
  if (!r.fiber.witness.empty()) {
    fib["witness_point"] = r.fiber.witness;
    fib["witness_field"] = r.fiber.witness_field;
  }
  if (!r.fiber.reason.empty()) fib["reason"] = r.fiber.reason;
  j["fiber"] = std::move(fib);
  j["h0"] = {{"value", r.h0_value}, {"ok", r.h0_ok}};
  j["symplectic_fiber_ok"] = r.symplectic_fiber_ok;
  if (r.tame.kind != TameStatus<F>::Kind::Unchecked) {
    Json t;
    t["found"] = r.tame.kind == TameStatus<F>::Kind::Yes;
    t["attempts"] = r.tame.attempts;
    if (!r.tame.subset.empty()) t["subset"] = r.tame.subset;
    if (r.tame.basis) t["basis"] = matrix_json(*r.tame.basis);
    j["property_star"] = std::move(t);
  }
  j["passed"] = r.passed();
  return j;
}

/// Re-checkable witness for a failed check: a rank, a point or an h0 value.
template <ExactField F>
Json failure_witness(const InstantonReport<F>& r) {
  if (!r.rank_ok) {
    std::string expected = std::to_string(2 * r.n + 2 * r.r);
    return {{"kind", "rank"}, {"value", r.rank_value}, {"expected", 2 * r.n + 2 * r.r},
            {"text", "rank " + std::to_string(r.rank_value) + " ≠ " + expected}};
  }
  if (!r.fiber.ok()) {
    Json w{{"kind", "point"}, {"point", r.fiber.witness}, {"field", r.fiber.witness_field}};
    w["text"] = r.fiber.reason;
    return w;
  }
  if (!r.h0_ok)
    return {{"kind", "h0"}, {"value", r.h0_value}, {"text", "h0 " + std::to_string(r.h0_value) + " ≠ 0"}};
  return {{"kind", "symplectic_fiber"}, {"text", "fibre form degenerate"}};
}

inline Json report_json(const TangentReport& t) {
  Json j;
  j["n"] = t.n;
  j["r"] = t.r;
  j["field"] = t.field;
  j["num_equations"] = t.num_equations;
  j["jacobian_rank"] = t.jacobian_rank;
  j["tangent_dim"] = t.tangent_dim;
  j["expected_dim"] = t.expected_dim;
  j["meets_expected"] = t.meets_expected;
  if (t.char_p_caveat) j["char_p_lower_bound"] = true;
  return j;
}

template <ExactField F>
Json report_json(const ThooftResult<F>& r) {
  Json j;
  j["i"] = r.i;
  j["rank"] = r.rank;
  j["chern"] = chern_json(r.chern);
  j["c2_expected"] = 2 * static_cast<long long>(r.i) - 1;
  j["h0_E2i_1"] = r.h0_E2i_1;
  j["h0_K_1"] = r.h0_K_1;
  j["alpha_section_rank"] = r.alpha_section_rank;
  j["h0_E2_1"] = r.h0_E2_1;
  j["h0_nonzero"] = r.h0_claim_holds;
  j["fiber_strategy"] = r.fiber_strategy;
  j["points_checked"] = r.points_checked;
  j["euler_crosscheck"] = r.euler_crosscheck;
  return j;
}

inline Json report_json(const IdentityTable& t, std::size_t max_rows = 0) {
  Json j;
  j["rows_checked"] = t.rows.size();
  std::size_t bad = 0;
  Json rows = Json::array();
  for (const auto& r : t.rows) {
    if (!r.ok()) ++bad;
    if (!r.ok() || rows.size() < max_rows)
      rows.push_back({{"n", r.n}, {"r", r.r},
                      {"a", {r.a_lhs, r.a_rhs}}, {"b", {r.b_lhs, r.b_rhs}}, {"c", {r.c_lhs, r.c_rhs}},
                      {"ok", r.ok()}});
  }
  j["mismatches"] = bad;
  j["rows"] = std::move(rows);
  j["all_pass"] = t.all_pass();
  return j;
}

}  // namespace io
}  // namespace instanton

/* Copyright 2026 The walkerlab Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License. */

#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "walkerlab/expr.hpp"
#include "walkerlab/model.hpp"

namespace walkerlab {

/// Expected invariant line or plane field. `none` marks expected absence;
/// `when` restricts the expectation to a parameter locus.
struct FieldExpectation {
  bool none = false;
  std::vector<Expr> generators;
  std::optional<Relation> when;
  std::size_t line = 0;
};

struct Expectations {
  std::optional<std::string> segre;
  std::optional<bool> conformally_flat;
  std::optional<bool> ricci_parallel;
  std::vector<FieldExpectation> lines;
  std::vector<FieldExpectation> planes;
};

struct BracketSpec {
  std::size_t i = 0;
  std::size_t j = 0;
  Expr rhs;
};

struct MetricSpec {
  std::size_t i = 0;
  std::size_t j = 0;
  Expr value;
};

enum class Completeness { Full, Stub };

struct CatalogEntry {
  std::string id;
  std::vector<std::string> aliases;
  std::size_t dim_h = 0;
  std::vector<std::string> params;
  std::vector<Relation> constraints;
  Completeness completeness = Completeness::Full;
  std::string comment;
  std::vector<ParamValues> samples;
  std::vector<BracketSpec> brackets;
  std::vector<MetricSpec> metric;
  Expectations expected;

  bool is_full() const noexcept { return completeness == Completeness::Full; }
  std::vector<std::string> basis_names() const { return HomogeneousModel::default_names(dim_h); }
  /// Symbol to position among the m basis vectors.
  std::map<std::string, std::size_t> m_index() const {
    std::map<std::string, std::size_t> idx;
    auto names = basis_names();
    for (std::size_t k = 0; k < 4; ++k) idx[names[dim_h + k]] = k;
    return idx;
  }
};

using Catalog = std::vector<CatalogEntry>;

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline bool starts_with(std::string_view s, std::string_view p) { return s.substr(0, p.size()) == p; }

/// Splits at commas that are not nested in parentheses. Offsets are
/// returned alongside each piece.
inline std::vector<std::pair<std::string_view, std::size_t>> split_top_level(std::string_view s, std::size_t base) {
  std::vector<std::pair<std::string_view, std::size_t>> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t k = 0; k <= s.size(); ++k) {
    if (k == s.size() || (s[k] == ',' && depth == 0)) {
      out.emplace_back(s.substr(start, k - start), base + start);
      start = k + 1;
    } else if (s[k] == '(') {
      ++depth;
    } else if (s[k] == ')') {
      --depth;
    }
  }
  return out;
}

class CatalogParser {
 public:
  explicit CatalogParser(std::string_view text) : text_(text) {}

  Catalog parse() {
    Catalog out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text_.size()) {
      std::size_t end = text_.find('\n', pos);
      if (end == std::string_view::npos) end = text_.size();
      line_ = text_.substr(pos, end - pos);
      if (!line_.empty() && line_.back() == '\r') line_.remove_suffix(1);
      ++line_no;
      line_no_ = line_no;
      handle_line(out);
      pos = end + 1;
    }
    finish(out);
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& what, std::size_t column) const {
    throw SyntaxError(what, line_no_, column);
  }

  std::size_t column_of(std::string_view piece) const {
    return static_cast<std::size_t>(piece.data() - line_.data()) + 1;
  }

  void handle_line(Catalog& out) {
    std::string_view s = trim(line_);
    if (s.empty() || s.front() == '#') return;
    if (starts_with(s, "[entry")) {
      finish(out);
      if (s.back() != ']') fail("expected ']' closing the entry header", column_of(s) + s.size());
      std::string_view id = trim(s.substr(6, s.size() - 7));
      if (id.empty()) fail("empty entry id", column_of(s) + 6);
      current_.emplace();
      current_->id = std::string(id);
      entry_line_ = line_no_;
      return;
    }
    if (!current_) fail("content outside of an entry", column_of(s));
    CatalogEntry& e = *current_;
    if (s.front() == '[') return bracket_line(e, s);
    if (starts_with(s, "g(")) return metric_line(e, s);
    std::size_t colon = s.find(':');
    std::size_t eq = s.find('=');
    if (colon != std::string_view::npos && (eq == std::string_view::npos || colon < eq)) {
      return header_line(e, trim(s.substr(0, colon)), trim(s.substr(colon + 1)));
    }
    if (eq == std::string_view::npos) fail("expected 'key = value' or 'key: value'", column_of(s));
    return keyed_line(e, trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
  }

  void header_line(CatalogEntry& e, std::string_view key, std::string_view value) {
    if (key == "params") {
      for (auto [piece, off] : split_top_level(value, 0)) {
        (void)off;
        std::string_view name = trim(piece);
        if (name.empty()) continue;
        for (char c : name)
          if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_'))
            fail("invalid parameter name '" + std::string(name) + "'", column_of(name));
        if (std::isdigit(static_cast<unsigned char>(name.front())))
          fail("invalid parameter name '" + std::string(name) + "'", column_of(name));
        e.params.emplace_back(name);
      }
    } else if (key == "constraint") {
      e.constraints.push_back(parse_relation(value, line_no_, column_of(value) - 1));
    } else if (key == "flag") {
      if (value == "full") e.completeness = Completeness::Full;
      else if (value == "stub") e.completeness = Completeness::Stub;
      else fail("flag must be 'full' or 'stub'", column_of(value));
    } else if (key == "comment") {
      if (!e.comment.empty()) e.comment += ' ';
      e.comment += std::string(value);
    } else if (key == "alias") {
      e.aliases.emplace_back(value);
    } else if (key == "sample") {
      ParamValues values;
      for (auto [piece, off] : split_top_level(value, 0)) {
        (void)off;
        std::string_view kv = trim(piece);
        std::size_t eq = kv.find('=');
        if (eq == std::string_view::npos) fail("expected name=value", column_of(kv));
        std::string_view rhs = trim(kv.substr(eq + 1));
        Scalar v = eval(parse_expr(rhs, line_no_, column_of(rhs) - 1), {});
        if (!v.is_rational()) fail("sample values must be rational", column_of(rhs));
        values[std::string(trim(kv.substr(0, eq)))] = v.rational_part();
      }
      e.samples.push_back(std::move(values));
    } else {
      fail("unknown header '" + std::string(key) + "'", column_of(key));
    }
  }

  void keyed_line(CatalogEntry& e, std::string_view key, std::string_view value) {
    if (key == "dim_m") {
      if (value != "4") fail("only dim_m = 4 is supported", column_of(value));
    } else if (key == "dim_h") {
      if (value.size() != 1 || value[0] < '0' || value[0] > '6') fail("dim_h must be 0..6", column_of(value));
      if (!e.brackets.empty() || !e.metric.empty()) fail("dim_h must precede brackets and metric", column_of(key));
      e.dim_h = static_cast<std::size_t>(value[0] - '0');
    } else if (key == "segre") {
      e.expected.segre = std::string(value);
    } else if (key == "conformally_flat" || key == "ricci_parallel") {
      bool b;
      if (value == "true") b = true;
      else if (value == "false") b = false;
      else fail("expected true or false", column_of(value));
      (key == "conformally_flat" ? e.expected.conformally_flat : e.expected.ricci_parallel) = b;
    } else if (key == "line" || key == "plane") {
      field_line(e, key == "line", value);
    } else {
      fail("unknown key '" + std::string(key) + "'", column_of(key));
    }
  }

  void field_line(CatalogEntry& e, bool is_line, std::string_view value) {
    FieldExpectation f;
    f.line = line_no_;
    std::size_t when = value.find(" when ");
    std::string_view body = trim(when == std::string_view::npos ? value : value.substr(0, when));
    if (when != std::string_view::npos) {
      std::string_view cond = trim(value.substr(when + 6));
      f.when = parse_relation(cond, line_no_, column_of(cond) - 1);
    }
    if (body == "none") {
      f.none = true;
    } else {
      if (!starts_with(body, "span(") || body.back() != ')') fail("expected 'none' or 'span(...)'", column_of(body));
      std::string_view inner = body.substr(5, body.size() - 6);
      auto names = e.basis_names();
      std::set<std::string> m_symbols(names.begin() + static_cast<long>(e.dim_h), names.end());
      for (auto [piece, off] : split_top_level(inner, 0)) {
        (void)off;
        std::string_view t = trim(piece);
        Expr g = parse_expr(t, line_no_, column_of(t) - 1);
        check_linear(g, m_symbols, t, false);
        f.generators.push_back(g);
      }
      std::size_t want = is_line ? 1 : 2;
      if (f.generators.size() != want)
        fail(std::string(is_line ? "a line" : "a plane") + " needs " + std::to_string(want) + " generator(s)",
             column_of(body));
    }
    (is_line ? e.expected.lines : e.expected.planes).push_back(std::move(f));
  }

  void check_linear(const Expr& g, const std::set<std::string>& basis, std::string_view where, bool allow_zero) {
    int degree = 0;
    try {
      degree = linear_degree(g, basis);
    } catch (const Error& err) {
      fail(err.what(), column_of(where));
    }
    if (degree == 0) {
      bool zero = g.kind() == Expr::Kind::Number && sgn(g.value()) == 0;
      if (!(allow_zero && zero)) fail("expected a linear combination of basis vectors", column_of(where));
    }
  }

  std::size_t basis_position(const CatalogEntry& e, std::string_view sym) {
    auto names = e.basis_names();
    for (std::size_t k = 0; k < names.size(); ++k)
      if (names[k] == sym) return k;
    fail("unknown basis symbol '" + std::string(sym) + "'", column_of(sym));
  }

  void bracket_line(CatalogEntry& e, std::string_view s) {
    std::size_t close = s.find(']');
    std::size_t comma = s.find(',');
    if (close == std::string_view::npos || comma == std::string_view::npos || comma > close)
      fail("expected '[x, y] = ...'", column_of(s));
    std::string_view a = trim(s.substr(1, comma - 1));
    std::string_view b = trim(s.substr(comma + 1, close - comma - 1));
    std::string_view rest = trim(s.substr(close + 1));
    if (rest.empty() || rest.front() != '=') fail("expected '=' after bracket", column_of(s) + close + 1);
    std::string_view rhs = trim(rest.substr(1));
    std::size_t i = basis_position(e, a), j = basis_position(e, b);
    if (i == j) fail("bracket of a basis vector with itself", column_of(a));
    Expr value = parse_expr(rhs, line_no_, column_of(rhs) - 1);
    auto names = e.basis_names();
    check_linear(value, std::set<std::string>(names.begin(), names.end()), rhs, true);
    if (i > j) {
      std::swap(i, j);
      value = Expr::unary(Expr::Kind::Neg, value);
    }
    for (const auto& br : e.brackets)
      if (br.i == i && br.j == j) fail("bracket [" + std::string(a) + ", " + std::string(b) + "] given twice", column_of(s));
    e.brackets.push_back({i, j, value});
  }

  void metric_line(CatalogEntry& e, std::string_view s) {
    std::size_t close = s.find(')');
    std::size_t comma = s.find(',');
    if (close == std::string_view::npos || comma == std::string_view::npos || comma > close)
      fail("expected 'g(i,j) = ...'", column_of(s));
    auto index = [&](std::string_view t) -> std::size_t {
      t = trim(t);
      if (t.size() != 1 || t[0] < '1' || t[0] > '4') fail("metric indices run from 1 to 4", column_of(t));
      return static_cast<std::size_t>(t[0] - '1');
    };
    std::size_t i = index(s.substr(2, comma - 2)), j = index(s.substr(comma + 1, close - comma - 1));
    std::string_view rest = trim(s.substr(close + 1));
    if (rest.empty() || rest.front() != '=') fail("expected '=' after g(i,j)", column_of(s) + close + 1);
    std::string_view rhs = trim(rest.substr(1));
    if (i > j) std::swap(i, j);
    for (const auto& m : e.metric)
      if (m.i == i && m.j == j) fail("metric entry given twice", column_of(s));
    e.metric.push_back({i, j, parse_expr(rhs, line_no_, column_of(rhs) - 1)});
  }

  void finish(Catalog& out) {
    if (!current_) return;
    CatalogEntry& e = *current_;
    // Every symbol used must be a declared parameter or a basis symbol.
    std::set<std::string> known(e.params.begin(), e.params.end());
    auto names = e.basis_names();
    std::set<std::string> basis(names.begin(), names.end());
    auto check = [&](const Expr& x, bool allow_basis) {
      for (const auto& s : symbols(x))
        if (!known.count(s) && !(allow_basis && basis.count(s)))
          throw SyntaxError("undeclared symbol '" + s + "' in entry " + e.id, entry_line_, 1);
    };
    for (const auto& c : e.constraints) {
      check(c.lhs, false);
      check(c.rhs, false);
    }
    for (const auto& b : e.brackets) check(b.rhs, true);
    for (const auto& m : e.metric) check(m.value, false);
    for (const auto* fields : {&e.expected.lines, &e.expected.planes})
      for (const auto& f : *fields) {
        for (const auto& g : f.generators) check(g, true);
        if (f.when) {
          check(f.when->lhs, false);
          check(f.when->rhs, false);
        }
      }
    for (const auto& sample : e.samples)
      for (const auto& [k, v] : sample)
        if (!known.count(k)) throw SyntaxError("sample binds unknown parameter '" + k + "'", entry_line_, 1);
    for (const auto& other : out) {
      auto clash = [&](const std::string& name) {
        return other.id == name ||
               std::find(other.aliases.begin(), other.aliases.end(), name) != other.aliases.end();
      };
      bool dup = clash(e.id);
      for (const auto& a : e.aliases) dup = dup || clash(a);
      if (dup) throw Error(ErrorKind::DuplicateId, "duplicate entry id '" + e.id + "'");
    }
    out.push_back(std::move(e));
    current_.reset();
  }

  std::string_view text_;
  std::string_view line_;
  std::size_t line_no_ = 0;
  std::size_t entry_line_ = 0;
  std::optional<CatalogEntry> current_;
};

}  // namespace detail

inline Catalog parse_catalog(std::string_view text) { return detail::CatalogParser(text).parse(); }

/// Catalog text that parses back to the same entries.
inline std::string write_catalog(const Catalog& catalog) {
  std::string out;
  for (const auto& e : catalog) {
    auto names = e.basis_names();
    out += "[entry " + e.id + "]\n";
    out += "dim_m = 4\ndim_h = " + std::to_string(e.dim_h) + "\n";
    if (!e.params.empty()) {
      out += "params: ";
      for (std::size_t k = 0; k < e.params.size(); ++k) out += (k ? ", " : "") + e.params[k];
      out += "\n";
    }
    for (const auto& c : e.constraints) out += "constraint: " + to_string(c) + "\n";
    out += std::string("flag: ") + (e.is_full() ? "full" : "stub") + "\n";
    if (!e.comment.empty()) out += "comment: " + e.comment + "\n";
    for (const auto& a : e.aliases) out += "alias: " + a + "\n";
    for (const auto& sample : e.samples) {
      out += "sample: ";
      bool first = true;
      for (const auto& [k, v] : sample) {
        out += (first ? "" : ", ") + k + " = " + v.get_str();
        first = false;
      }
      out += "\n";
    }
    for (const auto& b : e.brackets) out += "[" + names[b.i] + ", " + names[b.j] + "] = " + to_string(b.rhs) + "\n";
    for (const auto& m : e.metric)
      out += "g(" + std::to_string(m.i + 1) + "," + std::to_string(m.j + 1) + ") = " + to_string(m.value) + "\n";
    if (e.expected.segre) out += "segre = " + *e.expected.segre + "\n";
    if (e.expected.conformally_flat)
      out += std::string("conformally_flat = ") + (*e.expected.conformally_flat ? "true" : "false") + "\n";
    if (e.expected.ricci_parallel)
      out += std::string("ricci_parallel = ") + (*e.expected.ricci_parallel ? "true" : "false") + "\n";
    auto fields = [&](const char* key, const std::vector<FieldExpectation>& fs) {
      for (const auto& f : fs) {
        out += std::string(key) + " = ";
        if (f.none) {
          out += "none";
        } else {
          out += "span(";
          for (std::size_t k = 0; k < f.generators.size(); ++k) out += (k ? ", " : "") + to_string(f.generators[k]);
          out += ")";
        }
        if (f.when) out += " when " + to_string(*f.when);
        out += "\n";
      }
    };
    fields("line", e.expected.lines);
    fields("plane", e.expected.planes);
    out += "\n";
  }
  return out;
}

/// Entries of `overlay` replace same-id entries of `base`; new ids are appended.
inline Catalog merge_catalogs(Catalog base, const Catalog& overlay) {
  for (const auto& e : overlay) {
    auto it = std::find_if(base.begin(), base.end(), [&](const CatalogEntry& b) { return b.id == e.id; });
    if (it != base.end()) *it = e;
    else base.push_back(e);
  }
  return base;
}

/// Looks up an entry by id or alias. "<id>-stub" names the stub row `id`.
inline const CatalogEntry& find_entry(const Catalog& catalog, std::string_view id) {
  for (const auto& e : catalog)
    if (e.id == id) return e;
  for (const auto& e : catalog)
    for (const auto& a : e.aliases)
      if (a == id) return e;
  constexpr std::string_view suffix = "-stub";
  if (id.size() > suffix.size() && id.substr(id.size() - suffix.size()) == suffix) {
    std::string_view base = id.substr(0, id.size() - suffix.size());
    for (const auto& e : catalog)
      if (e.id == base && !e.is_full()) return e;
  }
  throw Error(ErrorKind::NotFound, "no catalog entry '" + std::string(id) + "'");
}

/// Checks bindings against declarations and constraints.
inline void check_params(const CatalogEntry& entry, const ParamValues& values) {
  for (const auto& [k, v] : values) {
    (void)v;
    if (std::find(entry.params.begin(), entry.params.end(), k) == entry.params.end())
      throw Error(ErrorKind::InvalidArgument, "entry " + entry.id + " has no parameter '" + k + "'");
  }
  // Constraints that can already be decided are checked before complaining
  // about missing bindings, so the more specific error wins.
  for (int pass = 0; pass < 2; ++pass) {
    if (pass == 1)
      for (const auto& p : entry.params)
        if (!values.count(p)) throw Error(ErrorKind::UnboundParameter, "parameter '" + p + "' is not bound");
    for (const auto& c : entry.constraints) {
      if (pass == 0) {
        auto syms = symbols(c.lhs);
        for (const auto& s : symbols(c.rhs)) syms.insert(s);
        if (!std::all_of(syms.begin(), syms.end(), [&](const std::string& s) { return values.count(s) > 0; }))
          continue;
      }
      bool ok = false;
      try {
        ok = holds(c, values);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::DivisionByZero && e.kind() != ErrorKind::NegativeSqrt) throw;
      }
      if (!ok) throw Error(ErrorKind::ConstraintViolated, "constraint " + to_string(c) + " fails for " + entry.id);
    }
  }
}

inline HomogeneousModel instantiate(const CatalogEntry& entry, const ParamValues& values) {
  if (!entry.is_full())
    throw Error(ErrorKind::StubEntry, entry.id + " is a metric-only stub; supply brackets to instantiate it");
  check_params(entry, values);
  ModelData data;
  data.id = entry.id;
  data.params = values;
  data.dim_h = entry.dim_h;
  auto names = entry.basis_names();
  std::map<std::string, std::size_t> index;
  for (std::size_t k = 0; k < names.size(); ++k) index[names[k]] = k;
  for (const auto& b : entry.brackets) {
    Vector v = eval_linear(b.rhs, index, values);
    if (!is_zero(v)) data.brackets.push_back({{b.i, b.j}, v});
  }
  for (const auto& m : entry.metric) {
    Scalar v = eval(m.value, values);
    data.metric(m.i, m.j) = v;
    data.metric(m.j, m.i) = v;
  }
  return HomogeneousModel::build(std::move(data));
}

/// Subspace of m spanned by an expectation's generators at the given values.
inline Subspace expected_subspace(const CatalogEntry& entry, const FieldExpectation& f, const ParamValues& values) {
  auto index = entry.m_index();
  std::vector<Vector> gens;
  for (const auto& g : f.generators) gens.push_back(eval_linear(g, index, values));
  return Subspace::span(gens, 4);
}

/// The expectations that apply at `values`: conditional ones whose locus
/// contains the point if any, otherwise the unconditional ones.
inline std::vector<const FieldExpectation*> active_expectations(const std::vector<FieldExpectation>& fields,
                                                                const ParamValues& values) {
  std::vector<const FieldExpectation*> conditional, plain;
  for (const auto& f : fields) {
    if (!f.when) {
      plain.push_back(&f);
      continue;
    }
    bool on = false;
    try {
      on = holds(*f.when, values);
    } catch (const Error&) {
      on = false;
    }
    if (on) conditional.push_back(&f);
  }
  return conditional.empty() ? plain : conditional;
}

/// Small rational in [-5, 5] with denominator at most 4, drawn with a
/// platform-independent mapping from the engine output.
inline Rational draw_small_rational(std::mt19937_64& rng) {
  long num = static_cast<long>(rng() % 11) - 5;
  long den = static_cast<long>(rng() % 4) + 1;
  return make_rational(num, den);
}

/// Parameter assignment for trial `trial`: the entry's fixed samples in
/// turn if it has any, else a rejection-sampled random draw.
inline ParamValues sample_params(const CatalogEntry& entry, std::mt19937_64& rng, std::size_t trial) {
  if (!entry.samples.empty()) return entry.samples[trial % entry.samples.size()];
  for (int attempt = 0; attempt < 10000; ++attempt) {
    ParamValues v;
    for (const auto& p : entry.params) v[p] = draw_small_rational(rng);
    try {
      check_params(entry, v);
      return v;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ConstraintViolated) throw;
    }
  }
  throw Error(ErrorKind::ConstraintViolated, "no admissible parameters found for " + entry.id);
}

}  // namespace walkerlab

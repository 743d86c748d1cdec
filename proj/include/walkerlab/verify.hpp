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

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "walkerlab/catalog.hpp"
#include "walkerlab/report.hpp"

namespace walkerlab {

struct Check {
  std::string name;
  bool ok = false;
  std::string expected;
  std::string actual;
};

struct TrialResult {
  ParamValues params;
  std::vector<Check> checks;
  /// Set when the model could not be built or analysed.
  std::string error;
  bool ok() const {
    if (!error.empty()) return false;
    for (const auto& c : checks)
      if (!c.ok) return false;
    return true;
  }
};

enum class EntryStatus { Pass, Fail, SkippedStub };

inline std::string to_string(EntryStatus s) {
  switch (s) {
    case EntryStatus::Pass: return "PASS";
    case EntryStatus::Fail: return "FAIL";
    case EntryStatus::SkippedStub: return "SKIPPED-STUB";
  }
  return "?";
}

struct EntryResult {
  std::string id;
  EntryStatus status = EntryStatus::Pass;
  std::vector<TrialResult> trials;
};

struct VerifyOptions {
  std::optional<std::string> case_id;
  std::uint64_t seed = 1;
  std::size_t trials = 3;
};

struct VerifySummary {
  std::vector<EntryResult> entries;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t skipped = 0;
  int exit_code() const { return failed > 0 ? 1 : 0; }
};

namespace detail {

/// FNV-1a, so each entry's parameter stream depends only on the seed and id.
inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline bool case_matches(const CatalogEntry& e, const std::string& c) {
  auto match = [&](const std::string& id) {
    return id == c || (id.size() > c.size() && id.compare(0, c.size(), c) == 0 && id[c.size()] == '-');
  };
  if (match(e.id)) return true;
  for (const auto& a : e.aliases)
    if (match(a)) return true;
  return !e.is_full() && c == e.id + "-stub";
}

inline std::string verdict_text(Verdict v, const std::vector<Subspace>& ws, const std::vector<std::string>& names) {
  std::string s = to_string(v);
  for (const auto& w : ws) s += " " + subspace_text(w, names);
  return s;
}

inline void check_fields(const CatalogEntry& entry, const ParamValues& values, const Report& r, bool lines,
                         const std::vector<std::string>& names, std::vector<Check>& out) {
  const auto& fields = lines ? entry.expected.lines : entry.expected.planes;
  if (fields.empty()) return;
  Verdict verdict = lines ? r.walker.line.verdict : r.walker.plane.verdict;
  std::vector<Subspace> found;
  if (lines)
    for (const auto& w : r.walker.line.witnesses) found.push_back(w.line);
  else
    found = r.walker.plane.witnesses;
  const std::string what = lines ? "line" : "plane";
  const std::string actual = verdict_text(verdict, found, names);
  for (const FieldExpectation* f : active_expectations(fields, values)) {
    Check c;
    if (f->none) {
      c.name = what + " none";
      c.expected = "none";
      c.ok = verdict == Verdict::None;
    } else {
      Subspace want = expected_subspace(entry, *f, values);
      c.name = what + " " + subspace_text(want, names);
      c.expected = "exists " + subspace_text(want, names);
      bool hit = false;
      for (const auto& w : found) hit = hit || w == want;
      c.ok = verdict == Verdict::Exists && hit;
    }
    c.actual = actual;
    out.push_back(std::move(c));
  }
}

}  // namespace detail

/// All checks for one parameter assignment.
inline TrialResult verify_trial(const CatalogEntry& entry, const ParamValues& values) {
  TrialResult t;
  t.params = values;
  try {
    HomogeneousModel m = instantiate(entry, values);
    Report r = make_report(m);
    const auto names = m.m_names();
    const auto& ex = entry.expected;
    auto flag = [&](const std::string& name, std::optional<bool> want, bool got) {
      if (want) t.checks.push_back({name, *want == got, *want ? "true" : "false", got ? "true" : "false"});
    };
    flag("conformally_flat", ex.conformally_flat, r.conformally_flat);
    if (ex.segre) {
      std::string got = r.segre_error.empty() ? r.segre_render : "error: " + r.segre_error;
      t.checks.push_back({"segre", got == *ex.segre, *ex.segre, got});
    }
    flag("ricci_parallel", ex.ricci_parallel, r.ricci_parallel);
    detail::check_fields(entry, values, r, true, names, t.checks);
    detail::check_fields(entry, values, r, false, names, t.checks);
    t.checks.push_back({"oracle_agreement", r.walker.oracle_agreement, "true",
                        r.walker.oracle_agreement ? "true" : "false"});
  } catch (const Error& e) {
    t.error = std::string(to_string(e.kind())) + ": " + e.what();
  }
  return t;
}

inline EntryResult verify_entry(const CatalogEntry& entry, const VerifyOptions& opt) {
  EntryResult res;
  res.id = entry.id;
  if (!entry.is_full()) {
    res.status = EntryStatus::SkippedStub;
    return res;
  }
  std::mt19937_64 rng(opt.seed ^ detail::fnv1a(entry.id));
  for (std::size_t k = 0; k < opt.trials; ++k) {
    TrialResult t;
    try {
      t = verify_trial(entry, sample_params(entry, rng, k));
    } catch (const Error& e) {
      t.error = std::string(to_string(e.kind())) + ": " + e.what();
    }
    if (!t.ok()) res.status = EntryStatus::Fail;
    res.trials.push_back(std::move(t));
  }
  return res;
}

/// Runs the suite; entries are reported in id order. Throws NotFound when
/// `case_id` selects nothing.
inline VerifySummary verify_catalog(const Catalog& catalog, const VerifyOptions& opt) {
  std::vector<const CatalogEntry*> chosen;
  for (const auto& e : catalog)
    if (!opt.case_id || detail::case_matches(e, *opt.case_id)) chosen.push_back(&e);
  if (chosen.empty()) throw Error(ErrorKind::NotFound, "no catalog entry matches '" + *opt.case_id + "'");
  std::sort(chosen.begin(), chosen.end(), [](const CatalogEntry* a, const CatalogEntry* b) { return a->id < b->id; });
  VerifySummary s;
  for (const CatalogEntry* e : chosen) {
    s.entries.push_back(verify_entry(*e, opt));
    switch (s.entries.back().status) {
      case EntryStatus::Pass: ++s.passed; break;
      case EntryStatus::Fail: ++s.failed; break;
      case EntryStatus::SkippedStub: ++s.skipped; break;
    }
  }
  return s;
}

inline Json to_json(const VerifySummary& s) {
  Json entries = Json::array();
  for (const auto& e : s.entries) {
    Json trials = Json::array();
    for (const auto& t : e.trials) {
      Json checks = Json::array();
      for (const auto& c : t.checks)
        checks.push_back(Json{{"name", c.name}, {"ok", c.ok}, {"expected", c.expected}, {"actual", c.actual}});
      Json tj{{"params", params_json(t.params)}, {"ok", t.ok()}, {"checks", checks}};
      if (!t.error.empty()) tj["error"] = t.error;
      trials.push_back(tj);
    }
    entries.push_back(Json{{"id", e.id}, {"status", to_string(e.status)}, {"trials", trials}});
  }
  return Json{{"summary", {{"verified", s.passed + s.failed}, {"passed", s.passed}, {"failed", s.failed},
                           {"skipped_stubs", s.skipped}, {"result", s.failed ? "FAIL" : "PASS"}}},
              {"entries", entries}};
}

inline std::string to_text(const VerifySummary& s) {
  std::ostringstream os;
  for (const auto& e : s.entries) {
    os << to_string(e.status) << "  " << e.id;
    if (e.status == EntryStatus::SkippedStub) {
      os << "\n";
      continue;
    }
    os << "  (" << e.trials.size() << " trials)\n";
    for (const auto& t : e.trials) {
      if (t.ok()) continue;
      os << "    at";
      for (const auto& [k, v] : t.params) os << " " << k << "=" << v.get_str();
      os << "\n";
      if (!t.error.empty()) os << "      error: " << t.error << "\n";
      for (const auto& c : t.checks)
        if (!c.ok) os << "      " << c.name << ": expected " << c.expected << ", got " << c.actual << "\n";
    }
  }
  os << (s.failed ? "FAIL" : "PASS") << ": " << s.passed << " passed, " << s.failed << " failed, " << s.skipped
     << " skipped stubs\n";
  return os.str();
}

}  // namespace walkerlab

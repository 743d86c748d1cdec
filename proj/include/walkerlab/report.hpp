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

#include <chrono>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "walkerlab/expr.hpp"
#include "walkerlab/segre.hpp"
#include "walkerlab/walker.hpp"

namespace walkerlab {

using Json = nlohmann::ordered_json;

/// Everything computed for one instantiated model.
struct Report {
  std::string id;
  ParamValues params;
  Signature signature;
  std::array<Matrix, 4> lambda{Matrix(4, 4), Matrix(4, 4), Matrix(4, 4), Matrix(4, 4)};
  Matrix ricci{4, 4};
  Matrix q{4, 4};
  Scalar tau;
  SegreType segre;
  std::string segre_render;
  /// Set when the Ricci spectrum leaves the supported field.
  std::string segre_error;
  bool conformally_flat = false;
  bool ricci_parallel = false;
  bool locally_symmetric = false;
  WalkerReport walker;
  double timing_ms = 0;
};

inline Report make_report(const HomogeneousModel& m) {
  auto start = std::chrono::steady_clock::now();
  Report r;
  r.id = m.id();
  r.params = m.params();
  r.signature = m.signature();
  Geometry geo = compute_geometry(m);
  r.lambda = geo.connection.lambda;
  r.ricci = geo.ricci.rho;
  r.q = geo.ricci.q;
  r.tau = geo.ricci.tau;
  try {
    r.segre = classify(geo.ricci.q, m.metric());
    r.segre_render = render(r.segre);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::UnsupportedAlgebraicDegree && e.kind() != ErrorKind::MixedRadicands) throw;
    r.segre_error = e.what();
  }
  r.conformally_flat = geo.weyl.flat;
  r.ricci_parallel = geo.ricci_parallel;
  r.locally_symmetric = geo.locally_symmetric;
  r.walker = walker_report(m, geo);
  r.timing_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

/// True when either field search ended without a decision.
inline bool is_indeterminate(const Report& r) {
  return r.walker.line.verdict == Verdict::Indeterminate || r.walker.plane.verdict == Verdict::Indeterminate;
}

// ---------------------------------------------------------------------------
// JSON. Exact values are strings in the notation Scalar::to_string emits;
// parse_scalar reads them back.

inline Scalar parse_scalar(const std::string& text) { return eval(parse_expr(text), {}); }

namespace detail {

inline Json vector_json(const Vector& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(x.to_string());
  return a;
}

inline Vector vector_from(const Json& j) {
  Vector v;
  for (const auto& x : j) v.push_back(parse_scalar(x.get<std::string>()));
  return v;
}

inline Json matrix_json(const Matrix& m) {
  Json a = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(vector_json(m.row(i)));
  return a;
}

inline Matrix matrix_from(const Json& j) {
  std::vector<Vector> rows;
  for (const auto& r : j) rows.push_back(vector_from(r));
  return Matrix::from_rows(rows, rows.empty() ? 0 : rows.front().size());
}

inline Json subspace_json(const Subspace& s) { return matrix_json(s.basis()); }

inline Subspace subspace_from(const Json& j, std::size_t ambient) {
  std::vector<Vector> rows;
  for (const auto& r : j) rows.push_back(vector_from(r));
  return Subspace::span(rows, ambient);
}

inline Json signature_json(const Signature& s) { return Json::array({s.positive, s.negative, s.zero}); }

inline Signature signature_from(const Json& j) {
  Signature s;
  s.positive = j.at(0).get<int>();
  s.negative = j.at(1).get<int>();
  s.zero = j.size() > 2 ? j.at(2).get<int>() : 0;
  return s;
}

inline Json certificate_json(const Certificate& c) {
  return Json{{"strategy", to_string(c.strategy)}, {"root_counts", c.root_counts},
              {"tuples_examined", c.tuples_examined}, {"branches", c.branches},
              {"exhaustive", c.exhaustive},          {"notes", c.notes}};
}

inline Certificate certificate_from(const Json& j) {
  Certificate c;
  const std::string s = j.at("strategy").get<std::string>();
  for (auto k : {Certificate::Strategy::EigenvalueTuples, Certificate::Strategy::Adaptive,
                 Certificate::Strategy::Signature})
    if (to_string(k) == s) c.strategy = k;
  c.root_counts = j.at("root_counts").get<std::vector<std::size_t>>();
  c.tuples_examined = j.at("tuples_examined").get<std::uint64_t>();
  c.branches = j.at("branches").get<std::uint64_t>();
  c.exhaustive = j.at("exhaustive").get<bool>();
  c.notes = j.at("notes").get<std::vector<std::string>>();
  return c;
}

inline std::string kind_name(QuadricPiece::Kind k) {
  switch (k) {
    case QuadricPiece::Kind::Point: return "point";
    case QuadricPiece::Kind::Linear: return "linear";
    case QuadricPiece::Kind::Curved: return "curved";
  }
  return "?";
}

inline Json families_json(const std::vector<QuadricPiece>& ps) {
  Json a = Json::array();
  for (const auto& p : ps)
    a.push_back(Json{{"kind", kind_name(p.kind)}, {"span", subspace_json(p.span)}, {"sample", vector_json(p.sample)}});
  return a;
}

inline std::vector<QuadricPiece> families_from(const Json& j, std::size_t ambient) {
  std::vector<QuadricPiece> out;
  for (const auto& x : j) {
    QuadricPiece p;
    const std::string k = x.at("kind").get<std::string>();
    p.kind = k == "linear" ? QuadricPiece::Kind::Linear
                           : (k == "curved" ? QuadricPiece::Kind::Curved : QuadricPiece::Kind::Point);
    p.span = subspace_from(x.at("span"), ambient);
    p.sample = vector_from(x.at("sample"));
    out.push_back(std::move(p));
  }
  return out;
}

inline Verdict verdict_from(const std::string& s) {
  for (auto v : {Verdict::Exists, Verdict::None, Verdict::Indeterminate})
    if (to_string(v) == s) return v;
  throw Error(ErrorKind::InvalidArgument, "unknown verdict '" + s + "'");
}

template <class M>
Json eigen_json(const M& m) {
  Json a = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    a.push_back(row);
  }
  return a;
}

template <class M>
M eigen_from(const Json& j) {
  M m;
  for (int i = 0; i < m.rows(); ++i)
    for (int k = 0; k < m.cols(); ++k) m(i, k) = j.at(i).at(k).get<double>();
  return m;
}

inline Json block_json(const SegreBlock& b) {
  Json j{{"size", b.size}, {"complex", b.complex}};
  if (b.complex) {
    j["sum"] = b.sum.to_string();
    j["product"] = b.product.to_string();
  } else {
    j["eigenvalue"] = b.eigenvalue.to_string();
    j["sign"] = b.sign;
  }
  j["causal"] = signature_json(b.causal);
  return j;
}

inline SegreBlock block_from(const Json& j) {
  SegreBlock b;
  b.size = j.at("size").get<int>();
  b.complex = j.at("complex").get<bool>();
  if (b.complex) {
    b.sum = parse_scalar(j.at("sum").get<std::string>());
    b.product = parse_scalar(j.at("product").get<std::string>());
  } else {
    b.eigenvalue = parse_scalar(j.at("eigenvalue").get<std::string>());
    b.sign = j.at("sign").get<int>();
  }
  b.causal = signature_from(j.at("causal"));
  return b;
}

inline Json group_json(const SegreGroup& g) {
  Json j{{"complex", g.complex}};
  if (g.complex) {
    j["sum"] = g.sum.to_string();
    j["product"] = g.product.to_string();
  } else {
    j["eigenvalue"] = g.eigenvalue.to_string();
  }
  j["sizes"] = g.sizes;
  j["causal"] = signature_json(g.causal);
  return j;
}

inline SegreGroup group_from(const Json& j) {
  SegreGroup g;
  g.complex = j.at("complex").get<bool>();
  if (g.complex) {
    g.sum = parse_scalar(j.at("sum").get<std::string>());
    g.product = parse_scalar(j.at("product").get<std::string>());
  } else {
    g.eigenvalue = parse_scalar(j.at("eigenvalue").get<std::string>());
  }
  g.sizes = j.at("sizes").get<std::vector<int>>();
  g.causal = signature_from(j.at("causal"));
  return g;
}

}  // namespace detail

inline Json params_json(const ParamValues& p) {
  Json j = Json::object();
  for (const auto& [k, v] : p) j[k] = rational_to_string(v);
  return j;
}

inline Json to_json(const Report& r, bool with_timing = true) {
  using namespace detail;
  Json j;
  j["id"] = r.id;
  j["params"] = params_json(r.params);
  j["signature"] = Json::array({r.signature.positive, r.signature.negative});
  Json lam = Json::array();
  for (const auto& l : r.lambda) lam.push_back(matrix_json(l));
  j["lambda"] = lam;
  j["ricci"] = matrix_json(r.ricci);
  j["ricci_operator"] = matrix_json(r.q);
  j["tau"] = r.tau.to_string();
  Json seg{{"render", r.segre_render}};
  Json blocks = Json::array(), groups = Json::array();
  for (const auto& b : r.segre.blocks) blocks.push_back(block_json(b));
  for (const auto& g : r.segre.groups) groups.push_back(group_json(g));
  seg["blocks"] = blocks;
  seg["groups"] = groups;
  if (!r.segre_error.empty()) seg["error"] = r.segre_error;
  j["segre"] = seg;
  j["conformally_flat"] = r.conformally_flat;
  j["ricci_parallel"] = r.ricci_parallel;
  j["locally_symmetric"] = r.locally_symmetric;

  const auto& line = r.walker.line;
  Json lw = Json::array();
  for (const auto& w : line.witnesses) {
    Json om = Json::array();
    for (const auto& o : w.omega) om.push_back(o.to_string());
    lw.push_back(Json{{"generator", vector_json(w.generator)}, {"omega", om}});
  }
  Json lj{{"verdict", to_string(line.verdict)}, {"witnesses", lw}, {"all_lines", line.all_lines}};
  if (!line.reason.empty()) lj["reason"] = line.reason;
  lj["certificate"] = certificate_json(line.certificate);
  lj["families"] = families_json(line.families);

  const auto& plane = r.walker.plane;
  Json pw = Json::array();
  for (const auto& w : plane.witnesses) pw.push_back(subspace_json(w));
  Json pj{{"verdict", to_string(plane.verdict)}, {"witnesses", pw}, {"all_planes", plane.all_planes}};
  if (!plane.reason.empty()) pj["reason"] = plane.reason;
  pj["certificate"] = certificate_json(plane.certificate);
  pj["families"] = families_json(plane.families);

  j["walker"] = Json{{"line", lj}, {"plane", pj}, {"oracle_agreement", r.walker.oracle_agreement}};

  const auto& o = r.walker.oracle;
  Json al = Json::array();
  for (const auto& l : o.geometry.lambda) al.push_back(eigen_json(l));
  Json lines = Json::array(), planes = Json::array();
  for (const auto& x : o.lines) lines.push_back(eigen_json(Eigen::Matrix<double, 1, 4>(x.transpose())));
  for (const auto& p : o.planes) planes.push_back(eigen_json(Eigen::Matrix<double, 2, 4>(p.transpose())));
  j["approx"] = Json{{"lambda", al},
                     {"ricci", eigen_json(o.geometry.rho)},
                     {"ricci_operator", eigen_json(o.geometry.q)},
                     {"tau", o.geometry.tau},
                     {"line_exists", o.line_exists},
                     {"plane_exists", o.plane_exists},
                     {"lines", lines},
                     {"planes", planes},
                     {"best_plane_residual", o.best_plane_residual}};
  if (with_timing) j["timing_ms"] = r.timing_ms;
  return j;
}

inline Report report_from_json(const Json& j) {
  using namespace detail;
  Report r;
  r.id = j.at("id").get<std::string>();
  for (const auto& [k, v] : j.at("params").items()) r.params[k] = Rational(v.get<std::string>());
  r.signature.positive = j.at("signature").at(0).get<int>();
  r.signature.negative = j.at("signature").at(1).get<int>();
  for (std::size_t i = 0; i < 4; ++i) r.lambda[i] = matrix_from(j.at("lambda").at(i));
  r.ricci = matrix_from(j.at("ricci"));
  r.q = matrix_from(j.at("ricci_operator"));
  r.tau = parse_scalar(j.at("tau").get<std::string>());
  const Json& seg = j.at("segre");
  r.segre_render = seg.at("render").get<std::string>();
  for (const auto& b : seg.at("blocks")) r.segre.blocks.push_back(block_from(b));
  for (const auto& g : seg.at("groups")) r.segre.groups.push_back(group_from(g));
  if (seg.contains("error")) r.segre_error = seg.at("error").get<std::string>();
  r.conformally_flat = j.at("conformally_flat").get<bool>();
  r.ricci_parallel = j.at("ricci_parallel").get<bool>();
  r.locally_symmetric = j.at("locally_symmetric").get<bool>();

  const Json& w = j.at("walker");
  auto& line = r.walker.line;
  const Json& lj = w.at("line");
  line.verdict = verdict_from(lj.at("verdict").get<std::string>());
  for (const auto& x : lj.at("witnesses")) {
    LineWitness lw;
    lw.generator = vector_from(x.at("generator"));
    lw.line = Subspace::span({lw.generator}, 4);
    for (const auto& o : x.at("omega")) lw.omega.push_back(parse_scalar(o.get<std::string>()));
    line.witnesses.push_back(std::move(lw));
  }
  line.all_lines = lj.at("all_lines").get<bool>();
  if (lj.contains("reason")) line.reason = lj.at("reason").get<std::string>();
  line.certificate = certificate_from(lj.at("certificate"));
  line.families = families_from(lj.at("families"), 4);

  auto& plane = r.walker.plane;
  const Json& pj = w.at("plane");
  plane.verdict = verdict_from(pj.at("verdict").get<std::string>());
  for (const auto& x : pj.at("witnesses")) plane.witnesses.push_back(subspace_from(x, 4));
  plane.all_planes = pj.at("all_planes").get<bool>();
  if (pj.contains("reason")) plane.reason = pj.at("reason").get<std::string>();
  plane.certificate = certificate_from(pj.at("certificate"));
  plane.families = families_from(pj.at("families"), 6);
  r.walker.oracle_agreement = w.at("oracle_agreement").get<bool>();

  const Json& a = j.at("approx");
  auto& o = r.walker.oracle;
  for (std::size_t i = 0; i < 4; ++i) o.geometry.lambda[i] = eigen_from<Mat4>(a.at("lambda").at(i));
  o.geometry.rho = eigen_from<Mat4>(a.at("ricci"));
  o.geometry.q = eigen_from<Mat4>(a.at("ricci_operator"));
  o.geometry.tau = a.at("tau").get<double>();
  o.line_exists = a.at("line_exists").get<bool>();
  o.plane_exists = a.at("plane_exists").get<bool>();
  for (const auto& x : a.at("lines")) o.lines.push_back(eigen_from<Eigen::Matrix<double, 1, 4>>(x).transpose());
  for (const auto& x : a.at("planes")) o.planes.push_back(eigen_from<Eigen::Matrix<double, 2, 4>>(x).transpose());
  o.best_plane_residual = a.at("best_plane_residual").get<double>();
  if (j.contains("timing_ms")) r.timing_ms = j.at("timing_ms").get<double>();
  return r;
}

// ---------------------------------------------------------------------------
// Plain text.

inline std::string vector_text(const Vector& v, const std::vector<std::string>& names) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k].is_zero()) continue;
    std::string c = v[k].to_string();
    bool neg = c.front() == '-';
    if (neg) c.erase(0, 1);
    if (!v[k].is_rational() && sgn(v[k].rational_part()) != 0) {
      c = "(" + v[k].to_string() + ")";
      neg = false;
    }
    s += s.empty() ? (neg ? "-" : "") : (neg ? " - " : " + ");
    s += (c == "1" ? "" : c + "*") + names[k];
  }
  return s.empty() ? "0" : s;
}

inline std::string subspace_text(const Subspace& w, const std::vector<std::string>& names) {
  std::string s = "span(";
  auto vs = w.vectors();
  for (std::size_t i = 0; i < vs.size(); ++i) s += (i ? ", " : "") + vector_text(vs[i], names);
  return s + ")";
}

inline std::string to_text(const Report& r, const std::vector<std::string>& m_names) {
  std::ostringstream os;
  os << "model " << r.id;
  if (!r.params.empty()) {
    os << " at ";
    bool first = true;
    for (const auto& [k, v] : r.params) {
      os << (first ? "" : ", ") << k << "=" << v.get_str();
      first = false;
    }
  }
  os << "\nsignature (" << r.signature.positive << "," << r.signature.negative << ")\n";
  for (std::size_t i = 0; i < 4; ++i) os << "Lambda_" << (i + 1) << " = " << r.lambda[i].to_string() << "\n";
  os << "Ricci operator Q = " << r.q.to_string() << "\n";
  os << "scalar curvature tau = " << r.tau.to_string() << "\n";
  os << "Segre type " << (r.segre_error.empty() ? r.segre_render : "undetermined (" + r.segre_error + ")") << "\n";
  os << "conformally flat: " << (r.conformally_flat ? "yes" : "no") << "\n";
  os << "Ricci-parallel: " << (r.ricci_parallel ? "yes" : "no") << "\n";
  os << "locally symmetric: " << (r.locally_symmetric ? "yes" : "no") << "\n";
  const auto& line = r.walker.line;
  os << "invariant null line field: " << to_string(line.verdict);
  if (line.all_lines) os << " (every line is invariant)";
  os << "\n";
  for (const auto& w : line.witnesses) {
    os << "  span(" << vector_text(w.generator, m_names) << ")  omega = (";
    for (std::size_t i = 0; i < w.omega.size(); ++i) os << (i ? ", " : "") << w.omega[i].to_string();
    os << ")\n";
  }
  if (!line.reason.empty()) os << "  reason: " << line.reason << "\n";
  const auto& plane = r.walker.plane;
  os << "invariant null plane field: " << to_string(plane.verdict);
  if (plane.all_planes) os << " (every plane is invariant)";
  os << "\n";
  for (const auto& w : plane.witnesses) os << "  " << subspace_text(w, m_names) << "\n";
  if (!plane.reason.empty()) os << "  reason: " << plane.reason << "\n";
  auto cert = [&](const char* what, const Certificate& c) {
    os << what << " search: " << to_string(c.strategy);
    if (c.strategy == Certificate::Strategy::EigenvalueTuples) os << ", " << c.tuples_examined << " eigenvalue tuples";
    if (c.strategy == Certificate::Strategy::Adaptive) os << ", " << c.branches << " branches";
    os << (c.exhaustive ? ", exhaustive" : ", not exhaustive") << "\n";
    for (const auto& n : c.notes) os << "  note: " << n << "\n";
  };
  cert("line", line.certificate);
  cert("plane", plane.certificate);
  os << "float oracle agrees: " << (r.walker.oracle_agreement ? "yes" : "no") << "\n";
  return os.str();
}

}  // namespace walkerlab

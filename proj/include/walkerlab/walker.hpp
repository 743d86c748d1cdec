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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "walkerlab/factor.hpp"
#include "walkerlab/float_oracle.hpp"
#include "walkerlab/geometry.hpp"
#include "walkerlab/quadric.hpp"

namespace walkerlab {

enum class Verdict { Exists, None, Indeterminate };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Exists: return "exists";
    case Verdict::None: return "none";
    case Verdict::Indeterminate: return "indeterminate-exact";
  }
  return "?";
}

/// How the common eigenspaces were enumerated.
///
/// When every family member has a characteristic polynomial that splits into
/// linear and irreducible quadratic factors over the active field, all tuples
/// of real eigenvalues are enumerated (pruned tuples still count), so
/// `tuples_examined` equals the product of `root_counts`. Otherwise an
/// adaptive search restricts members to invariant subspaces before
/// factoring; `branches` then counts its nodes.
struct Certificate {
  enum class Strategy { EigenvalueTuples, Adaptive, Signature };
  Strategy strategy = Strategy::EigenvalueTuples;
  std::vector<std::size_t> root_counts;
  std::uint64_t tuples_examined = 0;
  std::uint64_t branches = 0;
  bool exhaustive = true;
  std::vector<std::string> notes;
};

inline std::string to_string(Certificate::Strategy s) {
  switch (s) {
    case Certificate::Strategy::EigenvalueTuples: return "eigenvalue-tuples";
    case Certificate::Strategy::Adaptive: return "adaptive";
    case Certificate::Strategy::Signature: return "signature";
  }
  return "?";
}

struct LineWitness {
  Subspace line{4};
  Vector generator;
  /// omega[i] with F_i x = omega[i] x for each family member F_i.
  std::vector<Scalar> omega;
};

struct LineFieldResult {
  Verdict verdict = Verdict::Indeterminate;
  std::vector<LineWitness> witnesses;
  /// Every line is invariant (all family members are scalar).
  bool all_lines = false;
  std::string reason;
  Certificate certificate;
  /// Solution pieces inside the common eigenspaces, in R^4.
  std::vector<QuadricPiece> families;
};

struct PlaneFieldResult {
  Verdict verdict = Verdict::Indeterminate;
  std::vector<Subspace> witnesses;
  bool all_planes = false;
  std::string reason;
  Certificate certificate;
  /// Solution pieces in Pluecker coordinates.
  std::vector<QuadricPiece> families;
};

struct WalkerReport {
  LineFieldResult line;
  PlaneFieldResult plane;
  OracleReport oracle;
  bool oracle_agreement = false;
};

/// Lambda_1..Lambda_4 followed by the isotropy matrices.
inline std::vector<Matrix> invariant_family(const HomogeneousModel& m, const ConnectionTable& conn) {
  std::vector<Matrix> f(conn.lambda.begin(), conn.lambda.end());
  for (const auto& h : m.isotropy()) f.push_back(h);
  return f;
}

struct CommonEigenspaces {
  std::vector<Subspace> spaces;
  Certificate certificate;
};

namespace detail {

inline bool is_scalar_on(const Matrix& a, const Subspace& s) {
  Matrix c = restrict_operator(a, s);
  for (std::size_t i = 0; i < c.rows(); ++i)
    for (std::size_t j = 0; j < c.cols(); ++j)
      if (i != j ? !c(i, j).is_zero() : c(i, i) != c(0, 0)) return false;
  return true;
}

inline bool is_recoverable(const Error& e) {
  return e.kind() == ErrorKind::MixedRadicands || e.kind() == ErrorKind::UnsupportedAlgebraicDegree ||
         e.kind() == ErrorKind::NegativeSqrt;
}

inline Matrix shifted(const Matrix& a, const Scalar& mu) {
  Matrix r = a;
  for (std::size_t i = 0; i < r.rows(); ++i) r(i, i) -= mu;
  return r;
}

inline std::optional<CommonEigenspaces> tuple_enumeration(const std::vector<Matrix>& family) {
  const std::size_t n = family.front().rows();
  std::vector<std::vector<Subspace>> eig(family.size());
  CommonEigenspaces out;
  out.certificate.strategy = Certificate::Strategy::EigenvalueTuples;
  try {
    for (std::size_t i = 0; i < family.size(); ++i) {
      Spectrum s = spectrum(family[i]);
      for (const auto& r : s.real) eig[i].push_back(kernel(shifted(family[i], r.value)));
      out.certificate.root_counts.push_back(s.real.size());
    }
    std::vector<std::uint64_t> tail(family.size() + 1, 1);
    for (std::size_t i = family.size(); i-- > 0;) tail[i] = tail[i + 1] * eig[i].size();
    std::function<void(std::size_t, const Subspace&)> walk = [&](std::size_t depth, const Subspace& e) {
      if (depth == family.size()) {
        ++out.certificate.tuples_examined;
        out.spaces.push_back(e);
        return;
      }
      for (const auto& s : eig[depth]) {
        Subspace next = intersect(e, s);
        ++out.certificate.branches;
        if (next.dim() == 0) out.certificate.tuples_examined += tail[depth + 1];
        else walk(depth + 1, next);
      }
    };
    walk(0, Subspace::whole(n));
  } catch (const Error& e) {
    if (!is_recoverable(e)) throw;
    return std::nullopt;
  }
  return out;
}

inline CommonEigenspaces adaptive_search(const std::vector<Matrix>& family) {
  const std::size_t n = family.front().rows();
  CommonEigenspaces out;
  out.certificate.strategy = Certificate::Strategy::Adaptive;
  std::function<void(Subspace)> walk = [&](Subspace e) {
    ++out.certificate.branches;
    for (;;) {
      std::size_t before = e.dim();
      for (const auto& a : family) e = largest_invariant_subspace(a, e);
      if (e.dim() == before || e.dim() == 0) break;
    }
    if (e.dim() == 0) return;
    bool any_nonscalar = false;
    std::string last_failure;
    for (const auto& a : family) {
      if (is_scalar_on(a, e)) continue;
      any_nonscalar = true;
      try {
        Matrix c = restrict_operator(a, e);
        Spectrum s = spectrum(c);
        std::vector<Subspace> children;
        for (const auto& r : s.real) {
          Subspace k = kernel(shifted(c, r.value));
          std::vector<Vector> lifted;
          for (const auto& v : k.vectors()) lifted.push_back(e.combine(v));
          children.push_back(Subspace::span(lifted, n));
        }
        for (auto& child : children) walk(std::move(child));
        return;
      } catch (const Error& err) {
        if (!is_recoverable(err)) throw;
        last_failure = err.what();
      }
    }
    if (!any_nonscalar) {
      out.spaces.push_back(e);
      return;
    }
    out.certificate.exhaustive = false;
    out.certificate.notes.push_back("no family member factors on " + e.to_string() + ": " + last_failure);
  };
  walk(Subspace::whole(n));
  return out;
}

}  // namespace detail

/// Maximal subspaces on which every family member acts as a scalar. Every
/// common eigenvector with eigenvalues in the active field lies in one of
/// them, unless the certificate says the search was not exhaustive.
inline CommonEigenspaces common_eigenspaces(const std::vector<Matrix>& family) {
  if (family.empty()) throw Error(ErrorKind::InvalidArgument, "empty matrix family");
  if (auto t = detail::tuple_enumeration(family)) return *t;
  return detail::adaptive_search(family);
}

/// Nullity forms on Pluecker coordinates: the entries of M g M^T, where M is
/// the bivector matrix, vanish exactly when the plane is totally null.
inline std::vector<Matrix> plane_null_forms(const Matrix& g) {
  std::array<Matrix, 6> e{Matrix(4, 4), Matrix(4, 4), Matrix(4, 4), Matrix(4, 4), Matrix(4, 4), Matrix(4, 4)};
  for (std::size_t k = 0; k < 6; ++k) e[k] = bivector_matrix(unit_vector(6, k));
  std::vector<Matrix> forms;
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t s = r; s < 4; ++s) {
      Matrix f(6, 6);
      for (std::size_t k = 0; k < 6; ++k)
        for (std::size_t l = 0; l < 6; ++l) {
          Scalar v;
          for (std::size_t a = 0; a < 4; ++a)
            for (std::size_t b = 0; b < 4; ++b)
              if (!e[k](r, a).is_zero() && !e[l](s, b).is_zero()) v += e[k](r, a) * g(a, b) * e[l](s, b);
          f(k, l) += Scalar(Rational(1, 2)) * v;
          f(l, k) += Scalar(Rational(1, 2)) * v;
        }
      forms.push_back(f);
    }
  return forms;
}

/// The decomposability quadric omega ^ omega = 0 as a symmetric form.
inline Matrix pluecker_form() {
  Matrix s(6, 6);
  const Scalar h(Rational(1, 2));
  s(0, 5) = s(5, 0) = h;
  s(1, 4) = s(4, 1) = -h;
  s(2, 3) = s(3, 2) = h;
  return s;
}

inline bool is_totally_null(const Matrix& g, const Subspace& w) {
  return restrict_form(g, w.vectors()).is_zero();
}

inline bool is_invariant(const std::vector<Matrix>& family, const Subspace& w) {
  for (const auto& a : family)
    for (const auto& v : w.vectors())
      if (!w.contains(a * v)) return false;
  return true;
}

/// Scalars omega_i with F_i x = omega_i x; throws if x is not a common eigenvector.
inline std::vector<Scalar> eigen_functionals(const std::vector<Matrix>& family, const Vector& x) {
  std::size_t p = 0;
  while (p < x.size() && x[p].is_zero()) ++p;
  if (p == x.size()) throw Error(ErrorKind::InvalidArgument, "zero vector");
  std::vector<Scalar> omega;
  for (const auto& a : family) {
    Vector y = a * x;
    Scalar w = y[p] / x[p];
    if (y != w * x) throw Error(ErrorKind::InvalidArgument, "not a common eigenvector");
    omega.push_back(w);
  }
  return omega;
}

/// Does some reported solution family contain the line or plane x?
/// For lines x is a vector in R^4; for planes, a Pluecker vector.
inline bool covers(const std::vector<QuadricPiece>& families, const std::vector<Matrix>& forms, const Vector& x) {
  for (const auto& f : forms)
    if (!bilinear(f, x, x).is_zero()) return false;
  for (const auto& p : families)
    if (p.span.contains(x)) return true;
  return false;
}

namespace detail {

inline Verdict decide(bool found, bool exhaustive, bool complete) {
  if (found) return Verdict::Exists;
  return exhaustive && complete ? Verdict::None : Verdict::Indeterminate;
}

/// Explicit totally null plane of a neutral metric.
inline std::optional<Subspace> some_null_plane(const Matrix& g) {
  auto x = isotropic_vector(g);
  if (!x) return std::nullopt;
  Vector gx = g * *x;
  std::size_t k = 0;
  while (k < 4 && gx[k].is_zero()) ++k;
  Vector y = unit_vector(4, k);  // g(x, e_k) = gx[k] != 0
  Matrix cond = Matrix::from_rows({g * *x, g * y}, 4);
  Subspace u = kernel(cond);
  auto z = isotropic_vector(restrict_form(g, u.vectors()));
  if (!z) return std::nullopt;
  return Subspace::span({*x, u.combine(*z)}, 4);
}

}  // namespace detail

inline LineFieldResult invariant_null_lines(const std::vector<Matrix>& family, const Matrix& g) {
  LineFieldResult out;
  Signature sig = signature_of(g);
  if (sig.positive == 0 || sig.negative == 0) {
    out.verdict = Verdict::None;
    out.reason = "definite metric has no null vectors";
    out.certificate.strategy = Certificate::Strategy::Signature;
    return out;
  }
  CommonEigenspaces ce = common_eigenspaces(family);
  out.certificate = ce.certificate;
  bool complete = true;
  for (const auto& e : ce.spaces) {
    if (e.dim() == 4) out.all_lines = true;
    QuadricSolution sol = solve_quadrics({g}, e);
    complete = complete && sol.complete;
    for (auto& note : sol.unresolved) out.certificate.notes.push_back(note);
    for (auto& piece : sol.pieces) {
      std::vector<Vector> gens =
          piece.kind == QuadricPiece::Kind::Linear ? piece.span.vectors() : std::vector<Vector>{piece.sample};
      for (const auto& x : gens) {
        LineWitness w;
        w.line = Subspace::span({x}, 4);
        w.generator = w.line.vectors().front();
        // Independent recheck against the raw conditions.
        if (!bilinear(g, w.generator, w.generator).is_zero() || !is_invariant(family, w.line))
          throw Error(ErrorKind::InvalidArgument, "internal: unsound line witness " + w.line.to_string());
        w.omega = eigen_functionals(family, w.generator);
        bool dup = false;
        for (const auto& o : out.witnesses) dup = dup || o.line == w.line;
        if (!dup) out.witnesses.push_back(std::move(w));
      }
      out.families.push_back(std::move(piece));
    }
  }
  out.verdict = detail::decide(!out.witnesses.empty(), out.certificate.exhaustive, complete);
  if (out.verdict == Verdict::None) out.reason = "no common eigenspace contains a null vector";
  if (out.verdict == Verdict::Indeterminate) out.reason = "search left the supported scalar field";
  return out;
}

inline PlaneFieldResult invariant_null_planes(const std::vector<Matrix>& family, const Matrix& g) {
  PlaneFieldResult out;
  Signature sig = signature_of(g);
  if (std::min(sig.positive, sig.negative) < 2) {
    out.verdict = Verdict::None;
    out.reason = "max-isotropic-dim: totally null subspaces have dimension at most " +
                 std::to_string(std::min(sig.positive, sig.negative));
    out.certificate.strategy = Certificate::Strategy::Signature;
    return out;
  }
  std::vector<Matrix> derived;
  for (const auto& a : family) derived.push_back(exterior_square(a));
  CommonEigenspaces ce = common_eigenspaces(derived);
  out.certificate = ce.certificate;
  std::vector<Matrix> forms{pluecker_form()};
  for (auto& f : plane_null_forms(g)) forms.push_back(std::move(f));
  bool complete = true;
  auto accept = [&](const Subspace& w) {
    if (w.dim() != 2 || !is_totally_null(g, w) || !is_invariant(family, w))
      throw Error(ErrorKind::InvalidArgument, "internal: unsound plane witness " + w.to_string());
    for (const auto& o : out.witnesses)
      if (o == w) return;
    out.witnesses.push_back(w);
  };
  for (const auto& e : ce.spaces) {
    if (e.dim() == 6) {
      // Every plane is invariant; report one null plane and flag the rest.
      out.all_planes = true;
      try {
        if (auto w = detail::some_null_plane(g)) {
          accept(*w);
          QuadricPiece p;
          p.kind = QuadricPiece::Kind::Curved;
          p.span = e;
          auto vs = w->vectors();
          p.sample = normalized(wedge(vs[0], vs[1]));
          out.families.push_back(p);
        }
      } catch (const Error& err) {
        if (!detail::is_recoverable(err)) throw;
        complete = false;
        out.certificate.notes.push_back(err.what());
      }
      continue;
    }
    QuadricSolution sol = solve_quadrics(forms, e);
    complete = complete && sol.complete;
    for (auto& note : sol.unresolved) out.certificate.notes.push_back(note);
    for (auto& piece : sol.pieces) {
      std::vector<Vector> gens =
          piece.kind == QuadricPiece::Kind::Linear ? piece.span.vectors() : std::vector<Vector>{piece.sample};
      for (const auto& omega : gens) accept(plane_of(omega));
      out.families.push_back(std::move(piece));
    }
  }
  out.verdict = detail::decide(!out.witnesses.empty(), out.certificate.exhaustive, complete);
  if (out.verdict == Verdict::None) out.reason = "no invariant bivector is decomposable and null";
  if (out.verdict == Verdict::Indeterminate) out.reason = "search left the supported scalar field";
  return out;
}

inline bool oracle_agrees(const LineFieldResult& line, const PlaneFieldResult& plane, const OracleReport& o,
                          const ConnectionTable& conn, const RicciData& ric) {
  auto same = [](Verdict v, bool approx) { return v == Verdict::Indeterminate || (v == Verdict::Exists) == approx; };
  if (!same(line.verdict, o.line_exists) || !same(plane.verdict, o.plane_exists)) return false;
  double scale = 1;
  for (const auto& l : o.geometry.lambda) scale = std::max(scale, l.cwiseAbs().maxCoeff());
  scale = std::max(scale, o.geometry.q.cwiseAbs().maxCoeff());
  double err = (detail::to_eigen(ric.q) - o.geometry.q).cwiseAbs().maxCoeff();
  for (int i = 0; i < 4; ++i) err = std::max(err, (detail::to_eigen(conn[i]) - o.geometry.lambda[i]).cwiseAbs().maxCoeff());
  return err <= 1e-9 * scale;
}

inline WalkerReport walker_report(const HomogeneousModel& m, const Geometry& geo) {
  WalkerReport r;
  auto family = invariant_family(m, geo.connection);
  r.line = invariant_null_lines(family, m.metric());
  r.plane = invariant_null_planes(family, m.metric());
  r.oracle = float_oracle(m);
  r.oracle_agreement = oracle_agrees(r.line, r.plane, r.oracle, geo.connection, geo.ricci);
  return r;
}

inline WalkerReport walker_report(const HomogeneousModel& m) { return walker_report(m, compute_geometry(m)); }

}  // namespace walkerlab

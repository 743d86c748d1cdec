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

#include <string>
#include <vector>

#include "walkerlab/factor.hpp"
#include "walkerlab/linalg.hpp"

namespace walkerlab {

/// A piece of the common zero set of a system of quadratic forms, viewed
/// projectively inside the coordinate space.
struct QuadricPiece {
  enum class Kind {
    Point,   // a single direction
    Linear,  // every direction of `span` is a solution
    Curved,  // solutions are the isotropic directions of one form on `span`
  };
  Kind kind = Kind::Point;
  Subspace span{0};
  Vector sample;
};

struct QuadricSolution {
  std::vector<QuadricPiece> pieces;
  bool complete = true;
  std::vector<std::string> unresolved;
};

namespace detail {

/// Restriction of the form M to the subspace with basis rows B.
inline Matrix restrict_rows(const Matrix& m, const Matrix& b) { return b * m * b.transpose(); }

inline Vector lift(const Matrix& b, const Vector& coords) {
  Vector v(b.cols());
  for (std::size_t a = 0; a < coords.size(); ++a)
    if (!coords[a].is_zero()) v = v + coords[a] * b.row(a);
  return v;
}

inline Subspace lift_span(const Matrix& b, const std::vector<Vector>& coords) {
  std::vector<Vector> vs;
  for (const auto& c : coords) vs.push_back(lift(b, c));
  return Subspace::span(vs, b.cols());
}

inline Scalar eval_form(const Matrix& m, const Vector& x) { return bilinear(m, x, x); }

class QuadricSolver {
 public:
  explicit QuadricSolver(std::vector<Matrix> forms) : forms_(std::move(forms)) {}

  QuadricSolution solve(const Subspace& v) {
    run(v, 0);
    return std::move(out_);
  }

 private:
  void unresolved(const std::string& why) {
    out_.complete = false;
    out_.unresolved.push_back(why);
  }

  void add_point(const Vector& x) {
    QuadricPiece p;
    p.kind = QuadricPiece::Kind::Point;
    p.span = Subspace::span({x}, x.size());
    p.sample = p.span.vectors().front();
    out_.pieces.push_back(p);
  }

  void run(const Subspace& v, int depth) {
    if (v.dim() == 0) return;
    if (depth > 32) return unresolved("recursion limit");
    const Matrix b = v.basis();
    // Restrict, drop forms that vanish identically.
    std::vector<Matrix> live;
    for (const auto& f : forms_) {
      Matrix r = restrict_rows(f, b);
      if (!r.is_zero()) live.push_back(std::move(r));
    }
    if (live.empty()) {
      QuadricPiece p;
      p.kind = v.dim() == 1 ? QuadricPiece::Kind::Point : QuadricPiece::Kind::Linear;
      p.span = v;
      p.sample = v.vectors().front();
      out_.pieces.push_back(p);
      return;
    }
    if (v.dim() == 1) return;  // a nonzero form on a line has no isotropic direction

    // A semidefinite form vanishes exactly on its radical.
    std::size_t best = 0, best_rank = 1000;
    for (std::size_t i = 0; i < live.size(); ++i) {
      Signature s = signature_of(live[i]);
      if (s.positive == 0 || s.negative == 0) {
        return run(lift_span(b, kernel(live[i]).vectors()), depth + 1);
      }
      std::size_t r = static_cast<std::size_t>(s.positive + s.negative);
      if (r < best_rank) {
        best_rank = r;
        best = i;
      }
    }
    const Matrix& f = live[best];
    if (best_rank == 2) return split_pair(b, f, depth);
    if (live.size() == 1) {
      auto x = isotropic_vector(f);
      QuadricPiece p;
      p.kind = QuadricPiece::Kind::Curved;
      p.span = v;
      p.sample = normalized(lift(b, *x));
      out_.pieces.push_back(p);
      return;
    }
    if (v.dim() == 3) return conic(b, live, best);
    unresolved("system of " + std::to_string(live.size()) + " quadrics of rank >= 3 on a " +
               std::to_string(v.dim()) + "-dimensional space");
  }

  /// An indefinite form of rank two is a product of two linear forms.
  void split_pair(const Matrix& b, const Matrix& f, int depth) {
    auto diag = congruence_diagonalize(f);
    std::size_t i = 0, j = 0;
    bool have_i = false;
    for (std::size_t k = 0; k < diag.values.size(); ++k) {
      if (diag.values[k].is_zero()) continue;
      if (!have_i) {
        i = k;
        have_i = true;
      } else {
        j = k;
      }
    }
    Scalar r = Scalar::sqrt(-diag.values[j] / diag.values[i]);
    for (int sign : {1, -1}) {
      std::vector<Vector> coords;
      for (std::size_t k = 0; k < diag.values.size(); ++k)
        if (k != i && k != j) coords.push_back(diag.basis.col(k));
      // values_i y_i^2 + values_j y_j^2 = 0 along y_i = +-r y_j.
      coords.push_back(diag.basis.col(j) + Scalar(sign) * r * diag.basis.col(i));
      run(lift_span(b, coords), depth + 1);
    }
  }

  /// Rank-three conic on a three-dimensional space: rational parametrization
  /// from one isotropic point, then common roots of the other forms.
  void conic(const Matrix& b, const std::vector<Matrix>& live, std::size_t which) {
    const Matrix& f = live[which];
    auto x0 = isotropic_vector(f);
    if (!x0) return;
    std::vector<Vector> c;
    for (std::size_t a = 0; a < 3 && c.size() < 2; ++a) {
      std::vector<Vector> trial = c;
      trial.push_back(unit_vector(3, a));
      trial.push_back(*x0);
      if (Subspace::span(trial, 3).dim() == trial.size()) c.push_back(unit_vector(3, a));
    }
    const Vector& c1 = c[0];
    const Vector& c2 = c[1];
    auto point = [&](const Vector& u) {
      return bilinear(f, u, u) * *x0 - Scalar(2) * bilinear(f, *x0, u) * u;
    };
    // x(z) = X0 + X1 z + X2 z^2 for u = c1 + z c2.
    Scalar f11 = bilinear(f, c1, c1), f12 = bilinear(f, c1, c2), f22 = bilinear(f, c2, c2);
    Scalar b1 = bilinear(f, *x0, c1), b2 = bilinear(f, *x0, c2);
    std::array<Vector, 3> xs{f11 * *x0 - Scalar(2) * b1 * c1,
                             Scalar(2) * f12 * *x0 - Scalar(2) * (b1 * c2 + b2 * c1),
                             f22 * *x0 - Scalar(2) * b2 * c2};
    Poly common;
    bool any = false;
    for (std::size_t k = 0; k < live.size(); ++k) {
      if (k == which) continue;
      std::vector<Scalar> coeff(5);
      for (std::size_t p = 0; p < 3; ++p)
        for (std::size_t q = 0; q < 3; ++q) coeff[p + q] += bilinear(live[k], xs[p], xs[q]);
      Poly poly(coeff);
      if (poly.is_zero()) continue;
      common = any ? gcd(common, poly) : poly;
      any = true;
    }
    if (!any) {
      QuadricPiece p;
      p.kind = QuadricPiece::Kind::Curved;
      p.span = lift_span(b, {unit_vector(3, 0), unit_vector(3, 1), unit_vector(3, 2)});
      p.sample = normalized(lift(b, *x0));
      out_.pieces.push_back(p);
      return;
    }
    auto satisfies = [&](const Vector& x) {
      for (const auto& m : live)
        if (!eval_form(m, x).is_zero()) return false;
      return true;
    };
    if (common.degree() > 0) {
      Spectrum s = spectrum_of(common);
      for (const auto& root : s.real) {
        Vector x = xs[0] + root.value * xs[1] + root.value * root.value * xs[2];
        if (satisfies(x)) add_point(lift(b, x));
      }
    }
    Vector at_infinity = point(c2);
    if (satisfies(at_infinity)) add_point(lift(b, at_infinity));
  }

  std::vector<Matrix> forms_;
  QuadricSolution out_;
};

}  // namespace detail

/// Common isotropic directions of `forms` inside `v`. Algebraic steps that
/// leave the scalar field mark the solution incomplete instead of failing.
inline QuadricSolution solve_quadrics(const std::vector<Matrix>& forms, const Subspace& v) {
  detail::QuadricSolver solver(forms);
  QuadricSolution sol;
  try {
    sol = solver.solve(v);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::MixedRadicands && e.kind() != ErrorKind::UnsupportedAlgebraicDegree &&
        e.kind() != ErrorKind::NegativeSqrt)
      throw;
    sol.complete = false;
    sol.unresolved.push_back(e.what());
  }
  // Merge duplicates.
  std::vector<QuadricPiece> unique;
  for (auto& p : sol.pieces) {
    bool dup = false;
    for (const auto& u : unique) dup = dup || (u.kind == p.kind && u.span == p.span);
    if (!dup) unique.push_back(std::move(p));
  }
  sol.pieces = std::move(unique);
  return sol;
}

}  // namespace walkerlab

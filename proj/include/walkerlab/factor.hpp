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

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "walkerlab/linalg.hpp"
#include "walkerlab/poly.hpp"

namespace walkerlab {

/// One factor of a factorization: a monic linear polynomial, or a monic
/// quadratic without real roots.
struct Factor {
  Poly poly;
  int multiplicity = 1;
};

struct Factorization {
  Scalar leading;
  std::vector<Factor> factors;
};

struct RealRoot {
  Scalar value;
  int multiplicity = 1;
};

/// The root pair of x^2 - sum x + product (negative discriminant).
struct ComplexPair {
  Scalar sum;
  Scalar product;
  int multiplicity = 1;
};

struct Spectrum {
  std::vector<RealRoot> real;
  std::vector<ComplexPair> complex;
};

namespace detail {

inline std::vector<std::complex<long double>> numeric_roots(const Poly& p) {
  using C = std::complex<long double>;
  std::vector<C> out;
  const int n = p.degree();
  if (n < 1) return out;
  std::vector<long double> c(static_cast<std::size_t>(n + 1));
  for (int k = 0; k <= n; ++k) c[static_cast<std::size_t>(k)] = p.coeff(static_cast<std::size_t>(k)).to_double();
  const long double lead = c[static_cast<std::size_t>(n)];
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = static_cast<double>(-c[static_cast<std::size_t>(i)] / lead);
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  for (int i = 0; i < n; ++i) {
    C z(es.eigenvalues()[i].real(), es.eigenvalues()[i].imag());
    // A few Newton steps in extended precision.
    for (int it = 0; it < 8; ++it) {
      C f = 0, df = 0;
      for (int k = n; k >= 0; --k) {
        df = df * z + f;
        f = f * z + c[static_cast<std::size_t>(k)];
      }
      if (std::abs(df) == 0) break;
      C step = f / df;
      z -= step;
      if (std::abs(step) <= 1e-18L * (1 + std::abs(z))) break;
    }
    out.push_back(z);
  }
  return out;
}

/// Scales a rational polynomial to a primitive integer one.
inline Poly primitive_integer(const Poly& p) {
  Integer den = 1;
  for (const auto& c : p.coeffs()) den = lcm(den, c.rational_part().get_den());
  Integer content = 0;
  std::vector<Scalar> ints;
  for (const auto& c : p.coeffs()) {
    Integer v = Rational(c.rational_part() * Rational(den)).get_num();
    content = gcd(content, v);
    ints.emplace_back(v);
  }
  if (content == 0) return p;
  Scalar f = Rational(Integer(1), content);
  if (sgn(ints.back().rational_part()) < 0) f = -f;
  for (auto& v : ints) v *= f;
  return Poly(std::move(ints));
}

inline bool round_to_integer(long double x, Integer& out) {
  if (!std::isfinite(x) || std::fabs(x) > 9e15L) return false;
  out = Integer(static_cast<long>(std::llround(x)));
  return true;
}

/// Splits a squarefree rational polynomial into monic factors of degree
/// one or two that are irreducible over Q. Roots are proposed numerically
/// and every factor is confirmed by exact division.
inline std::vector<Poly> rational_pieces(const Poly& s) {
  std::vector<Poly> pieces;
  Poly rem = s.monic();

  // Rational roots: p/q with q dividing the leading coefficient.
  {
    auto roots = numeric_roots(rem);
    std::vector<Integer> qs = divisors(primitive_integer(rem).leading().rational_part().get_num());
    for (const auto& r : roots) {
      if (std::fabs(r.imag()) > 1e-6L * (1 + std::abs(r))) continue;
      for (const auto& q : qs) {
        Integer num;
        if (!round_to_integer(r.real() * q.get_d(), num)) continue;
        Scalar cand = make_rational(num, q);
        if (rem(cand).is_zero()) {
          pieces.push_back(Poly::linear_root(cand));
          rem = divmod(rem, pieces.back()).first;
          break;
        }
      }
    }
  }

  // Quadratic factors from pairs of numeric roots (Gauss's lemma bounds the
  // leading coefficient by that of the primitive integer form).
  while (rem.degree() > 2) {
    auto roots = numeric_roots(rem);
    std::vector<Integer> qs = divisors(primitive_integer(rem).leading().rational_part().get_num());
    bool found = false;
    for (std::size_t i = 0; i < roots.size() && !found; ++i) {
      for (std::size_t j = i + 1; j < roots.size() && !found; ++j) {
        auto sum = roots[i] + roots[j];
        auto prod = roots[i] * roots[j];
        if (std::fabs(sum.imag()) > 1e-6L * (1 + std::abs(sum))) continue;
        if (std::fabs(prod.imag()) > 1e-6L * (1 + std::abs(prod))) continue;
        for (const auto& q : qs) {
          Integer b, c;
          if (!round_to_integer(-sum.real() * q.get_d(), b)) continue;
          if (!round_to_integer(prod.real() * q.get_d(), c)) continue;
          Poly cand({Scalar(c), Scalar(b), Scalar(q)});
          auto [quo, r] = divmod(rem, cand);
          if (r.is_zero()) {
            pieces.push_back(cand.monic());
            rem = quo;
            found = true;
            break;
          }
        }
      }
    }
    if (!found) break;
  }
  if (rem.degree() > 2)
    throw Error(ErrorKind::UnsupportedAlgebraicDegree,
                "irreducible factor of degree " + std::to_string(rem.degree()) + ": " + rem.to_string());
  if (rem.degree() >= 1) pieces.push_back(rem.monic());
  return pieces;
}

inline Scalar quadratic_discriminant(const Poly& monic_quadratic) {
  const Scalar& b = monic_quadratic.coeffs()[1];
  const Scalar& c = monic_quadratic.coeffs()[0];
  return b * b - Scalar(4) * c;
}

inline void adopt_radicand(Integer& active, const Integer& d) {
  if (d == 0) return;
  if (active == 0) {
    active = d;
  } else if (active != d) {
    throw Error(ErrorKind::UnsupportedAlgebraicDegree,
                "roots need both sqrt(" + active.get_str() + ") and sqrt(" + d.get_str() + ")");
  }
}

/// Factors a squarefree polynomial whose coefficients lie in the field.
inline void factor_squarefree(const Poly& s, int multiplicity, Integer& active,
                              std::vector<Factor>& out) {
  if (s.is_rational()) {
    for (const Poly& piece : rational_pieces(s)) {
      if (piece.degree() == 1) {
        out.push_back({piece, multiplicity});
        continue;
      }
      Scalar disc = quadratic_discriminant(piece);
      if (disc.sign() < 0) {
        out.push_back({piece, multiplicity});
        continue;
      }
      Scalar root = Scalar::sqrt(disc.rational_part());
      adopt_radicand(active, root.radicand());
      const Scalar& b = piece.coeffs()[1];
      out.push_back({Poly::linear_root((-b + root) / Scalar(2)), multiplicity});
      out.push_back({Poly::linear_root((-b - root) / Scalar(2)), multiplicity});
    }
    return;
  }

  // Coefficients in Q(sqrt d): every root is a root of the rational norm
  // polynomial s * conj(s), so candidates come from its factorization.
  const Integer d = common_radicand(s.coeffs());
  adopt_radicand(active, d);
  Poly norm = s * s.conjugate();
  std::vector<Poly> norm_pieces;
  for (const auto& [part, m] : squarefree_decomposition(norm)) {
    (void)m;
    for (Poly& p : rational_pieces(part)) norm_pieces.push_back(std::move(p));
  }
  Poly rem = s.monic();
  auto try_root = [&](const Scalar& r) {
    if (rem.degree() >= 1 && rem(r).is_zero()) {
      Poly lin = Poly::linear_root(r);
      rem = divmod(rem, lin).first;
      out.push_back({lin, multiplicity});
    }
  };
  for (const Poly& piece : norm_pieces) {
    if (piece.degree() == 1) {
      try_root(-piece.coeffs()[0]);
      continue;
    }
    Scalar disc = quadratic_discriminant(piece);
    if (disc.sign() < 0) {
      if (rem.degree() >= 2) {
        auto [quo, r] = divmod(rem, piece);
        if (r.is_zero()) {
          rem = quo;
          out.push_back({piece, multiplicity});
        }
      }
      continue;
    }
    Scalar root = Scalar::sqrt(disc.rational_part());
    if (root.radicand() != d) continue;
    const Scalar& b = piece.coeffs()[1];
    try_root((-b + root) / Scalar(2));
    try_root((-b - root) / Scalar(2));
  }
  if (rem.degree() == 2 && quadratic_discriminant(rem).sign() < 0) {
    out.push_back({rem.monic(), multiplicity});
    return;
  }
  if (rem.degree() >= 1)
    throw Error(ErrorKind::UnsupportedAlgebraicDegree,
                "cannot split " + rem.to_string() + " over Q(sqrt(" + d.get_str() + "))");
}

}  // namespace detail

/// Factors P into linear factors over Q or Q(sqrt d) and quadratics with
/// negative discriminant. At most one radicand may appear overall; anything
/// else throws UnsupportedAlgebraicDegree.
inline Factorization factor_over_field(const Poly& p) {
  Factorization f;
  if (p.is_zero()) throw Error(ErrorKind::InvalidArgument, "factoring the zero polynomial");
  f.leading = p.leading();
  Integer active = common_radicand(p.coeffs());
  for (const auto& [part, m] : squarefree_decomposition(p)) detail::factor_squarefree(part, m, active, f.factors);
  return f;
}

inline Spectrum spectrum_of(const Poly& p) {
  Spectrum s;
  for (const Factor& f : factor_over_field(p).factors) {
    if (f.poly.degree() == 1) {
      s.real.push_back({-f.poly.coeffs()[0], f.multiplicity});
    } else {
      s.complex.push_back({-f.poly.coeffs()[1], f.poly.coeffs()[0], f.multiplicity});
    }
  }
  std::sort(s.real.begin(), s.real.end(), [](const RealRoot& a, const RealRoot& b) { return a.value < b.value; });
  std::sort(s.complex.begin(), s.complex.end(), [](const ComplexPair& a, const ComplexPair& b) {
    if (a.sum != b.sum) return a.sum < b.sum;
    return a.product < b.product;
  });
  return s;
}

inline Spectrum spectrum(const Matrix& m) { return spectrum_of(char_poly(m)); }

namespace detail {

/// Block sizes (descending) from the rank sequence of powers of N, where
/// every block accounts for `unit` dimensions.
inline std::vector<int> blocks_from_ranks(const Matrix& n, std::size_t max_power, std::size_t unit) {
  std::vector<std::size_t> r{n.rows()};
  Matrix pw = Matrix::identity(n.rows());
  for (std::size_t k = 1; k <= max_power; ++k) {
    pw = pw * n;
    r.push_back(rank(pw));
    if (r[k] == r[k - 1]) break;
  }
  while (r.size() < max_power + 2) r.push_back(r.back());
  std::vector<int> at_least(max_power + 2, 0);
  for (std::size_t k = 1; k <= max_power; ++k) at_least[k] = static_cast<int>((r[k - 1] - r[k]) / unit);
  std::vector<int> sizes;
  for (std::size_t k = max_power; k >= 1; --k) {
    int exactly = at_least[k] - at_least[k + 1];
    for (int i = 0; i < exactly; ++i) sizes.push_back(static_cast<int>(k));
  }
  return sizes;
}

}  // namespace detail

/// Sizes of the Jordan blocks of M for a real eigenvalue, largest first.
inline std::vector<int> jordan_structure(const Matrix& m, const Scalar& lambda) {
  Matrix n = m - lambda * Matrix::identity(m.rows());
  if (rank(n) == m.rows())
    throw Error(ErrorKind::NotAnEigenvalue, lambda.to_string() + " is not an eigenvalue");
  return detail::blocks_from_ranks(n, m.rows(), 1);
}

/// Sizes of the complex Jordan blocks for the root pair of x^2 - s x + p.
inline std::vector<int> jordan_structure(const Matrix& m, const ComplexPair& pair) {
  Matrix id = Matrix::identity(m.rows());
  Matrix q = m * m - pair.sum * m + pair.product * id;
  if (rank(q) == m.rows())
    throw Error(ErrorKind::NotAnEigenvalue, "complex pair is not in the spectrum");
  return detail::blocks_from_ranks(q, m.rows() / 2, 2);
}

}  // namespace walkerlab

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

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "walkerlab/matrix.hpp"

namespace walkerlab {

struct RrefResult {
  Matrix reduced;
  std::size_t rank = 0;
  std::vector<std::size_t> pivots;
};

inline RrefResult rref(Matrix m) {
  RrefResult out;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t pivot = row;
    while (pivot < m.rows() && m(pivot, col).is_zero()) ++pivot;
    if (pivot == m.rows()) continue;
    if (pivot != row)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(pivot, j), m(row, j));
    Scalar inv = Scalar(1) / m(row, col);
    for (std::size_t j = col; j < m.cols(); ++j) m(row, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col).is_zero()) continue;
      Scalar f = m(i, col);
      for (std::size_t j = col; j < m.cols(); ++j)
        if (!m(row, j).is_zero()) m(i, j) -= f * m(row, j);
    }
    out.pivots.push_back(col);
    ++row;
  }
  out.rank = row;
  out.reduced = std::move(m);
  return out;
}

inline std::size_t rank(const Matrix& m) { return rref(m).rank; }

/// A linear subspace of k^n stored by its reduced row-echelon basis, so two
/// subspaces are equal exactly when their bases are.
class Subspace {
 public:
  Subspace() = default;
  explicit Subspace(std::size_t ambient) : ambient_(ambient), basis_(0, ambient) {}

  static Subspace span(const std::vector<Vector>& vectors, std::size_t ambient) {
    Subspace s(ambient);
    if (vectors.empty()) return s;
    auto r = rref(Matrix::from_rows(vectors, ambient));
    s.basis_ = Matrix(r.rank, ambient);
    for (std::size_t i = 0; i < r.rank; ++i)
      for (std::size_t j = 0; j < ambient; ++j) s.basis_(i, j) = r.reduced(i, j);
    s.pivots_ = r.pivots;
    return s;
  }

  static Subspace whole(std::size_t n) {
    std::vector<Vector> e;
    for (std::size_t i = 0; i < n; ++i) e.push_back(unit_vector(n, i));
    return span(e, n);
  }

  std::size_t ambient() const noexcept { return ambient_; }
  std::size_t dim() const noexcept { return basis_.rows(); }
  const Matrix& basis() const noexcept { return basis_; }
  const std::vector<std::size_t>& pivots() const noexcept { return pivots_; }

  std::vector<Vector> vectors() const {
    std::vector<Vector> v;
    for (std::size_t i = 0; i < dim(); ++i) v.push_back(basis_.row(i));
    return v;
  }

  /// Coordinates of v in the RREF basis (v must lie in the subspace).
  Vector coordinates(const Vector& v) const {
    Vector c(dim());
    for (std::size_t i = 0; i < dim(); ++i) c[i] = v[pivots_[i]];
    return c;
  }

  Vector combine(const Vector& coords) const {
    Vector v(ambient_);
    for (std::size_t i = 0; i < dim(); ++i)
      if (!coords[i].is_zero())
        for (std::size_t j = 0; j < ambient_; ++j) v[j] += coords[i] * basis_(i, j);
    return v;
  }

  bool contains(const Vector& v) const { return combine(coordinates(v)) == v; }

  bool contains(const Subspace& other) const {
    for (const auto& v : other.vectors())
      if (!contains(v)) return false;
    return true;
  }

  /// Rows spanning the annihilator: N x = 0 iff x lies in the subspace.
  Matrix annihilator() const;

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
  }
  friend bool operator!=(const Subspace& a, const Subspace& b) { return !(a == b); }

  std::string to_string() const {
    std::string s = "span{";
    for (std::size_t i = 0; i < dim(); ++i) s += (i ? ", " : "") + walkerlab::to_string(basis_.row(i));
    return s + "}";
  }

 private:
  std::size_t ambient_ = 0;
  Matrix basis_;
  std::vector<std::size_t> pivots_;
};

inline Subspace kernel(const Matrix& m) {
  auto r = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : r.pivots) is_pivot[p] = true;
  std::vector<Vector> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    Vector v(m.cols());
    v[free] = 1;
    for (std::size_t i = 0; i < r.rank; ++i) v[r.pivots[i]] = -r.reduced(i, free);
    basis.push_back(std::move(v));
  }
  return Subspace::span(basis, m.cols());
}

inline Matrix Subspace::annihilator() const {
  if (basis_.rows() == 0) return Matrix::identity(ambient_);
  return kernel(basis_).basis();
}

inline Matrix stack(const Matrix& a, const Matrix& b) {
  if (a.rows() == 0) return b;
  if (b.rows() == 0) return a;
  Matrix m(a.rows() + b.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) m(a.rows() + i, j) = b(i, j);
  return m;
}

inline Subspace intersect(const Subspace& a, const Subspace& b) {
  return kernel(stack(a.annihilator(), b.annihilator()));
}

inline Subspace sum(const Subspace& a, const Subspace& b) {
  auto v = a.vectors();
  auto w = b.vectors();
  v.insert(v.end(), w.begin(), w.end());
  return Subspace::span(v, a.ambient());
}

/// {x in s : A x in s}, iterated to the largest A-invariant subspace of s.
inline Subspace largest_invariant_subspace(const Matrix& a, Subspace s) {
  while (s.dim() > 0) {
    Matrix n = s.annihilator();
    Subspace next = intersect(s, kernel(n * a));
    if (next.dim() == s.dim()) return s;
    s = std::move(next);
  }
  return s;
}

/// Matrix of A restricted to an A-invariant subspace, in its RREF basis.
inline Matrix restrict_operator(const Matrix& a, const Subspace& s) {
  Matrix c(s.dim(), s.dim());
  for (std::size_t j = 0; j < s.dim(); ++j) {
    Vector image = a * s.basis().row(j);
    Vector coords = s.coordinates(image);
    for (std::size_t i = 0; i < s.dim(); ++i) c(i, j) = coords[i];
  }
  return c;
}

/// Gram matrix of the bilinear form g on the subspace's basis.
inline Matrix restrict_form(const Matrix& g, const std::vector<Vector>& basis) {
  Matrix r(basis.size(), basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i; j < basis.size(); ++j) {
      r(i, j) = bilinear(g, basis[i], basis[j]);
      r(j, i) = r(i, j);
    }
  return r;
}

inline Scalar determinant(Matrix m) {
  if (!m.square()) throw Error(ErrorKind::InvalidArgument, "determinant of non-square matrix");
  Scalar det = 1;
  const std::size_t n = m.rows();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m(p, c).is_zero()) ++p;
    if (p == n) return Scalar();
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
      det = -det;
    }
    det *= m(c, c);
    Scalar inv = Scalar(1) / m(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m(i, c).is_zero()) continue;
      Scalar f = m(i, c) * inv;
      for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return det;
}

inline Matrix inverse(const Matrix& m) {
  const std::size_t n = m.rows();
  Matrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  auto r = rref(aug);
  if (r.rank < n || r.pivots[n - 1] != n - 1)
    throw Error(ErrorKind::DivisionByZero, "matrix is singular");
  Matrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = r.reduced(i, n + j);
  return inv;
}

/// Symmetric Gaussian elimination: columns of `basis` are g-orthogonal and
/// basis^T g basis = diag(values).
struct CongruenceDiagonalization {
  Matrix basis;
  Vector values;
};

inline CongruenceDiagonalization congruence_diagonalize(const Matrix& g) {
  const std::size_t n = g.rows();
  Matrix a = g;
  Matrix s = Matrix::identity(n);  // columns: current basis
  auto add_col = [&](std::size_t dst, std::size_t src, const Scalar& f) {
    // e_dst += f e_src, applied as congruence on a.
    for (std::size_t i = 0; i < n; ++i) s(i, dst) += f * s(i, src);
    for (std::size_t j = 0; j < n; ++j) a(dst, j) += f * a(src, j);
    for (std::size_t i = 0; i < n; ++i) a(i, dst) += f * a(i, src);
  };
  auto swap_cols = [&](std::size_t x, std::size_t y) {
    for (std::size_t i = 0; i < n; ++i) std::swap(s(i, x), s(i, y));
    for (std::size_t j = 0; j < n; ++j) std::swap(a(x, j), a(y, j));
    for (std::size_t i = 0; i < n; ++i) std::swap(a(i, x), a(i, y));
  };
  for (std::size_t k = 0; k < n; ++k) {
    if (a(k, k).is_zero()) {
      std::size_t j = k + 1;
      while (j < n && a(j, j).is_zero()) ++j;
      if (j < n) {
        swap_cols(k, j);
      } else {
        j = k + 1;
        while (j < n && a(k, j).is_zero()) ++j;
        if (j == n) continue;  // row k already zero beyond the diagonal
        add_col(k, j, 1);     // a(k,k) becomes 2 a(k,j)
      }
    }
    for (std::size_t j = k + 1; j < n; ++j) {
      if (a(k, j).is_zero()) continue;
      add_col(j, k, -(a(k, j) / a(k, k)));
    }
  }
  CongruenceDiagonalization out{s, Vector(n)};
  for (std::size_t i = 0; i < n; ++i) out.values[i] = a(i, i);
  return out;
}

struct Signature {
  int positive = 0;
  int negative = 0;
  int zero = 0;
  friend bool operator==(const Signature&, const Signature&) = default;
};

inline Signature signature_of(const Matrix& g) {
  Signature sig;
  for (const auto& v : congruence_diagonalize(g).values) {
    int s = v.sign();
    if (s > 0) ++sig.positive;
    else if (s < 0) ++sig.negative;
    else ++sig.zero;
  }
  return sig;
}

/// A nonzero x with x^T G x = 0, or nothing when G is definite. May open a
/// quadratic extension (sqrt of p*q for diagonal values p > 0 > -q).
inline std::optional<Vector> isotropic_vector(const Matrix& g) {
  const std::size_t n = g.rows();
  if (n == 0) return std::nullopt;
  auto diag = congruence_diagonalize(g);
  for (std::size_t i = 0; i < n; ++i)
    if (diag.values[i].is_zero()) return normalized(diag.basis.col(i));

  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < n; ++i) (diag.values[i].sign() > 0 ? pos : neg).push_back(i);
  if (pos.empty() || neg.empty()) return std::nullopt;

  // Prefer a pair whose ratio is a square in the current field.
  std::optional<Error> last_error;
  for (int pass = 0; pass < 2; ++pass) {
    for (auto i : pos) {
      for (auto j : neg) {
        const Scalar& p = diag.values[i];
        Scalar q = -diag.values[j];
        try {
          Scalar ratio = Scalar::sqrt(p / q);
          if (pass == 0 && !ratio.is_rational()) continue;
          // x = e + sqrt(p/q) f:  p - (p/q) q = 0
          Vector x = diag.basis.col(i) + ratio * diag.basis.col(j);
          return normalized(x);
        } catch (const Error& e) {
          last_error = e;
        }
      }
    }
  }
  if (last_error) throw *last_error;
  return std::nullopt;
}

/// Bivector basis order: e1^e2, e1^e3, e1^e4, e2^e3, e2^e4, e3^e4.
inline constexpr std::array<std::pair<int, int>, 6> kBivectorPairs = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

inline int bivector_index(int i, int j) {
  for (int k = 0; k < 6; ++k)
    if (kBivectorPairs[k].first == i && kBivectorPairs[k].second == j) return k;
  return -1;
}

/// Pluecker coordinates of v ^ w.
inline Vector wedge(const Vector& v, const Vector& w) {
  Vector p(6);
  for (int k = 0; k < 6; ++k) {
    auto [i, j] = kBivectorPairs[k];
    p[k] = v[i] * w[j] - v[j] * w[i];
  }
  return p;
}

/// The antisymmetric 4x4 matrix v w^T - w v^T of a bivector.
inline Matrix bivector_matrix(const Vector& p) {
  Matrix m(4, 4);
  for (int k = 0; k < 6; ++k) {
    auto [i, j] = kBivectorPairs[k];
    m(i, j) = p[k];
    m(j, i) = -p[k];
  }
  return m;
}

/// omega ^ omega = 0, the single Pluecker relation in dimension four.
inline Scalar pluecker_relation(const Vector& p) {
  return p[0] * p[5] - p[1] * p[4] + p[2] * p[3];
}

/// The plane of a decomposable bivector (column space of its matrix).
inline Subspace plane_of(const Vector& p) {
  Matrix m = bivector_matrix(p);
  std::vector<Vector> cols;
  for (std::size_t j = 0; j < 4; ++j) cols.push_back(m.col(j));
  return Subspace::span(cols, 4);
}

/// Derivation action of A on bivectors: D(u^v) = Au^v + u^Av.
inline Matrix exterior_square(const Matrix& a) {
  if (a.rows() != 4 || a.cols() != 4)
    throw Error(ErrorKind::InvalidArgument, "exterior_square expects a 4x4 matrix");
  Matrix d(6, 6);
  for (int col = 0; col < 6; ++col) {
    auto [i, j] = kBivectorPairs[col];
    Vector ei = unit_vector(4, i), ej = unit_vector(4, j);
    Vector image = wedge(a * ei, ej) + wedge(ei, a * ej);
    d.set_col(col, image);
  }
  return d;
}

}  // namespace walkerlab

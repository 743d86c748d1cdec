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

#include "walkerlab/model.hpp"

namespace walkerlab {

/// Rank-four array over the m basis, indexed (i, j, k, h).
class Tensor4 {
 public:
  Scalar& operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t h) { return v_[idx(i, j, k, h)]; }
  const Scalar& operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t h) const {
    return v_[idx(i, j, k, h)];
  }
  bool is_zero() const {
    for (const auto& x : v_)
      if (!x.is_zero()) return false;
    return true;
  }
  const std::array<Scalar, 256>& data() const noexcept { return v_; }

 private:
  static std::size_t idx(std::size_t i, std::size_t j, std::size_t k, std::size_t h) {
    return ((i * 4 + j) * 4 + k) * 4 + h;
  }
  std::array<Scalar, 256> v_{};
};

/// Lambda_i column j holds the components of nabla_{u_i} u_j.
struct ConnectionTable {
  std::array<Matrix, 4> lambda{Matrix(4, 4), Matrix(4, 4), Matrix(4, 4), Matrix(4, 4)};

  const Matrix& operator[](std::size_t i) const { return lambda.at(i); }
  /// Lambda_v for v in m.
  Matrix along(const Vector& v) const {
    Matrix m(4, 4);
    for (std::size_t k = 0; k < 4; ++k)
      if (!v[k].is_zero()) m += v[k] * lambda[k];
    return m;
  }
};

struct CurvatureTensor {
  /// op[i][j] is the endomorphism R(u_i, u_j) of m.
  std::array<std::array<Matrix, 4>, 4> op;
  /// R_{ijkh} = g(R(u_i, u_j) u_k, u_h).
  Tensor4 lowered;
};

struct RicciData {
  Matrix rho{4, 4};
  Matrix q{4, 4};
  Scalar tau;
  /// nabla_rho[i] holds the components of nabla_{u_i} rho.
  std::array<Matrix, 4> nabla_rho{Matrix(4, 4), Matrix(4, 4), Matrix(4, 4), Matrix(4, 4)};
};

struct WeylData {
  Tensor4 w;
  bool flat = true;
};

inline ConnectionTable levi_civita(const HomogeneousModel& m) {
  const Matrix& g = m.metric();
  const Matrix& gi = m.metric_inverse();
  std::array<std::array<Vector, 4>, 4> br;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) br[i][j] = m.bracket_m(i, j);
  ConnectionTable t;
  const Scalar half = Scalar(Rational(1, 2));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      // Koszul: 2 g(nabla_X Y, Z) = g([X,Y], Z) - g([Y,Z], X) + g([Z,X], Y).
      Vector lowered(4);
      for (std::size_t k = 0; k < 4; ++k) {
        lowered[k] = half * (bilinear(g, br[i][j], unit_vector(4, k)) - bilinear(g, br[j][k], unit_vector(4, i)) +
                             bilinear(g, br[k][i], unit_vector(4, j)));
      }
      Vector col = gi * lowered;
      t.lambda[i].set_col(j, col);
    }
  return t;
}

inline CurvatureTensor curvature(const HomogeneousModel& m, const ConnectionTable& conn) {
  CurvatureTensor r;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      Matrix op = commutator(conn[i], conn[j]) - conn.along(m.bracket_m(i, j));
      Vector h = m.bracket_h(i, j);
      for (std::size_t a = 0; a < h.size(); ++a)
        if (!h[a].is_zero()) op -= h[a] * m.isotropy()[a];
      r.op[i][j] = op;
    }
  const Matrix& g = m.metric();
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      Matrix low = g * r.op[i][j];  // low(h, k) = g(R(u_i,u_j) u_k, u_h)
      for (std::size_t k = 0; k < 4; ++k)
        for (std::size_t h = 0; h < 4; ++h) r.lowered(i, j, k, h) = low(h, k);
    }
  return r;
}

inline RicciData ricci(const HomogeneousModel& m, const ConnectionTable& conn, const CurvatureTensor& r) {
  RicciData d;
  const Matrix& gi = m.metric_inverse();
  for (std::size_t j = 0; j < 4; ++j)
    for (std::size_t k = 0; k < 4; ++k) {
      Scalar s;
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t l = 0; l < 4; ++l)
          if (!gi(i, l).is_zero()) s += gi(i, l) * r.lowered(i, j, k, l);
      d.rho(j, k) = s;
    }
  d.q = gi * d.rho;
  d.tau = d.q.trace();
  for (std::size_t i = 0; i < 4; ++i) d.nabla_rho[i] = -(conn[i].transpose() * d.rho + d.rho * conn[i]);
  return d;
}

inline WeylData weyl(const HomogeneousModel& m, const CurvatureTensor& r, const RicciData& ric) {
  WeylData out;
  const Matrix& g = m.metric();
  const Matrix& p = ric.rho;
  const Scalar half = Scalar(Rational(1, 2));
  const Scalar sixth_tau = ric.tau / Scalar(6);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      for (std::size_t k = 0; k < 4; ++k)
        for (std::size_t h = 0; h < 4; ++h) {
          Scalar w = r.lowered(i, j, k, h) -
                     half * (g(i, h) * p(j, k) + g(j, k) * p(i, h) - g(i, k) * p(j, h) - g(j, h) * p(i, k)) +
                     sixth_tau * (g(i, h) * g(j, k) - g(i, k) * g(j, h));
          if (!w.is_zero()) out.flat = false;
          out.w(i, j, k, h) = w;
        }
  return out;
}

inline bool is_ricci_parallel(const RicciData& d) {
  for (const auto& m : d.nabla_rho)
    if (!m.is_zero()) return false;
  return true;
}

/// Components of nabla_{u_a} R for a = 0..3 (Lambda acting on every slot).
inline std::array<Tensor4, 4> covariant_derivative(const ConnectionTable& conn, const CurvatureTensor& r) {
  std::array<Tensor4, 4> out;
  for (std::size_t a = 0; a < 4; ++a) {
    const Matrix& l = conn[a];
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j)
        for (std::size_t k = 0; k < 4; ++k)
          for (std::size_t h = 0; h < 4; ++h) {
            Scalar s;
            for (std::size_t p = 0; p < 4; ++p) {
              if (!l(p, i).is_zero()) s += l(p, i) * r.lowered(p, j, k, h);
              if (!l(p, j).is_zero()) s += l(p, j) * r.lowered(i, p, k, h);
              if (!l(p, k).is_zero()) s += l(p, k) * r.lowered(i, j, p, h);
              if (!l(p, h).is_zero()) s += l(p, h) * r.lowered(i, j, k, p);
            }
            out[a](i, j, k, h) = -s;
          }
  }
  return out;
}

inline bool is_locally_symmetric(const ConnectionTable& conn, const CurvatureTensor& r) {
  for (const auto& t : covariant_derivative(conn, r))
    if (!t.is_zero()) return false;
  return true;
}

/// Everything derived from the metric for one model.
struct Geometry {
  ConnectionTable connection;
  CurvatureTensor curvature;
  RicciData ricci;
  WeylData weyl;
  bool ricci_parallel = false;
  bool locally_symmetric = false;
};

inline Geometry compute_geometry(const HomogeneousModel& m) {
  Geometry g;
  g.connection = levi_civita(m);
  g.curvature = curvature(m, g.connection);
  g.ricci = ricci(m, g.connection, g.curvature);
  g.weyl = weyl(m, g.curvature, g.ricci);
  g.ricci_parallel = is_ricci_parallel(g.ricci);
  g.locally_symmetric = is_locally_symmetric(g.connection, g.curvature);
  return g;
}

}  // namespace walkerlab

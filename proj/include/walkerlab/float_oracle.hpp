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
#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "walkerlab/model.hpp"

namespace walkerlab {

using Mat4 = Eigen::Matrix4d;
using Vec4 = Eigen::Vector4d;

/// Double-precision Levi-Civita data, computed without the exact pipeline.
struct ApproxGeometry {
  std::array<Mat4, 4> lambda;
  Mat4 rho = Mat4::Zero();
  Mat4 q = Mat4::Zero();
  double tau = 0;
};

struct OracleReport {
  ApproxGeometry geometry;
  bool line_exists = false;
  std::vector<Vec4> lines;
  bool plane_exists = false;
  /// Columns span each plane.
  std::vector<Eigen::Matrix<double, 4, 2>> planes;
  /// Smallest plane residual met during the search (diagnostic).
  double best_plane_residual = 0;
};

namespace detail {

inline Mat4 to_eigen(const Matrix& m) {
  Mat4 out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out(i, j) = m(i, j).to_double();
  return out;
}

inline Vec4 to_eigen4(const Vector& v) {
  Vec4 out;
  for (int i = 0; i < 4; ++i) out(i) = v[i].to_double();
  return out;
}

inline double family_scale(const std::vector<Mat4>& family) {
  double s = 1;
  for (const auto& a : family) s = std::max(s, a.cwiseAbs().maxCoeff());
  return s;
}

/// Distinct real eigenvalues of A. Eigenvalues of a defective block split
/// into a small polygon around the true value, possibly off the real axis,
/// so nearby values are clustered in the complex plane and averaged before
/// the realness test.
inline std::vector<double> real_eigenvalues(const Mat4& a, double scale) {
  Eigen::EigenSolver<Mat4> es(a, false);
  std::vector<std::complex<double>> z(es.eigenvalues().data(), es.eigenvalues().data() + 4);
  std::array<int, 4> cluster{0, 1, 2, 3};
  for (bool merged = true; merged;) {
    merged = false;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (cluster[i] != cluster[j] && std::abs(z[i] - z[j]) < 1e-4 * scale) {
          int from = std::max(cluster[i], cluster[j]), to = std::min(cluster[i], cluster[j]);
          for (auto& c : cluster)
            if (c == from) c = to;
          merged = true;
        }
  }
  std::vector<double> out;
  for (int c = 0; c < 4; ++c) {
    std::complex<double> sum = 0;
    int n = 0;
    for (int i = 0; i < 4; ++i)
      if (cluster[i] == c) sum += z[i], ++n;
    if (n == 0) continue;
    sum /= static_cast<double>(n);
    if (std::abs(sum.imag()) < 1e-6 * scale) out.push_back(sum.real());
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Orthonormal basis (columns) of the numerical nullspace of m.
inline Eigen::MatrixXd null_space(const Eigen::MatrixXd& m, double tol) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > tol) ++rank;
  const Eigen::MatrixXd& v = svd.matrixV();
  return v.rightCols(v.cols() - rank);
}

/// A null vector of g inside span(n), if one exists within tolerance.
inline std::optional<Vec4> null_vector_in(const Eigen::MatrixXd& n, const Mat4& g, double tol) {
  Eigen::MatrixXd gram = n.transpose() * g * n;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  const auto& ev = es.eigenvalues();
  const Eigen::MatrixXd& vec = es.eigenvectors();
  for (int i = 0; i < ev.size(); ++i)
    if (std::abs(ev(i)) < tol) return Vec4(n * vec.col(i));
  int lo = 0, hi = static_cast<int>(ev.size()) - 1;
  if (ev.size() >= 2 && ev(lo) < 0 && ev(hi) > 0) {
    // Mix the extreme directions so the quadratic form vanishes.
    double t = std::sqrt(-ev(lo) / ev(hi));
    Eigen::VectorXd c = vec.col(lo) + t * vec.col(hi);
    return Vec4(n * c);
  }
  return std::nullopt;
}

}  // namespace detail

inline ApproxGeometry approx_geometry(const HomogeneousModel& m) {
  using detail::to_eigen;
  using detail::to_eigen4;
  const Mat4 g = to_eigen(m.metric());
  const Mat4 gi = g.inverse();
  std::array<std::array<Vec4, 4>, 4> br;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) br[i][j] = to_eigen4(m.bracket_m(i, j));
  std::vector<Mat4> iso;
  for (const auto& h : m.isotropy()) iso.push_back(to_eigen(h));

  ApproxGeometry out;
  // Lambda_i = g^{-1} K_i with K_i(k, j) = (1/2)(g([u_i,u_j],u_k) - g([u_j,u_k],u_i) + g([u_k,u_i],u_j)).
  for (int i = 0; i < 4; ++i) {
    Mat4 k;
    for (int j = 0; j < 4; ++j)
      for (int kk = 0; kk < 4; ++kk)
        k(kk, j) = 0.5 * (g.row(kk).dot(br[i][j]) - g.row(i).dot(br[j][kk]) + g.row(j).dot(br[kk][i]));
    out.lambda[i] = gi * k;
  }
  auto lambda_along = [&](const Vec4& v) {
    Mat4 r = Mat4::Zero();
    for (int a = 0; a < 4; ++a) r += v(a) * out.lambda[a];
    return r;
  };
  // rho(j,k) = sum_{i,l} g^{il} g(R(u_i,u_j)u_k, u_l) = trace over i of (R(u_i,u_j) u_k)^i.
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      Mat4 r = out.lambda[i] * out.lambda[j] - out.lambda[j] * out.lambda[i] - lambda_along(br[i][j]);
      Vector h = m.bracket_h(i, j);
      for (std::size_t a = 0; a < h.size(); ++a) r -= h[a].to_double() * iso[a];
      for (int k = 0; k < 4; ++k) out.rho(j, k) += r(i, k);
    }
  out.q = gi * out.rho;
  out.tau = out.q.trace();
  return out;
}

/// Invariance defect of the plane spanned by the columns of b.
inline double plane_residual(const std::vector<Mat4>& family, const Eigen::Matrix<double, 4, 2>& b) {
  Eigen::HouseholderQR<Eigen::Matrix<double, 4, 2>> qr(b);
  Eigen::Matrix<double, 4, 2> q = qr.householderQ() * Eigen::Matrix<double, 4, 2>::Identity();
  Mat4 proj = Mat4::Identity() - q * q.transpose();
  double r = 0;
  for (const auto& a : family) r += (proj * a * q).norm();
  return r;
}

/// Floating-point search for invariant null lines and totally null planes.
inline OracleReport float_oracle(const HomogeneousModel& m) {
  using detail::to_eigen;
  OracleReport out;
  out.geometry = approx_geometry(m);
  const Mat4 g = to_eigen(m.metric());
  std::vector<Mat4> family(out.geometry.lambda.begin(), out.geometry.lambda.end());
  for (const auto& h : m.isotropy()) family.push_back(to_eigen(h));
  const double scale = detail::family_scale(family);
  const double gscale = std::max(1.0, g.cwiseAbs().maxCoeff());
  const auto sig = m.signature();

  // Lines: every tuple of real eigenvalues, one per family member.
  if (sig.positive > 0 && sig.negative > 0) {
    std::vector<std::vector<double>> roots;
    for (const auto& a : family) roots.push_back(detail::real_eigenvalues(a, scale));
    std::vector<std::size_t> pick(family.size(), 0);
    bool any_empty = std::any_of(roots.begin(), roots.end(), [](const auto& r) { return r.empty(); });
    while (!any_empty) {
      Eigen::MatrixXd stacked(4 * family.size(), 4);
      for (std::size_t i = 0; i < family.size(); ++i)
        stacked.block(4 * static_cast<long>(i), 0, 4, 4) = family[i] - roots[i][pick[i]] * Mat4::Identity();
      Eigen::MatrixXd n = detail::null_space(stacked, 1e-8 * scale);
      if (n.cols() > 0) {
        if (auto x = detail::null_vector_in(n, g, 1e-8 * gscale)) {
          out.line_exists = true;
          out.lines.push_back(x->normalized());
        }
      }
      std::size_t k = 0;
      while (k < pick.size() && ++pick[k] == roots[k].size()) pick[k++] = 0;
      if (k == pick.size()) break;
    }
  }

  // Planes: in neutral signature the totally null planes form two circles,
  // {p + T p} with T a rotation or a reflection in a pseudo-orthonormal frame.
  if (sig.positive == 2 && sig.negative == 2) {
    Eigen::SelfAdjointEigenSolver<Mat4> es(g);
    std::vector<Vec4> plus, minus;
    for (int i = 0; i < 4; ++i) {
      Vec4 f = es.eigenvectors().col(i) / std::sqrt(std::abs(es.eigenvalues()(i)));
      (es.eigenvalues()(i) > 0 ? plus : minus).push_back(f);
    }
    auto basis = [&](int branch, double theta) {
      double c = std::cos(theta), s = std::sin(theta);
      Eigen::Matrix2d t;
      if (branch == 0) t << c, -s, s, c;
      else t << c, s, s, -c;
      Eigen::Matrix<double, 4, 2> b;
      for (int k = 0; k < 2; ++k) b.col(k) = plus[k] + t(0, k) * minus[0] + t(1, k) * minus[1];
      return b;
    };
    const int grid = 4096;
    const double two_pi = 2 * std::acos(-1.0);
    const double tol = 1e-9 * scale;
    out.best_plane_residual = INFINITY;
    for (int branch = 0; branch < 2; ++branch) {
      std::vector<double> vals(grid);
      for (int i = 0; i < grid; ++i) vals[i] = plane_residual(family, basis(branch, two_pi * i / grid));
      if (*std::max_element(vals.begin(), vals.end()) < tol) {
        // Every null plane of this circle is invariant.
        out.best_plane_residual = 0;
        out.plane_exists = true;
        out.planes.push_back(basis(branch, 0));
        continue;
      }
      for (int i = 0; i < grid; ++i) {
        double prev = vals[(i + grid - 1) % grid], next = vals[(i + 1) % grid];
        if (vals[i] > prev || vals[i] >= next) continue;
        // Golden-section refinement around the grid minimum.
        double lo = two_pi * (i - 1) / grid, hi = two_pi * (i + 1) / grid;
        const double phi = (std::sqrt(5.0) - 1) / 2;
        double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
        double f1 = plane_residual(family, basis(branch, x1)), f2 = plane_residual(family, basis(branch, x2));
        for (int it = 0; it < 100; ++it) {
          if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = plane_residual(family, basis(branch, x1));
          } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = plane_residual(family, basis(branch, x2));
          }
        }
        double best = std::min({f1, f2, vals[i]});
        double at = best == vals[i] ? two_pi * i / grid : (f1 < f2 ? x1 : x2);
        out.best_plane_residual = std::min(out.best_plane_residual, best);
        if (best < tol) {
          out.plane_exists = true;
          out.planes.push_back(basis(branch, at));
        }
      }
    }
  }
  return out;
}

}  // namespace walkerlab

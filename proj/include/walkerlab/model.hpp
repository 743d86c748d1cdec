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
#include <utility>
#include <vector>

#include "walkerlab/expr.hpp"
#include "walkerlab/linalg.hpp"

namespace walkerlab {

/// Raw description of a reductive pair g = h + m with dim m = 4. Basis
/// indices 0..dim_h-1 belong to h, the next four to m.
struct ModelData {
  std::string id;
  ParamValues params;
  std::size_t dim_h = 0;
  /// Nonzero brackets [x_i, x_j] for i < j, as coordinates in the full basis.
  std::vector<std::pair<std::pair<std::size_t, std::size_t>, Vector>> brackets;
  Matrix metric{4, 4};
  std::vector<std::string> names;
};

/// A validated homogeneous model: Jacobi, reductivity, nondegenerate
/// symmetric metric and isotropy invariance all hold exactly.
class HomogeneousModel {
 public:
  static constexpr std::size_t kDim = 4;

  static HomogeneousModel build(ModelData data) {
    HomogeneousModel m;
    m.id_ = std::move(data.id);
    m.params_ = std::move(data.params);
    m.dim_h_ = data.dim_h;
    const std::size_t n = m.dim_h_ + kDim;
    m.names_ = std::move(data.names);
    if (m.names_.empty()) m.names_ = default_names(m.dim_h_);
    if (m.names_.size() != n) throw Error(ErrorKind::InvalidArgument, "basis name count does not match dimension");
    m.table_.assign(n, std::vector<Vector>(n, Vector(n)));
    for (auto& [ij, v] : data.brackets) {
      auto [i, j] = ij;
      if (i >= n || j >= n || i == j || v.size() != n)
        throw Error(ErrorKind::InvalidArgument, "malformed bracket entry");
      if (!is_zero(m.table_[i][j])) throw Error(ErrorKind::InvalidArgument, "bracket given twice");
      m.table_[i][j] = v;
      m.table_[j][i] = Scalar(-1) * v;
    }
    m.metric_ = std::move(data.metric);
    m.validate();
    return m;
  }

  static std::vector<std::string> default_names(std::size_t dim_h) {
    std::vector<std::string> names;
    if (dim_h == 0) {
      for (int i = 1; i <= 4; ++i) names.push_back("e" + std::to_string(i));
    } else {
      for (std::size_t i = 1; i <= dim_h; ++i) names.push_back("e" + std::to_string(i));
      for (int i = 1; i <= 4; ++i) names.push_back("u" + std::to_string(i));
    }
    return names;
  }

  const std::string& id() const noexcept { return id_; }
  const ParamValues& params() const noexcept { return params_; }
  std::size_t dim_h() const noexcept { return dim_h_; }
  std::size_t dim() const noexcept { return dim_h_ + kDim; }
  const Matrix& metric() const noexcept { return metric_; }
  const Matrix& metric_inverse() const noexcept { return metric_inverse_; }
  const std::vector<Matrix>& isotropy() const noexcept { return isotropy_; }
  const Signature& signature() const noexcept { return signature_; }
  const std::vector<std::string>& names() const noexcept { return names_; }
  /// Names of the four m basis vectors.
  std::vector<std::string> m_names() const { return {names_.begin() + static_cast<long>(dim_h_), names_.end()}; }

  /// [x_i, x_j] in the full basis.
  const Vector& bracket(std::size_t i, std::size_t j) const { return table_.at(i).at(j); }

  /// m-component of [u_i, u_j] for m indices 0..3.
  Vector bracket_m(std::size_t i, std::size_t j) const {
    const Vector& v = table_[dim_h_ + i][dim_h_ + j];
    return Vector(v.begin() + static_cast<long>(dim_h_), v.end());
  }
  /// h-component of [u_i, u_j].
  Vector bracket_h(std::size_t i, std::size_t j) const {
    const Vector& v = table_[dim_h_ + i][dim_h_ + j];
    return Vector(v.begin(), v.begin() + static_cast<long>(dim_h_));
  }

  /// Same algebra with another metric; revalidated.
  HomogeneousModel with_metric(const Matrix& g) const {
    HomogeneousModel m = *this;
    m.metric_ = g;
    m.validate();
    return m;
  }

  /// Largest dimension of a totally null subspace of m.
  int max_null_dimension() const { return std::min(signature_.positive, signature_.negative); }

 private:
  void validate() {
    const std::size_t n = dim();
    // Jacobi identity over the full algebra.
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        for (std::size_t k = j + 1; k < n; ++k) {
          Vector s = apply(table_[i][j], k) + apply(table_[j][k], i) + apply(table_[k][i], j);
          if (!is_zero(s))
            throw Error(ErrorKind::JacobiFailed, "Jacobi identity fails for (" + names_[i] + ", " + names_[j] +
                                                     ", " + names_[k] + "): " + walkerlab::to_string(s));
        }
    // Reductivity and isotropy matrices.
    isotropy_.clear();
    for (std::size_t a = 0; a < dim_h_; ++a) {
      Matrix h(kDim, kDim);
      for (std::size_t k = 0; k < kDim; ++k) {
        const Vector& v = table_[a][dim_h_ + k];
        for (std::size_t b = 0; b < dim_h_; ++b)
          if (!v[b].is_zero())
            throw Error(ErrorKind::NotReductive, "[" + names_[a] + ", " + names_[dim_h_ + k] + "] leaves m");
        for (std::size_t r = 0; r < kDim; ++r) h(r, k) = v[dim_h_ + r];
      }
      isotropy_.push_back(h);
    }
    if (metric_.rows() != kDim || metric_.cols() != kDim || !metric_.is_symmetric())
      throw Error(ErrorKind::InvalidArgument, "metric must be a symmetric 4x4 matrix");
    if (determinant(metric_).is_zero()) throw Error(ErrorKind::MetricDegenerate, "metric is degenerate");
    for (std::size_t a = 0; a < isotropy_.size(); ++a) {
      const Matrix& h = isotropy_[a];
      if (!(h.transpose() * metric_ + metric_ * h).is_zero())
        throw Error(ErrorKind::MetricNotIsotropyInvariant, "metric is not invariant under ad(" + names_[a] + ")");
    }
    metric_inverse_ = inverse(metric_);
    signature_ = signature_of(metric_);
  }

  /// [v, x_k] for v given in coordinates.
  Vector apply(const Vector& v, std::size_t k) const {
    Vector r(dim());
    for (std::size_t i = 0; i < v.size(); ++i)
      if (!v[i].is_zero()) r = r + v[i] * table_[i][k];
    return r;
  }

  std::string id_;
  ParamValues params_;
  std::size_t dim_h_ = 0;
  std::vector<std::vector<Vector>> table_;
  Matrix metric_{kDim, kDim};
  Matrix metric_inverse_{kDim, kDim};
  std::vector<Matrix> isotropy_;
  Signature signature_;
  std::vector<std::string> names_;
};

inline std::pair<int, int> signature(const HomogeneousModel& m) {
  return {m.signature().positive, m.signature().negative};
}

}  // namespace walkerlab

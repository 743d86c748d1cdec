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

// Shared helpers for the test binaries: random models and reference data.

#include <array>
#include <random>
#include <string>
#include <vector>

#include "walkerlab/builtin.hpp"
#include "walkerlab/geometry.hpp"

namespace walkerlab::testing {

/// Rows of expression strings evaluated at `values`.
inline Matrix eval_matrix(const std::vector<std::vector<std::string>>& rows, const ParamValues& values) {
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = eval(parse_expr(rows[i][j]), values);
  return m;
}

/// Nondegenerate symmetric metric S^T D S with D = diag(+-1) and S unit
/// upper triangular with small integer entries.
inline Matrix random_metric(std::mt19937_64& rng, int negatives) {
  Matrix s = Matrix::identity(4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) s(i, j) = Scalar(static_cast<long>(rng() % 5) - 2);
  Vector d(4, Scalar(1));
  for (int k = 0; k < negatives; ++k) d[static_cast<std::size_t>(3 - k)] = Scalar(-1);
  return s.transpose() * Matrix::diagonal(d) * s;
}

/// Random four-dimensional nilpotent Lie algebra with a random metric:
/// [e1,e2] = a e3 + b e4, [e1,e3] = c e4, [e2,e3] = d e4. Every such table
/// satisfies Jacobi. The signature cycles through (4,0), (3,1), (2,2).
inline HomogeneousModel random_nilpotent_model(std::mt19937_64& rng, int index) {
  ModelData data;
  data.id = "fuzz-" + std::to_string(index);
  Scalar a = draw_small_rational(rng), b = draw_small_rational(rng), c = draw_small_rational(rng),
         d = draw_small_rational(rng);
  data.brackets.push_back({{0, 1}, Vector{0, 0, a, b}});
  data.brackets.push_back({{0, 2}, Vector{0, 0, 0, c}});
  data.brackets.push_back({{1, 2}, Vector{0, 0, 0, d}});
  data.metric = random_metric(rng, index % 3);
  return HomogeneousModel::build(std::move(data));
}

inline std::vector<HomogeneousModel> fuzz_models(std::size_t count, std::uint64_t seed = 99) {
  std::mt19937_64 rng(seed);
  std::vector<HomogeneousModel> out;
  for (std::size_t k = 0; k < count; ++k) out.push_back(random_nilpotent_model(rng, static_cast<int>(k)));
  return out;
}

/// Every full catalog entry at `trials` sampled parameter points.
inline std::vector<HomogeneousModel> catalog_models(std::size_t trials = 3, std::uint64_t seed = 5) {
  std::vector<HomogeneousModel> out;
  for (const auto& e : builtin_catalog()) {
    if (!e.is_full()) continue;
    std::mt19937_64 rng(seed);
    for (std::size_t t = 0; t < trials; ++t) out.push_back(instantiate(e, sample_params(e, rng, t)));
  }
  return out;
}

/// Reference connection matrices in the bases used by the catalog, written
/// as expressions in the parameters. Entries marked "corrected" differ from
/// the commonly quoted form, which is not skew-adjoint for g there.
struct ReferenceConnection {
  const char* entry;
  std::array<std::vector<std::vector<std::string>>, 4> lambda;
};

inline std::vector<ReferenceConnection> reference_connections() {
  return {
      {"komrakov-1.3^1:2",
       {{{{"0", "0", "(l+1)/2", "0"}, {"0", "0", "0", "(l+1)/2"}, {"0", "0", "0", "0"}, {"0", "0", "0", "0"}},
         {{"0", "0", "1/2", "0"}, {"0", "0", "0", "1/2"}, {"0", "0", "0", "0"}, {"0", "0", "0", "0"}},
         {{"-(l+1)/2", "1/2", "0", "c/(2*a)"},
          {"-l", "0", "c*l/a", "-(c*l+c+b)/(2*a)"},
          {"0", "0", "0", "1/2"},
          {"0", "0", "-l", "(l+1)/2"}},
         {{"0", "0", "c/(2*a)", "0"},
          {"(l+1)/2", "-1/2", "-(c*l+c+b)/(2*a)", "0"},
          {"0", "0", "1/2", "0"},
          {"0", "0", "(l+1)/2", "0"}}}}},
      {"thm3.2-i-eps+1",
       {{{{"0", "0", "0", "0"}, {"0", "0", "alpha", "0"}, {"0", "alpha", "0", "0"}, {"0", "0", "0", "0"}},
         {{"0", "0", "0", "0"}, {"0", "0", "0", "0"}, {"0", "0", "0", "-2*alpha"}, {"0", "0", "2*alpha", "0"}},
         // Corrected: the -alpha(1+eps) entry sits in column 2 of row 1.
         {{"0", "-2*alpha", "0", "0"}, {"2*alpha", "0", "0", "0"}, {"0", "0", "0", "0"}, {"0", "0", "0", "0"}},
         {{"0", "0", "0", "0"}, {"0", "0", "-alpha", "0"}, {"0", "-alpha", "0", "0"}, {"0", "0", "0", "0"}}}}},
      {"thm3.2-i-eps-1",
       {{{{"0", "0", "0", "0"}, {"0", "0", "alpha", "0"}, {"0", "alpha", "0", "0"}, {"0", "0", "0", "0"}},
         {{"0", "0", "2*alpha", "0"}, {"0", "0", "0", "0"}, {"2*alpha", "0", "0", "0"}, {"0", "0", "0", "0"}},
         // Corrected: the alpha(1-eps) entry of row 4 sits in column 2.
         {{"0", "0", "0", "0"}, {"0", "0", "0", "2*alpha"}, {"0", "0", "0", "0"}, {"0", "2*alpha", "0", "0"}},
         {{"0", "0", "0", "0"}, {"0", "0", "alpha", "0"}, {"0", "alpha", "0", "0"}, {"0", "0", "0", "0"}}}}},
      {"thm4.1-(1,3)",
       {{{{"0", "0", "0", "0"},
          {"0", "0", "sqrt(2)/(4*c2)", "-c2"},
          {"0", "sqrt(2)/(4*c2)", "0", "-sqrt(2)/(4*c2)"},
          {"0", "-c2", "sqrt(2)/(4*c2)", "0"}},
         {{"0", "c1-c2", "sqrt(2)/(2*c2)", "-c1"},
          {"-c1+c2", "0", "-3*s*sqrt(1-2*c1*c2^3)/(4*c2^3)", "sqrt(2)*s*sqrt(1-2*c1*c2^3)/c2"},
          {"sqrt(2)/(2*c2)", "-3*s*sqrt(1-2*c1*c2^3)/(4*c2^3)", "0", "3*s*sqrt(1-2*c1*c2^3)/(4*c2^3)"},
          {"-c1", "sqrt(2)*s*sqrt(1-2*c1*c2^3)/c2", "-3*s*sqrt(1-2*c1*c2^3)/(4*c2^3)", "0"}},
         {{"0", "sqrt(2)/(2*c2)", "c2", "-sqrt(2)/(2*c2)"},
          {"-sqrt(2)/(2*c2)", "0", "-sqrt(2)*s*sqrt(1-2*c1*c2^3)/(2*c2)", "0"},
          {"c2", "-sqrt(2)*s*sqrt(1-2*c1*c2^3)/(2*c2)", "0", "sqrt(2)*s*sqrt(1-2*c1*c2^3)/(2*c2)"},
          {"-sqrt(2)/(2*c2)", "0", "-sqrt(2)*s*sqrt(1-2*c1*c2^3)/(2*c2)", "0"}},
         {{"0", "-c1", "-sqrt(2)/(2*c2)", "c1+c2"},
          {"c1", "0", "3*s*sqrt(1-2*c1*c2^3)/(4*c2^3)", "-sqrt(2)*s*sqrt(1-2*c1*c2^3)/c2"},
          {"-sqrt(2)/(2*c2)", "3*s*sqrt(1-2*c1*c2^3)/(4*c2^3)", "0", "-3*s*sqrt(1-2*c1*c2^3)/(4*c2^3)"},
          {"c1+c2", "-sqrt(2)*s*sqrt(1-2*c1*c2^3)/c2", "3*s*sqrt(1-2*c1*c2^3)/(4*c2^3)", "0"}}}}},
      {"thm4.2-item1",
       {{{{"0", "-1/(2*c1)", "1/(2*c1)", "0"}, {"1/(2*c1)", "0", "0", "0"}, {"1/(2*c1)", "0", "0", "0"},
          {"0", "0", "0", "0"}},
         {{"0", "-c2", "c2", "0"},
          {"c2", "0", "(1+2*c1^2)/(2*c1)", "c3"},
          {"c2", "(1+2*c1^2)/(2*c1)", "0", "c3"},
          {"0", "c3", "-c3", "0"}},
         {{"0", "c2", "-c2", "0"},
          {"-c2", "0", "-(1+2*c1^2)/(2*c1)", "-c3"},
          {"-c2", "-(1+2*c1^2)/(2*c1)", "0", "-c3"},
          {"0", "-c3", "c3", "0"}},
         // Corrected: entry (2,4) is -c1, matching skew-adjointness.
         {{"0", "0", "0", "0"}, {"0", "0", "0", "-c1"}, {"0", "0", "0", "-c1"}, {"0", "-c1", "c1", "0"}}}}},
  };
}

}  // namespace walkerlab::testing

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

// Segre classification of self-adjoint operators.

#include <gtest/gtest.h>

#include <algorithm>

#include "support.hpp"
#include "walkerlab/segre.hpp"

using namespace walkerlab;
using namespace walkerlab::testing;

namespace {

const Matrix kNeutral = Matrix::diagonal(Vector{1, 1, -1, -1});
const Matrix kLorentz = Matrix::diagonal(Vector{1, 1, 1, -1});

std::string label(const Matrix& q, const Matrix& g) { return render(classify(q, g)); }

/// Block data that must survive a change of basis or a positive rescaling.
std::vector<std::tuple<int, bool, int>> block_multiset(const SegreType& t) {
  std::vector<std::tuple<int, bool, int>> v;
  for (const auto& b : t.blocks) v.emplace_back(b.size, b.complex, b.sign);
  std::sort(v.begin(), v.end());
  return v;
}

Matrix random_invertible(std::mt19937_64& rng) {
  for (;;) {
    Matrix s(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) s(i, j) = Scalar(static_cast<long>(rng() % 7) - 3);
    if (!determinant(s).is_zero()) return s;
  }
}

}  // namespace

TEST(Segre, ZeroOperator) {
  SegreType t = classify(Matrix(4, 4), kNeutral);
  EXPECT_EQ(t.blocks.size(), 4u);
  ASSERT_EQ(t.groups.size(), 1u);
  EXPECT_TRUE(t.groups[0].eigenvalue.is_zero());
  EXPECT_EQ(t.groups[0].causal, (Signature{2, 2, 0}));
  EXPECT_EQ(render(t), "[(11,11)]");
  EXPECT_TRUE(is_degenerate(Matrix(4, 4)));
  EXPECT_FALSE(is_two_step_nilpotent(Matrix(4, 4)));
}

TEST(Segre, DiagonalTypes) {
  EXPECT_EQ(label(Matrix::diagonal(Vector{1, 2, 3, 4}), kNeutral), "[11,11]");
  EXPECT_EQ(label(Matrix::diagonal(Vector{1, 2, 3, 4}), kLorentz), "[111,1]");
  EXPECT_EQ(label(Matrix::diagonal(Vector{1, 1, 1, 4}), kLorentz), "[(111),1]");
  EXPECT_EQ(label(Matrix::diagonal(Vector{5, 5, 5, 5}), kLorentz), "[(111,1)]");
  EXPECT_EQ(label(Matrix::diagonal(Vector{1, 1, 2, 2}), kNeutral), "[(11),(11)]");
  EXPECT_EQ(label(Matrix::diagonal(Vector{1, 2, 2, 2}), kNeutral), "[1(1,11)]");
}

TEST(Segre, ComplexPairs) {
  // A rotation-like block on a (1,1)-plane has eigenvalues a +- b i.
  Matrix q(4, 4);
  q(0, 0) = 1;
  q(1, 1) = 2;
  q(2, 2) = 3;
  q(2, 3) = 1;
  q(3, 2) = -1;
  q(3, 3) = 3;
  EXPECT_TRUE((kLorentz * q).is_symmetric());
  EXPECT_EQ(label(q, kLorentz), "[11,11̄]");
  q(0, 0) = 2;
  EXPECT_EQ(label(q, kLorentz), "[(11),11̄]");
  SegreType t = classify(q, kLorentz);
  ASSERT_EQ(t.blocks.size(), 3u);
  EXPECT_TRUE(t.blocks.back().complex);
  EXPECT_EQ(t.blocks.back().sum, Scalar(6));
  EXPECT_EQ(t.blocks.back().product, Scalar(10));
}

TEST(Segre, JordanBlocks) {
  // Null basis: g(f1,f3) = 1, g(f2,f2) = 1, g(f4,f4) = 1; signature (3,1).
  Matrix g(4, 4);
  g(0, 2) = g(2, 0) = 1;
  g(1, 1) = 1;
  g(3, 3) = 1;
  Matrix n(4, 4);
  n(0, 1) = 1;  // f2 -> f1
  n(1, 2) = 1;  // f3 -> f2
  EXPECT_TRUE((g * n).is_symmetric());
  EXPECT_EQ(label(n, g), "[(1,3)]");
  Matrix shifted = n;
  shifted(3, 3) = 2;
  EXPECT_EQ(label(shifted, g), "[1,3]");
  // A single 2-block and two 1-blocks, all nilpotent.
  Matrix two(4, 4);
  two(0, 2) = 1;
  EXPECT_TRUE((g * two).is_symmetric());
  EXPECT_TRUE(is_two_step_nilpotent(two));
  EXPECT_EQ(label(two, g), "[(11,2)]");
}

TEST(Segre, CatalogLabels) {
  const Catalog& cat = builtin_catalog();
  for (const auto& e : cat) {
    if (!e.is_full() || !e.expected.segre) continue;
    std::mt19937_64 rng(17);
    for (std::size_t t = 0; t < 4; ++t) {
      HomogeneousModel m = instantiate(e, sample_params(e, rng, t));
      EXPECT_EQ(label(compute_geometry(m).ricci.q, m.metric()), *e.expected.segre) << e.id;
    }
  }
}

TEST(Segre, NamedExamples) {
  const Catalog& cat = builtin_catalog();
  auto q_of = [&](const char* id, ParamValues v) {
    HomogeneousModel m = instantiate(find_entry(cat, id), v);
    return std::make_pair(compute_geometry(m).ricci.q, m.metric());
  };
  auto [qk, gk] = q_of("komrakov-1.3^1:2", {{"a", Rational(1)}, {"b", Rational(0)}, {"c", Rational(0)}, {"l", Rational(1)}});
  SegreType tk = classify(qk, gk);
  ASSERT_EQ(tk.blocks.size(), 2u);
  EXPECT_EQ(tk.blocks[0].size, 2);
  EXPECT_EQ(tk.blocks[1].size, 2);
  EXPECT_EQ(render(tk), "[(22)]");
  auto [q1, g1] = q_of("thm4.2-item1", {{"c1", Rational(1)}, {"c2", Rational(0)}, {"c3", Rational(0)}});
  SegreType t1 = classify(q1, g1);
  std::vector<int> sizes;
  for (const auto& b : t1.blocks) sizes.push_back(b.size);
  EXPECT_EQ(sizes, (std::vector<int>{2, 1, 1}));
  EXPECT_EQ(render(t1), "[(1,12)]");
}

TEST(Segre, CongruenceInvariance) {
  std::mt19937_64 rng(8);
  auto models = catalog_models(2);
  for (auto& f : fuzz_models(30)) models.push_back(std::move(f));
  for (const auto& m : models) {
    Matrix q = compute_geometry(m).ricci.q;
    SegreType base;
    try {
      base = classify(q, m.metric());
    } catch (const Error& e) {
      ASSERT_EQ(e.kind(), ErrorKind::UnsupportedAlgebraicDegree);
      continue;
    }
    Matrix s = random_invertible(rng);
    Matrix q2 = inverse(s) * q * s;
    Matrix g2 = s.transpose() * m.metric() * s;
    SegreType moved = classify(q2, g2);
    EXPECT_EQ(block_multiset(moved), block_multiset(base)) << m.id();
    EXPECT_EQ(render(moved), render(base)) << m.id();
    // Positive rescaling of the metric scales Q by the inverse factor.
    SegreType scaled = classify(Scalar(Rational(1, 3)) * q, Scalar(3) * m.metric());
    EXPECT_EQ(block_multiset(scaled), block_multiset(base)) << m.id();
    EXPECT_EQ(render(scaled), render(base)) << m.id();
    int total = 0;
    for (const auto& b : base.blocks) total += b.complex ? 2 * b.size : b.size;
    EXPECT_EQ(total, 4);
  }
}

TEST(Segre, RejectsNonSelfAdjoint) {
  Matrix q(4, 4);
  q(0, 1) = 1;
  EXPECT_THROW(classify(q, Matrix::identity(4)), Error);
}

TEST(Segre, FallbackForAmbiguousForms) {
  // Two eigenvalues each carrying spacelike and other blocks cannot be
  // written with a single comma.
  Matrix q = Matrix::diagonal(Vector{1, 2, 1, 2});
  std::string s = label(q, kNeutral);
  EXPECT_EQ(s.rfind("blocks=", 0), 0u) << s;
}

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

#include <algorithm>
#include <string>
#include <vector>

#include "walkerlab/factor.hpp"

namespace walkerlab {

/// One Jordan block of the Ricci operator.
struct SegreBlock {
  int size = 1;
  bool complex = false;
  Scalar eigenvalue;   // real blocks
  Scalar sum;          // complex blocks: root pair of x^2 - sum x + product
  Scalar product;
  /// Sign characteristic (+1 or -1) of a real block; 0 for complex blocks.
  int sign = 0;
  /// Signature of g on the generalized eigenspace the block belongs to.
  Signature causal;
};

/// Blocks sharing one eigenvalue (or one complex pair).
struct SegreGroup {
  bool complex = false;
  Scalar eigenvalue;
  Scalar sum;
  Scalar product;
  std::vector<int> sizes;  // descending
  Signature causal;
};

struct SegreType {
  std::vector<SegreBlock> blocks;
  std::vector<SegreGroup> groups;
};

namespace detail {

inline std::string eigen_label(const SegreBlock& b) {
  if (!b.complex) return b.eigenvalue.to_string();
  return "root(x^2-(" + b.sum.to_string() + ")x+(" + b.product.to_string() + "))";
}

inline std::string signature_label(const Signature& s) {
  return "(" + std::to_string(s.positive) + "," + std::to_string(s.negative) + ")";
}

inline bool block_less(const SegreBlock& a, const SegreBlock& b) {
  if (a.complex != b.complex) return !a.complex;
  if (a.size != b.size) return a.size > b.size;
  if (!a.complex) {
    if (a.eigenvalue != b.eigenvalue) return a.eigenvalue < b.eigenvalue;
    return a.sign > b.sign;
  }
  if (a.sum != b.sum) return a.sum < b.sum;
  return a.product < b.product;
}

}  // namespace detail

/// Segre type of a g-self-adjoint operator Q. Throws
/// UnsupportedAlgebraicDegree when the spectrum leaves Q or Q(sqrt d).
inline SegreType classify(const Matrix& q, const Matrix& g) {
  const std::size_t n = q.rows();
  SegreType t;
  Spectrum spec = spectrum(q);
  Matrix id = Matrix::identity(n);
  for (const auto& root : spec.real) {
    Matrix nmat = q - root.value * id;
    SegreGroup grp;
    grp.eigenvalue = root.value;
    grp.sizes = jordan_structure(q, root.value);
    Subspace gen = kernel(power(nmat, static_cast<unsigned>(root.multiplicity)));
    grp.causal = signature_of(restrict_form(g, gen.vectors()));
    // Sign characteristics: the form g(x, N^(k-1) y) on ker N^k has exactly
    // one nonzero diagonal entry per block of size k.
    std::vector<int> distinct = grp.sizes;
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    for (int k : distinct) {
      Subspace kk = kernel(power(nmat, static_cast<unsigned>(k)));
      Matrix form = g * power(nmat, static_cast<unsigned>(k - 1));
      std::vector<Vector> basis = kk.vectors();
      Matrix b(basis.size(), basis.size());
      for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = 0; j < basis.size(); ++j) b(i, j) = bilinear(form, basis[i], basis[j]);
      Signature s = signature_of(b);
      int count = static_cast<int>(std::count(grp.sizes.begin(), grp.sizes.end(), k));
      if (s.positive + s.negative != count)
        throw Error(ErrorKind::InvalidArgument, "operator is not self-adjoint for the metric");
      for (int i = 0; i < s.positive; ++i) t.blocks.push_back({k, false, root.value, {}, {}, 1, grp.causal});
      for (int i = 0; i < s.negative; ++i) t.blocks.push_back({k, false, root.value, {}, {}, -1, grp.causal});
    }
    t.groups.push_back(grp);
  }
  for (const auto& pair : spec.complex) {
    SegreGroup grp;
    grp.complex = true;
    grp.sum = pair.sum;
    grp.product = pair.product;
    grp.sizes = jordan_structure(q, pair);
    Matrix p = q * q - pair.sum * q + pair.product * id;
    Subspace gen = kernel(power(p, static_cast<unsigned>(pair.multiplicity)));
    grp.causal = signature_of(restrict_form(g, gen.vectors()));
    for (int k : grp.sizes) t.blocks.push_back({k, true, {}, pair.sum, pair.product, 0, grp.causal});
    t.groups.push_back(grp);
  }
  std::sort(t.blocks.begin(), t.blocks.end(), detail::block_less);
  return t;
}

/// Bracket notation. Spacelike one-dimensional blocks stand left of the
/// comma, everything else (timelike one-dimensional blocks, longer blocks,
/// complex pairs) to its right; parentheses join blocks of one eigenvalue
/// and a complex block of size k is written k followed by k-bar. Types that
/// need more than one comma inside parentheses get an explicit description.
inline std::string render(const SegreType& t) {
  struct Unit {
    bool left;
    const SegreBlock* block;
  };
  struct Group {
    std::vector<Unit> units;
    int lefts = 0;
  };
  std::vector<Group> groups;
  auto same_eigen = [](const SegreBlock& a, const SegreBlock& b) {
    if (a.complex != b.complex) return false;
    return a.complex ? (a.sum == b.sum && a.product == b.product) : a.eigenvalue == b.eigenvalue;
  };
  std::vector<const SegreBlock*> seen;
  for (const auto& b : t.blocks) {
    auto it = std::find_if(seen.begin(), seen.end(), [&](const SegreBlock* s) { return same_eigen(*s, b); });
    std::size_t gi = static_cast<std::size_t>(it - seen.begin());
    if (it == seen.end()) {
      seen.push_back(&b);
      groups.emplace_back();
    }
    bool left = !b.complex && b.size == 1 && b.sign > 0;
    groups[gi].units.push_back({left, &b});
    if (left) ++groups[gi].lefts;
  }
  auto category = [](const Group& g) {
    if (g.lefts == static_cast<int>(g.units.size())) return 0;
    return g.lefts > 0 ? 1 : 2;
  };
  int mixed = 0;
  int total_left = 0, total_right = 0;
  for (auto& g : groups) {
    if (category(g) == 1) ++mixed;
    total_left += g.lefts;
    total_right += static_cast<int>(g.units.size()) - g.lefts;
    std::stable_sort(g.units.begin(), g.units.end(), [](const Unit& a, const Unit& b) {
      if (a.left != b.left) return a.left;
      if (a.block->complex != b.block->complex) return !a.block->complex;
      return a.block->size < b.block->size;
    });
  }
  if (mixed > 1) {
    std::string s = "blocks=";
    for (std::size_t i = 0; i < t.blocks.size(); ++i) {
      const auto& b = t.blocks[i];
      if (i) s += ";";
      s += detail::eigen_label(b) + ":" + std::to_string(b.size) + (b.complex ? "c" : (b.sign > 0 ? "+" : "-"));
    }
    s += "; causal=";
    for (std::size_t i = 0; i < t.groups.size(); ++i) {
      if (i) s += ";";
      s += detail::signature_label(t.groups[i].causal);
    }
    return s;
  }
  std::stable_sort(groups.begin(), groups.end(), [&](const Group& a, const Group& b) {
    int ca = category(a), cb = category(b);
    if (ca != cb) return ca < cb;
    const SegreBlock& x = *a.units.front().block;
    const SegreBlock& y = *b.units.front().block;
    if (x.complex != y.complex) return !x.complex;
    int sx = 0, sy = 0;
    for (const auto& u : a.units) sx = std::max(sx, u.block->size);
    for (const auto& u : b.units) sy = std::max(sy, u.block->size);
    if (sx != sy) return sx > sy;
    if (!x.complex) return x.eigenvalue < y.eigenvalue;
    return x.sum != y.sum ? x.sum < y.sum : x.product < y.product;
  });
  const bool comma = total_left > 0 && total_right > 0;
  int lefts_written = 0;
  std::string s = "[";
  for (const auto& g : groups) {
    const bool parens = g.units.size() > 1;
    bool comma_after_group = false;
    if (parens) s += "(";
    for (std::size_t i = 0; i < g.units.size(); ++i) {
      const Unit& u = g.units[i];
      std::string k = std::to_string(u.block->size);
      s += u.block->complex ? k + k + "̄" : k;
      if (u.left && ++lefts_written == total_left && comma) {
        // A group made only of left units takes the comma outside.
        if (parens && i + 1 == g.units.size()) comma_after_group = true;
        else s += ",";
      }
    }
    if (parens) s += ")";
    if (comma_after_group) s += ",";
  }
  return s + "]";
}

inline bool is_degenerate(const Matrix& q) { return determinant(q).is_zero(); }

inline bool is_two_step_nilpotent(const Matrix& q) { return !q.is_zero() && (q * q).is_zero(); }

}  // namespace walkerlab

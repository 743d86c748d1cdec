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

#include "walkerlab/matrix.hpp"

namespace walkerlab {

/// Univariate polynomial with exact coefficients, lowest degree first.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<Scalar> coeffs) : c_(std::move(coeffs)) { trim(); }
  Poly(std::initializer_list<Scalar> coeffs) : c_(coeffs) { trim(); }

  static Poly constant(const Scalar& c) { return Poly({c}); }
  static Poly x() { return Poly({Scalar(0), Scalar(1)}); }
  /// x - r
  static Poly linear_root(const Scalar& r) { return Poly({-r, Scalar(1)}); }

  bool is_zero() const noexcept { return c_.empty(); }
  /// -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  const std::vector<Scalar>& coeffs() const noexcept { return c_; }
  Scalar coeff(std::size_t k) const { return k < c_.size() ? c_[k] : Scalar(); }
  Scalar leading() const { return c_.empty() ? Scalar() : c_.back(); }

  bool is_rational() const {
    for (const auto& c : c_)
      if (!c.is_rational()) return false;
    return true;
  }

  Scalar operator()(const Scalar& x) const {
    Scalar v;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) v = v * x + *it;
    return v;
  }

  Poly monic() const {
    if (is_zero()) return *this;
    Scalar inv = Scalar(1) / leading();
    Poly p = *this;
    for (auto& c : p.c_) c *= inv;
    return p;
  }

  Poly derivative() const {
    std::vector<Scalar> d;
    for (std::size_t k = 1; k < c_.size(); ++k) d.push_back(Scalar(static_cast<long>(k)) * c_[k]);
    return Poly(std::move(d));
  }

  Poly conjugate() const {
    Poly p = *this;
    for (auto& c : p.c_) c = c.conjugate();
    return p;
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<Scalar> c(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = a.coeff(k) + b.coeff(k);
    return Poly(std::move(c));
  }
  friend Poly operator-(const Poly& a, const Poly& b) {
    std::vector<Scalar> c(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = a.coeff(k) - b.coeff(k);
    return Poly(std::move(c));
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    std::vector<Scalar> c(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return Poly(std::move(c));
  }
  friend Poly operator*(const Scalar& s, const Poly& p) { return Poly::constant(s) * p; }

  /// Euclidean division: a = q b + r with deg r < deg b.
  friend std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw Error(ErrorKind::DivisionByZero, "polynomial division by zero");
    std::vector<Scalar> rem = a.c_;
    const int db = b.degree();
    if (a.degree() < db) return {Poly(), a};
    std::vector<Scalar> quo(static_cast<std::size_t>(a.degree() - db + 1));
    Scalar inv = Scalar(1) / b.leading();
    for (int k = a.degree(); k >= db; --k) {
      Scalar f = rem[static_cast<std::size_t>(k)] * inv;
      quo[static_cast<std::size_t>(k - db)] = f;
      if (f.is_zero()) continue;
      for (int j = 0; j <= db; ++j) rem[static_cast<std::size_t>(k - db + j)] -= f * b.c_[static_cast<std::size_t>(j)];
    }
    rem.resize(static_cast<std::size_t>(db));
    return {Poly(std::move(quo)), Poly(std::move(rem))};
  }

  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  std::string to_string(const std::string& var = "x") const {
    if (is_zero()) return "0";
    std::string s;
    for (int k = degree(); k >= 0; --k) {
      const Scalar& c = c_[static_cast<std::size_t>(k)];
      if (c.is_zero()) continue;
      std::string term = c.to_string();
      if (!c.is_rational()) term = "(" + term + ")";
      if (k > 0) {
        std::string mono = var + (k > 1 ? "^" + std::to_string(k) : "");
        if (c == Scalar(1)) term = mono;
        else if (c == Scalar(-1)) term = "-" + mono;
        else term += "*" + mono;
      }
      if (!s.empty()) s += (term[0] == '-') ? " - " + term.substr(1) : " + " + term;
      else s = term;
    }
    return s;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }

  std::vector<Scalar> c_;
};

inline Poly gcd(Poly a, Poly b) {
  while (!b.is_zero()) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

/// Squarefree decomposition (Yun): pairs (factor, multiplicity) with
/// P = lc * prod factor^multiplicity and each factor squarefree and monic.
inline std::vector<std::pair<Poly, int>> squarefree_decomposition(const Poly& p) {
  std::vector<std::pair<Poly, int>> out;
  if (p.degree() <= 0) return out;
  Poly f = p.monic();
  Poly a = gcd(f, f.derivative());
  Poly b = divmod(f, a).first;
  Poly c = divmod(f.derivative(), a).first;
  Poly d = c - b.derivative();
  int i = 1;
  while (b.degree() > 0) {
    Poly g = gcd(b, d);
    Poly b_next = divmod(b, g).first;
    Poly c_next = divmod(d, g).first;
    if (g.degree() > 0) out.emplace_back(g.monic(), i);
    b = b_next;
    d = c_next - b.derivative();
    ++i;
  }
  return out;
}

/// det(x I - M), monic of degree n (Faddeev-LeVerrier).
inline Poly char_poly(const Matrix& m) {
  if (!m.square()) throw Error(ErrorKind::InvalidArgument, "char_poly of non-square matrix");
  const std::size_t n = m.rows();
  std::vector<Scalar> c(n + 1);
  c[n] = 1;
  Matrix mk(n, n);
  Matrix id = Matrix::identity(n);
  for (std::size_t k = 1; k <= n; ++k) {
    mk = m * mk + c[n - k + 1] * id;
    c[n - k] = -((m * mk).trace() / Scalar(static_cast<long>(k)));
  }
  return Poly(std::move(c));
}

}  // namespace walkerlab

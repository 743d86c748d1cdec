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

// Exact scalars: rationals and elements a + b*sqrt(d) of one real quadratic
// field. The radicand travels with the value; combining two values whose
// radicands differ raises MixedRadicands.

#include <gmpxx.h>

#include <cmath>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "walkerlab/error.hpp"

namespace walkerlab {

using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw Error(ErrorKind::DivisionByZero, "zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline std::string rational_to_string(const Rational& r) { return r.get_str(); }

/// Largest s with s^2 | n and the square-free cofactor, for n > 0.
/// Trial division; the integers met in practice are small.
inline std::pair<Integer, Integer> split_square_factor(const Integer& n) {
  Integer rest = n;
  Integer square_root = 1;
  Integer cofactor = 1;
  for (Integer p = 2; p * p <= rest; p += (p == 2 ? 1 : 2)) {
    unsigned count = 0;
    while (mpz_divisible_p(rest.get_mpz_t(), p.get_mpz_t())) {
      rest /= p;
      ++count;
    }
    for (unsigned i = 0; i + 1 < count; i += 2) square_root *= p;
    if (count % 2 == 1) cofactor *= p;
  }
  cofactor *= rest;
  return {square_root, cofactor};
}

/// Positive divisors of |n|, ascending. n must be nonzero.
inline std::vector<Integer> divisors(const Integer& n) {
  Integer m = abs(n);
  std::vector<Integer> small;
  std::vector<Integer> large;
  for (Integer d = 1; d * d <= m; ++d) {
    if (mpz_divisible_p(m.get_mpz_t(), d.get_mpz_t())) {
      small.push_back(d);
      if (d * d != m) large.push_back(m / d);
    }
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

class Scalar {
 public:
  Scalar() = default;
  Scalar(int v) : a_(v) {}           // NOLINT(google-explicit-constructor)
  Scalar(long v) : a_(v) {}          // NOLINT(google-explicit-constructor)
  Scalar(Rational v) : a_(std::move(v)) { a_.canonicalize(); }  // NOLINT
  Scalar(const Integer& v) : a_(v) {}                             // NOLINT

  /// a + b*sqrt(d) for a positive integer d; square factors of d are folded
  /// into b so that the stored radicand is square-free.
  static Scalar quadratic(const Rational& a, const Rational& b, const Integer& d) {
    if (d <= 0) throw Error(ErrorKind::NegativeSqrt, "radicand must be positive");
    auto [root, free] = split_square_factor(d);
    Scalar s;
    s.a_ = a;
    if (free == 1) {
      s.a_ += b * Rational(root);
      s.a_.canonicalize();
      return s;
    }
    s.b_ = b * Rational(root);
    s.b_.canonicalize();
    s.d_ = free;
    s.normalize();
    return s;
  }

  /// Exact square root of a nonnegative rational.
  static Scalar sqrt(const Rational& r) {
    if (sgn(r) < 0) throw Error(ErrorKind::NegativeSqrt, "sqrt of " + r.get_str());
    if (sgn(r) == 0) return Scalar();
    // sqrt(p/q) = sqrt(p*q)/q
    Integer pq = r.get_num() * r.get_den();
    return quadratic(Rational(0), make_rational(1, r.get_den()), pq);
  }

  /// Square root of a scalar; only rationals and exact squares inside the
  /// active field are supported.
  static Scalar sqrt(const Scalar& x) {
    if (x.is_rational()) return sqrt(x.a_);
    // (p + q sqrt d)^2 = p^2 + d q^2 + 2 p q sqrt d
    // Solve p^2 + d q^2 = a, 2 p q = b: p^2 = (a +- sqrt(a^2 - d b^2)) / 2.
    Rational norm = x.norm();
    if (sgn(norm) >= 0) {
      Scalar n = sqrt(norm);
      if (n.is_rational()) {
        for (int sign : {1, -1}) {
          Rational p2 = (x.a_ + sign * n.a_) / 2;
          if (sgn(p2) <= 0) continue;
          Scalar p = sqrt(p2);
          if (!p.is_rational()) continue;
          Rational q = x.b_ / (2 * p.a_);
          Scalar candidate = quadratic(p.a_, q, x.d_);
          if (candidate * candidate == x) return candidate.sign() < 0 ? -candidate : candidate;
        }
      }
    }
    if (x.sign() < 0) throw Error(ErrorKind::NegativeSqrt, "sqrt of " + x.to_string());
    throw Error(ErrorKind::MixedRadicands, "sqrt of " + x.to_string() + " leaves the field");
  }

  const Rational& rational_part() const noexcept { return a_; }
  const Rational& radical_part() const noexcept { return b_; }
  /// 0 for rationals, otherwise the square-free radicand.
  const Integer& radicand() const noexcept { return d_; }

  bool is_rational() const noexcept { return d_ == 0; }
  bool is_zero() const noexcept { return sgn(a_) == 0 && d_ == 0; }

  /// a^2 - d b^2, the field norm.
  Rational norm() const { return a_ * a_ - Rational(d_) * b_ * b_; }

  Scalar conjugate() const {
    Scalar s = *this;
    s.b_ = -s.b_;
    return s;
  }

  int sign() const {
    int sa = sgn(a_);
    int sb = sgn(b_);
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    // opposite signs: compare a^2 with d b^2
    int cmp = ::cmp(a_ * a_, Rational(d_) * b_ * b_);
    return cmp > 0 ? sa : sb;
  }

  double to_double() const {
    double v = a_.get_d();
    if (d_ != 0) v += b_.get_d() * std::sqrt(d_.get_d());
    return v;
  }

  /// Exact text form: "3/2", "1/4*sqrt(2)", "-1+1/2*sqrt(3)".
  std::string to_string() const {
    if (d_ == 0) return a_.get_str();
    std::string radical;
    Rational mag = abs(b_);
    std::string root = "sqrt(" + d_.get_str() + ")";
    radical = (mag == 1) ? root : mag.get_str() + "*" + root;
    if (sgn(a_) == 0) return (sgn(b_) < 0 ? "-" : "") + radical;
    return a_.get_str() + (sgn(b_) < 0 ? "-" : "+") + radical;
  }

  Scalar operator-() const {
    Scalar s = *this;
    s.a_ = -s.a_;
    s.b_ = -s.b_;
    return s;
  }

  Scalar& operator+=(const Scalar& o) {
    Integer d = common_radicand(o);
    a_ += o.a_;
    b_ += o.b_;
    d_ = d;
    normalize();
    return *this;
  }
  Scalar& operator-=(const Scalar& o) {
    Integer d = common_radicand(o);
    a_ -= o.a_;
    b_ -= o.b_;
    d_ = d;
    normalize();
    return *this;
  }
  Scalar& operator*=(const Scalar& o) {
    Integer d = common_radicand(o);
    if (d == 0) {
      a_ *= o.a_;
      return *this;
    }
    Rational a = a_ * o.a_ + b_ * o.b_ * Rational(d);
    Rational b = a_ * o.b_ + b_ * o.a_;
    a_ = a;
    b_ = b;
    d_ = d;
    normalize();
    return *this;
  }
  Scalar& operator/=(const Scalar& o) {
    if (o.is_zero()) throw Error(ErrorKind::DivisionByZero, "division by zero");
    if (o.is_rational()) {
      a_ /= o.a_;
      b_ /= o.a_;
      normalize();
      return *this;
    }
    Rational n = o.norm();
    Scalar inv;
    inv.a_ = o.a_ / n;
    inv.b_ = -o.b_ / n;
    inv.d_ = o.d_;
    return *this *= inv;
  }

  friend Scalar operator+(Scalar x, const Scalar& y) { return x += y; }
  friend Scalar operator-(Scalar x, const Scalar& y) { return x -= y; }
  friend Scalar operator*(Scalar x, const Scalar& y) { return x *= y; }
  friend Scalar operator/(Scalar x, const Scalar& y) { return x /= y; }

  friend bool operator==(const Scalar& x, const Scalar& y) {
    return x.d_ == y.d_ && x.a_ == y.a_ && x.b_ == y.b_;
  }
  friend bool operator!=(const Scalar& x, const Scalar& y) { return !(x == y); }

  /// Exact ordering of real numbers; throws MixedRadicands like arithmetic.
  friend int compare(const Scalar& x, const Scalar& y) { return (x - y).sign(); }
  friend bool operator<(const Scalar& x, const Scalar& y) { return compare(x, y) < 0; }
  friend bool operator>(const Scalar& x, const Scalar& y) { return compare(x, y) > 0; }
  friend bool operator<=(const Scalar& x, const Scalar& y) { return compare(x, y) <= 0; }
  friend bool operator>=(const Scalar& x, const Scalar& y) { return compare(x, y) >= 0; }

 private:
  Integer common_radicand(const Scalar& o) const {
    if (d_ == 0) return o.d_;
    if (o.d_ == 0 || o.d_ == d_) return d_;
    throw Error(ErrorKind::MixedRadicands,
                "sqrt(" + d_.get_str() + ") and sqrt(" + o.d_.get_str() + ") in one computation");
  }

  void normalize() {
    a_.canonicalize();
    b_.canonicalize();
    if (sgn(b_) == 0) d_ = 0;
  }

  Rational a_{0};
  Rational b_{0};
  Integer d_{0};
};

/// The radicand shared by a collection of scalars (0 if all rational).
template <typename Range>
Integer common_radicand(const Range& values) {
  Integer d = 0;
  for (const Scalar& v : values) {
    if (v.radicand() == 0) continue;
    if (d == 0) {
      d = v.radicand();
    } else if (d != v.radicand()) {
      throw Error(ErrorKind::MixedRadicands,
                  "sqrt(" + d.get_str() + ") and sqrt(" + v.radicand().get_str() + ")");
    }
  }
  return d;
}

}  // namespace walkerlab

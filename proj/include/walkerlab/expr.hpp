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

#include <cctype>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "walkerlab/matrix.hpp"

namespace walkerlab {

/// Parameter assignment: name to exact rational value.
using ParamValues = std::map<std::string, Rational>;

/// Immutable arithmetic expression tree. Copies share nodes.
class Expr {
 public:
  enum class Kind { Number, Symbol, Neg, Add, Sub, Mul, Div, Pow, Sqrt };

  Expr() : Expr(number(0)) {}

  static Expr number(const Rational& value) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Number;
    n->value = value;
    return Expr(std::move(n));
  }
  static Expr symbol(std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Symbol;
    n->name = std::move(name);
    return Expr(std::move(n));
  }
  static Expr unary(Kind kind, Expr a) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->args = {std::move(a)};
    return Expr(std::move(n));
  }
  static Expr binary(Kind kind, Expr a, Expr b) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->args = {std::move(a), std::move(b)};
    return Expr(std::move(n));
  }
  static Expr power(Expr base, long exponent) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Pow;
    n->args = {std::move(base)};
    n->exponent = exponent;
    return Expr(std::move(n));
  }

  Kind kind() const { return node_->kind; }
  const Rational& value() const { return node_->value; }
  const std::string& name() const { return node_->name; }
  long exponent() const { return node_->exponent; }
  const Expr& arg(std::size_t i) const { return node_->args.at(i); }

  friend bool operator==(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_) return true;
    const Node& x = *a.node_;
    const Node& y = *b.node_;
    if (x.kind != y.kind || x.exponent != y.exponent || x.name != y.name || x.value != y.value) return false;
    if (x.args.size() != y.args.size()) return false;
    for (std::size_t i = 0; i < x.args.size(); ++i)
      if (!(x.args[i] == y.args[i])) return false;
    return true;
  }
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

 private:
  struct Node {
    Kind kind = Kind::Number;
    Rational value{0};
    std::string name;
    long exponent = 0;
    std::vector<Expr> args;
  };
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  std::shared_ptr<const Node> node_;
};

enum class Comparison { Equal, NotEqual, Less, LessEqual, Greater, GreaterEqual };

inline std::string_view to_string(Comparison c) {
  switch (c) {
    case Comparison::Equal: return "==";
    case Comparison::NotEqual: return "!=";
    case Comparison::Less: return "<";
    case Comparison::LessEqual: return "<=";
    case Comparison::Greater: return ">";
    case Comparison::GreaterEqual: return ">=";
  }
  return "?";
}

/// lhs (cmp) rhs, used for parameter constraints and conditional expectations.
struct Relation {
  Expr lhs;
  Comparison op = Comparison::NotEqual;
  Expr rhs;
};

namespace detail {

/// Recursive-descent parser. Positions are reported as 1-based columns
/// relative to the start of the line the text came from.
class ExprParser {
 public:
  ExprParser(std::string_view text, std::size_t line, std::size_t column_offset)
      : text_(text), line_(line), offset_(column_offset) {}

  Expr parse_full() {
    Expr e = parse_sum();
    expect_end();
    return e;
  }

  Relation parse_relation() {
    Relation r;
    r.lhs = parse_sum();
    skip_space();
    static const std::pair<std::string_view, Comparison> ops[] = {
        {"==", Comparison::Equal},        {"!=", Comparison::NotEqual}, {"<=", Comparison::LessEqual},
        {">=", Comparison::GreaterEqual}, {"<", Comparison::Less},      {">", Comparison::Greater},
        {"=", Comparison::Equal}};
    bool matched = false;
    for (const auto& [tok, op] : ops) {
      if (text_.substr(pos_, tok.size()) == tok) {
        pos_ += tok.size();
        r.op = op;
        matched = true;
        break;
      }
    }
    if (!matched) fail("expected a comparison operator");
    r.rhs = parse_sum();
    expect_end();
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw SyntaxError(what, line_, offset_ + pos_ + 1);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect_end() {
    skip_space();
    if (pos_ != text_.size()) fail(std::string("unexpected '") + text_[pos_] + "'");
  }

  Expr parse_sum() {
    Expr e = parse_product();
    for (;;) {
      skip_space();
      // Do not swallow the '-' of nothing; comparison operators end the sum.
      if (accept('+')) {
        e = Expr::binary(Expr::Kind::Add, e, parse_product());
      } else if (accept('-')) {
        e = Expr::binary(Expr::Kind::Sub, e, parse_product());
      } else {
        return e;
      }
    }
  }

  Expr parse_product() {
    Expr e = parse_unary();
    for (;;) {
      if (accept('*')) {
        e = Expr::binary(Expr::Kind::Mul, e, parse_unary());
      } else if (accept('/')) {
        e = Expr::binary(Expr::Kind::Div, e, parse_unary());
      } else {
        return e;
      }
    }
  }

  Expr parse_unary() {
    if (accept('-')) return Expr::unary(Expr::Kind::Neg, parse_unary());
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_atom();
    if (!accept('^')) return base;
    skip_space();
    bool negative = accept('-');
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("exponent must be an integer literal");
    if (pos_ - start > 6) fail("exponent too large");
    long k = std::stol(std::string(text_.substr(start, pos_ - start)));
    return Expr::power(base, negative ? -k : k);
  }

  Expr parse_atom() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = parse_sum();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
        fail("malformed number");
      return Expr::number(Rational(Integer(std::string(text_.substr(start, pos_ - start)))));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      std::string name(text_.substr(start, pos_ - start));
      if (name == "sqrt") {
        if (!accept('(')) fail("expected '(' after sqrt");
        Expr e = parse_sum();
        if (!accept(')')) fail("expected ')'");
        return Expr::unary(Expr::Kind::Sqrt, e);
      }
      return Expr::symbol(std::move(name));
    }
    fail(std::string("unexpected '") + c + "'");
  }

  std::string_view text_;
  std::size_t line_;
  std::size_t offset_;
  std::size_t pos_ = 0;
};

inline int precedence(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub: return 1;
    case Expr::Kind::Mul:
    case Expr::Kind::Div: return 2;
    case Expr::Kind::Neg: return 3;
    case Expr::Kind::Pow: return 4;
    case Expr::Kind::Number:
      return (e.value().get_den() == 1 && sgn(e.value()) >= 0) ? 5 : 0;
    default: return 5;
  }
}

inline std::string print_expr(const Expr& e);

inline std::string wrap(const Expr& e, bool parens) {
  return parens ? "(" + print_expr(e) + ")" : print_expr(e);
}

inline std::string print_expr(const Expr& e) {
  using K = Expr::Kind;
  const int p = precedence(e);
  switch (e.kind()) {
    case K::Number: return e.value().get_den() == 1 && sgn(e.value()) >= 0 ? e.value().get_str() : "(" + e.value().get_str() + ")";
    case K::Symbol: return e.name();
    case K::Neg: return "-" + wrap(e.arg(0), precedence(e.arg(0)) < p);
    case K::Sqrt: return "sqrt(" + print_expr(e.arg(0)) + ")";
    case K::Pow: return wrap(e.arg(0), precedence(e.arg(0)) <= p) + "^" + std::to_string(e.exponent());
    default: break;
  }
  const char* op = e.kind() == K::Add ? " + " : e.kind() == K::Sub ? " - " : e.kind() == K::Mul ? "*" : "/";
  // Left-associative: the right operand needs parentheses at equal precedence.
  return wrap(e.arg(0), precedence(e.arg(0)) < p) + op + wrap(e.arg(1), precedence(e.arg(1)) <= p);
}

}  // namespace detail

inline Expr parse_expr(std::string_view text, std::size_t line = 1, std::size_t column_offset = 0) {
  return detail::ExprParser(text, line, column_offset).parse_full();
}

inline Relation parse_relation(std::string_view text, std::size_t line = 1, std::size_t column_offset = 0) {
  return detail::ExprParser(text, line, column_offset).parse_relation();
}

inline std::string to_string(const Expr& e) { return detail::print_expr(e); }

inline std::string to_string(const Relation& r) {
  return to_string(r.lhs) + " " + std::string(to_string(r.op)) + " " + to_string(r.rhs);
}

inline void collect_symbols(const Expr& e, std::set<std::string>& out) {
  if (e.kind() == Expr::Kind::Symbol) {
    out.insert(e.name());
    return;
  }
  if (e.kind() == Expr::Kind::Number) return;
  collect_symbols(e.arg(0), out);
  if (e.kind() == Expr::Kind::Add || e.kind() == Expr::Kind::Sub || e.kind() == Expr::Kind::Mul ||
      e.kind() == Expr::Kind::Div)
    collect_symbols(e.arg(1), out);
}

inline std::set<std::string> symbols(const Expr& e) {
  std::set<std::string> s;
  collect_symbols(e, s);
  return s;
}

inline Scalar eval(const Expr& e, const ParamValues& values) {
  using K = Expr::Kind;
  switch (e.kind()) {
    case K::Number: return e.value();
    case K::Symbol: {
      auto it = values.find(e.name());
      if (it == values.end()) throw Error(ErrorKind::UnboundParameter, "parameter '" + e.name() + "' is not bound");
      return it->second;
    }
    case K::Neg: return -eval(e.arg(0), values);
    case K::Add: return eval(e.arg(0), values) + eval(e.arg(1), values);
    case K::Sub: return eval(e.arg(0), values) - eval(e.arg(1), values);
    case K::Mul: return eval(e.arg(0), values) * eval(e.arg(1), values);
    case K::Div: return eval(e.arg(0), values) / eval(e.arg(1), values);
    case K::Sqrt: return Scalar::sqrt(eval(e.arg(0), values));
    case K::Pow: {
      Scalar base = eval(e.arg(0), values);
      long k = e.exponent();
      Scalar r = 1;
      for (long i = 0; i < (k < 0 ? -k : k); ++i) r *= base;
      return k < 0 ? Scalar(1) / r : r;
    }
  }
  return Scalar();
}

inline bool holds(const Relation& r, const ParamValues& values) {
  int c = compare(eval(r.lhs, values), eval(r.rhs, values));
  switch (r.op) {
    case Comparison::Equal: return c == 0;
    case Comparison::NotEqual: return c != 0;
    case Comparison::Less: return c < 0;
    case Comparison::LessEqual: return c <= 0;
    case Comparison::Greater: return c > 0;
    case Comparison::GreaterEqual: return c >= 0;
  }
  return false;
}

/// Degree in the given basis symbols: 0 if free of them, 1 if homogeneous
/// linear. Anything else (products of basis symbols, constant offsets,
/// basis symbols under sqrt or in a denominator) throws InvalidArgument.
inline int linear_degree(const Expr& e, const std::set<std::string>& basis) {
  using K = Expr::Kind;
  auto bad = [&](const std::string& why) -> int {
    throw Error(ErrorKind::InvalidArgument, "'" + to_string(e) + "' is not a linear combination: " + why);
  };
  switch (e.kind()) {
    case K::Number: return 0;
    case K::Symbol: return basis.count(e.name()) ? 1 : 0;
    case K::Neg: return linear_degree(e.arg(0), basis);
    case K::Add:
    case K::Sub: {
      int a = linear_degree(e.arg(0), basis), b = linear_degree(e.arg(1), basis);
      if (a != b) return bad("mixes basis terms with a constant");
      return a;
    }
    case K::Mul: {
      int d = linear_degree(e.arg(0), basis) + linear_degree(e.arg(1), basis);
      if (d > 1) return bad("product of basis symbols");
      return d;
    }
    case K::Div:
      if (linear_degree(e.arg(1), basis) != 0) return bad("basis symbol in a denominator");
      return linear_degree(e.arg(0), basis);
    case K::Pow:
      if (linear_degree(e.arg(0), basis) != 0 && e.exponent() != 1) return bad("power of a basis symbol");
      return linear_degree(e.arg(0), basis);
    case K::Sqrt:
      if (linear_degree(e.arg(0), basis) != 0) return bad("basis symbol under sqrt");
      return 0;
  }
  return 0;
}

/// Coordinates of a linear combination of basis symbols, the symbols mapped
/// to positions by `index`.
inline Vector eval_linear(const Expr& e, const std::map<std::string, std::size_t>& index,
                          const ParamValues& values) {
  using K = Expr::Kind;
  const std::size_t n = index.size();
  auto is_basis_free = [&](const Expr& x) {
    for (const auto& s : symbols(x))
      if (index.count(s)) return false;
    return true;
  };
  switch (e.kind()) {
    case K::Symbol: {
      auto it = index.find(e.name());
      if (it != index.end()) return unit_vector(n, it->second);
      break;
    }
    case K::Neg: return Scalar(-1) * eval_linear(e.arg(0), index, values);
    case K::Add: return eval_linear(e.arg(0), index, values) + eval_linear(e.arg(1), index, values);
    case K::Sub: return eval_linear(e.arg(0), index, values) - eval_linear(e.arg(1), index, values);
    case K::Mul:
      if (is_basis_free(e.arg(0))) return eval(e.arg(0), values) * eval_linear(e.arg(1), index, values);
      if (is_basis_free(e.arg(1))) return eval(e.arg(1), values) * eval_linear(e.arg(0), index, values);
      break;
    case K::Div:
      if (!is_basis_free(e.arg(1))) break;
      return (Scalar(1) / eval(e.arg(1), values)) * eval_linear(e.arg(0), index, values);
    case K::Pow:
      if (e.exponent() == 1) return eval_linear(e.arg(0), index, values);
      break;
    default: break;
  }
  if (is_basis_free(e)) {
    if (eval(e, values).is_zero()) return Vector(n);
  }
  throw Error(ErrorKind::InvalidArgument, "'" + to_string(e) + "' is not a linear combination of basis symbols");
}

}  // namespace walkerlab

#pragma once

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tbg/dual.hpp"

namespace tbg {

// Immutable scalar expression tree. Nodes are shared, never mutated, so the
// same tree may be evaluated from many threads without synchronization.
class Expr {
 public:
  enum class Op : std::uint8_t { kConst, kVar, kAdd, kSub, kMul, kDiv, kPow, kNeg, kSin, kCos, kExp, kLog, kSqrt };

  Expr() : Expr(0.0) {}
  Expr(double c) : node_(std::make_shared<const Node>(Node{Op::kConst, c, 0, {}, nullptr, nullptr})) {}  // NOLINT

  static Expr variable(std::string name) {
    return Expr(std::make_shared<const Node>(Node{Op::kVar, 0.0, 0, std::move(name), nullptr, nullptr}));
  }
  static Expr binary(Op op, const Expr& a, const Expr& b) {
    return Expr(std::make_shared<const Node>(Node{op, 0.0, 0, {}, a.node_, b.node_}));
  }
  static Expr unary(Op op, const Expr& a) {
    return Expr(std::make_shared<const Node>(Node{op, 0.0, 0, {}, a.node_, nullptr}));
  }
  static Expr power(const Expr& a, int k) {
    return Expr(std::make_shared<const Node>(Node{Op::kPow, 0.0, k, {}, a.node_, nullptr}));
  }

  Op op() const { return node_->op; }
  double constant() const { return node_->c; }
  const std::string& name() const { return node_->name; }
  int exponent() const { return node_->k; }
  Expr lhs() const { return Expr(node_->a); }
  Expr rhs() const { return Expr(node_->b); }
  Expr arg() const { return Expr(node_->a); }

  bool is_constant() const { return node_->op == Op::kConst; }
  bool is_constant(double c) const { return is_constant() && node_->c == c; }

  // Identity of the underlying node, used for memoization.
  const void* id() const { return node_.get(); }

 private:
  struct Node {
    Op op;
    double c;
    int k;
    std::string name;
    std::shared_ptr<const Node> a;
    std::shared_ptr<const Node> b;
  };
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  std::shared_ptr<const Node> node_;
};

inline Expr operator+(const Expr& a, const Expr& b) { return Expr::binary(Expr::Op::kAdd, a, b); }
inline Expr operator-(const Expr& a, const Expr& b) { return Expr::binary(Expr::Op::kSub, a, b); }
inline Expr operator*(const Expr& a, const Expr& b) { return Expr::binary(Expr::Op::kMul, a, b); }
inline Expr operator/(const Expr& a, const Expr& b) { return Expr::binary(Expr::Op::kDiv, a, b); }
inline Expr operator-(const Expr& a) { return Expr::unary(Expr::Op::kNeg, a); }
inline Expr pow(const Expr& a, int k) { return Expr::power(a, k); }
inline Expr sin(const Expr& a) { return Expr::unary(Expr::Op::kSin, a); }
inline Expr cos(const Expr& a) { return Expr::unary(Expr::Op::kCos, a); }
inline Expr exp(const Expr& a) { return Expr::unary(Expr::Op::kExp, a); }
inline Expr log(const Expr& a) { return Expr::unary(Expr::Op::kLog, a); }
inline Expr sqrt(const Expr& a) { return Expr::unary(Expr::Op::kSqrt, a); }

// Variable assignment for evaluation. Lookup is linear; charts are small.
class EvalPoint {
 public:
  EvalPoint() = default;
  EvalPoint(std::initializer_list<std::pair<std::string, double>> init) : entries_(init) {}
  EvalPoint(std::span<const std::string> names, std::span<const double> values) {
    for (std::size_t i = 0; i < names.size(); ++i) entries_.emplace_back(names[i], values[i]);
  }

  void set(const std::string& name, double value) {
    for (auto& [n, v] : entries_) {
      if (n == name) {
        v = value;
        return;
      }
    }
    entries_.emplace_back(name, value);
  }
  const double* find(std::string_view name) const {
    for (const auto& [n, v] : entries_)
      if (n == name) return &v;
    return nullptr;
  }
  const std::vector<std::pair<std::string, double>>& entries() const { return entries_; }

 private:
  std::vector<std::pair<std::string, double>> entries_;
};

inline std::string to_string(const Expr& e);

class DomainError : public std::runtime_error {
 public:
  DomainError(const std::string& what, std::string subexpression)
      : std::runtime_error(what), subexpression_(std::move(subexpression)) {}
  const std::string& subexpression() const { return subexpression_; }

 private:
  std::string subexpression_;
};

class UnboundVariableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string describe_point(std::span<const std::string> names, std::span<const double> values) {
  std::string s = "{";
  for (std::size_t i = 0; i < names.size(); ++i) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", values[i]);
    if (i) s += ", ";
    s += names[i] + "=" + buf;
  }
  return s + "}";
}

template <class Lookup, class Describe>
double eval_node(const Expr& e, const Lookup& lookup, const Describe& describe) {
  using Op = Expr::Op;
  auto fail = [&](const char* why) -> double {
    throw DomainError(std::string("domain violation (") + why + ") in '" + to_string(e) + "' at " + describe(),
                      to_string(e));
  };
  switch (e.op()) {
    case Op::kConst:
      return e.constant();
    case Op::kVar: {
      const double* v = lookup(e.name());
      if (!v) throw UnboundVariableError("unbound variable '" + e.name() + "'");
      return *v;
    }
    case Op::kAdd:
      return eval_node(e.lhs(), lookup, describe) + eval_node(e.rhs(), lookup, describe);
    case Op::kSub:
      return eval_node(e.lhs(), lookup, describe) - eval_node(e.rhs(), lookup, describe);
    case Op::kMul:
      return eval_node(e.lhs(), lookup, describe) * eval_node(e.rhs(), lookup, describe);
    case Op::kDiv: {
      const double num = eval_node(e.lhs(), lookup, describe);
      const double den = eval_node(e.rhs(), lookup, describe);
      if (den == 0.0) return fail("division by zero");
      return num / den;
    }
    case Op::kPow: {
      const double b = eval_node(e.arg(), lookup, describe);
      if (b == 0.0 && e.exponent() < 0) return fail("zero to a negative power");
      return ipow(b, e.exponent());
    }
    case Op::kNeg:
      return -eval_node(e.arg(), lookup, describe);
    case Op::kSin:
      return std::sin(eval_node(e.arg(), lookup, describe));
    case Op::kCos:
      return std::cos(eval_node(e.arg(), lookup, describe));
    case Op::kExp:
      return std::exp(eval_node(e.arg(), lookup, describe));
    case Op::kLog: {
      const double a = eval_node(e.arg(), lookup, describe);
      if (!(a > 0.0)) return fail("logarithm of a nonpositive value");
      return std::log(a);
    }
    case Op::kSqrt: {
      const double a = eval_node(e.arg(), lookup, describe);
      if (!(a >= 0.0)) return fail("square root of a negative value");
      return std::sqrt(a);
    }
  }
  return 0.0;
}

}  // namespace detail

inline double evaluate(const Expr& e, const EvalPoint& p) {
  auto lookup = [&](const std::string& n) { return p.find(n); };
  auto describe = [&] {
    std::vector<std::string> names;
    std::vector<double> values;
    for (const auto& [n, v] : p.entries()) {
      names.push_back(n);
      values.push_back(v);
    }
    return detail::describe_point(names, values);
  };
  return detail::eval_node(e, lookup, describe);
}

// Fast path used by the geometry layer: names and values in parallel arrays.
inline double evaluate(const Expr& e, std::span<const std::string> names, std::span<const double> values) {
  auto lookup = [&](const std::string& n) -> const double* {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == n) return &values[i];
    return nullptr;
  };
  auto describe = [&] { return detail::describe_point(names, values); };
  return detail::eval_node(e, lookup, describe);
}

inline bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.id() == b.id()) return true;
  if (a.op() != b.op()) return false;
  using Op = Expr::Op;
  switch (a.op()) {
    case Op::kConst:
      return a.constant() == b.constant() || (std::isnan(a.constant()) && std::isnan(b.constant()));
    case Op::kVar:
      return a.name() == b.name();
    case Op::kAdd:
    case Op::kSub:
    case Op::kMul:
    case Op::kDiv:
      return structurally_equal(a.lhs(), b.lhs()) && structurally_equal(a.rhs(), b.rhs());
    case Op::kPow:
      return a.exponent() == b.exponent() && structurally_equal(a.arg(), b.arg());
    default:
      return structurally_equal(a.arg(), b.arg());
  }
}

inline void collect_variables(const Expr& e, std::set<std::string>& out) {
  using Op = Expr::Op;
  switch (e.op()) {
    case Op::kConst:
      return;
    case Op::kVar:
      out.insert(e.name());
      return;
    case Op::kAdd:
    case Op::kSub:
    case Op::kMul:
    case Op::kDiv:
      collect_variables(e.lhs(), out);
      collect_variables(e.rhs(), out);
      return;
    default:
      collect_variables(e.arg(), out);
  }
}

inline std::set<std::string> free_variables(const Expr& e) {
  std::set<std::string> s;
  collect_variables(e, s);
  return s;
}

inline std::size_t node_count(const Expr& e) {
  using Op = Expr::Op;
  switch (e.op()) {
    case Op::kConst:
    case Op::kVar:
      return 1;
    case Op::kAdd:
    case Op::kSub:
    case Op::kMul:
    case Op::kDiv:
      return 1 + node_count(e.lhs()) + node_count(e.rhs());
    default:
      return 1 + node_count(e.arg());
  }
}

// ---------------------------------------------------------------------------
// simplify
// ---------------------------------------------------------------------------

namespace detail {

// One local rewrite at a node whose children are already simplified.
inline Expr simplify_node(const Expr& e) {
  using Op = Expr::Op;
  switch (e.op()) {
    case Op::kAdd: {
      const Expr a = e.lhs(), b = e.rhs();
      if (a.is_constant() && b.is_constant()) return Expr(a.constant() + b.constant());
      if (a.is_constant(0.0)) return b;
      if (b.is_constant(0.0)) return a;
      return e;
    }
    case Op::kSub: {
      const Expr a = e.lhs(), b = e.rhs();
      if (a.is_constant() && b.is_constant()) return Expr(a.constant() - b.constant());
      if (b.is_constant(0.0)) return a;
      if (a.is_constant(0.0)) return simplify_node(-b);
      return e;
    }
    case Op::kMul: {
      const Expr a = e.lhs(), b = e.rhs();
      if (a.is_constant() && b.is_constant()) return Expr(a.constant() * b.constant());
      if (a.is_constant(0.0) || b.is_constant(0.0)) return Expr(0.0);
      if (a.is_constant(1.0)) return b;
      if (b.is_constant(1.0)) return a;
      if (a.is_constant(-1.0)) return simplify_node(-b);
      if (b.is_constant(-1.0)) return simplify_node(-a);
      return e;
    }
    case Op::kDiv: {
      const Expr a = e.lhs(), b = e.rhs();
      if (b.is_constant(0.0)) return e;
      if (a.is_constant() && b.is_constant()) return Expr(a.constant() / b.constant());
      if (a.is_constant(0.0)) return Expr(0.0);
      if (b.is_constant(1.0)) return a;
      return e;
    }
    case Op::kPow: {
      const Expr a = e.arg();
      const int k = e.exponent();
      if (k == 0) return Expr(1.0);
      if (k == 1) return a;
      if (a.is_constant() && !(a.constant() == 0.0 && k < 0)) return Expr(ipow(a.constant(), k));
      return e;
    }
    case Op::kNeg: {
      const Expr a = e.arg();
      if (a.is_constant()) return Expr(-a.constant());
      if (a.op() == Op::kNeg) return a.arg();
      return e;
    }
    case Op::kSin:
      if (e.arg().is_constant()) return Expr(std::sin(e.arg().constant()));
      return e;
    case Op::kCos:
      if (e.arg().is_constant()) return Expr(std::cos(e.arg().constant()));
      return e;
    case Op::kExp:
      if (e.arg().is_constant()) return Expr(std::exp(e.arg().constant()));
      return e;
    case Op::kLog:
      if (e.arg().is_constant() && e.arg().constant() > 0.0) return Expr(std::log(e.arg().constant()));
      return e;
    case Op::kSqrt:
      if (e.arg().is_constant() && e.arg().constant() >= 0.0) return Expr(std::sqrt(e.arg().constant()));
      return e;
    default:
      return e;
  }
}

inline Expr simplify_pass(const Expr& e, std::unordered_map<const void*, Expr>& memo) {
  if (auto it = memo.find(e.id()); it != memo.end()) return it->second;
  using Op = Expr::Op;
  Expr out = e;
  switch (e.op()) {
    case Op::kConst:
    case Op::kVar:
      break;
    case Op::kAdd:
    case Op::kSub:
    case Op::kMul:
    case Op::kDiv: {
      const Expr a = simplify_pass(e.lhs(), memo);
      const Expr b = simplify_pass(e.rhs(), memo);
      out = simplify_node((a.id() == e.lhs().id() && b.id() == e.rhs().id()) ? e : Expr::binary(e.op(), a, b));
      break;
    }
    case Op::kPow: {
      const Expr a = simplify_pass(e.arg(), memo);
      out = simplify_node(a.id() == e.arg().id() ? e : Expr::power(a, e.exponent()));
      break;
    }
    default: {
      const Expr a = simplify_pass(e.arg(), memo);
      out = simplify_node(a.id() == e.arg().id() ? e : Expr::unary(e.op(), a));
      break;
    }
  }
  memo.emplace(e.id(), out);
  return out;
}

}  // namespace detail

// Value-preserving rewrite to fixpoint: 0+e->e, 0*e->0, 1*e->e, e^0->1, e^1->e,
// double negation and constant folding (only where the folded value is defined).
inline Expr simplify(const Expr& e) {
  Expr cur = e;
  for (int iter = 0; iter < 64; ++iter) {
    std::unordered_map<const void*, Expr> memo;
    Expr next = detail::simplify_pass(cur, memo);
    if (structurally_equal(next, cur)) return next;
    cur = next;
  }
  return cur;
}

// ---------------------------------------------------------------------------
// differentiate
// ---------------------------------------------------------------------------

namespace detail {

inline Expr diff_raw(const Expr& e, const std::string& v, std::unordered_map<const void*, Expr>& memo) {
  if (auto it = memo.find(e.id()); it != memo.end()) return it->second;
  using Op = Expr::Op;
  Expr d;
  switch (e.op()) {
    case Op::kConst:
      d = Expr(0.0);
      break;
    case Op::kVar:
      d = Expr(e.name() == v ? 1.0 : 0.0);
      break;
    case Op::kAdd:
      d = diff_raw(e.lhs(), v, memo) + diff_raw(e.rhs(), v, memo);
      break;
    case Op::kSub:
      d = diff_raw(e.lhs(), v, memo) - diff_raw(e.rhs(), v, memo);
      break;
    case Op::kMul:
      d = diff_raw(e.lhs(), v, memo) * e.rhs() + e.lhs() * diff_raw(e.rhs(), v, memo);
      break;
    case Op::kDiv:
      d = (diff_raw(e.lhs(), v, memo) * e.rhs() - e.lhs() * diff_raw(e.rhs(), v, memo)) / pow(e.rhs(), 2);
      break;
    case Op::kPow: {
      const int k = e.exponent();
      d = k == 0 ? Expr(0.0) : Expr(static_cast<double>(k)) * pow(e.arg(), k - 1) * diff_raw(e.arg(), v, memo);
      break;
    }
    case Op::kNeg:
      d = -diff_raw(e.arg(), v, memo);
      break;
    case Op::kSin:
      d = cos(e.arg()) * diff_raw(e.arg(), v, memo);
      break;
    case Op::kCos:
      d = -(sin(e.arg()) * diff_raw(e.arg(), v, memo));
      break;
    case Op::kExp:
      d = e * diff_raw(e.arg(), v, memo);
      break;
    case Op::kLog:
      d = diff_raw(e.arg(), v, memo) / e.arg();
      break;
    case Op::kSqrt:
      d = diff_raw(e.arg(), v, memo) / (Expr(2.0) * e);
      break;
  }
  memo.emplace(e.id(), d);
  return d;
}

}  // namespace detail

// Exact partial derivative with respect to `v`; all other variables are held fixed.
inline Expr differentiate(const Expr& e, const std::string& v) {
  std::unordered_map<const void*, Expr> memo;
  return simplify(detail::diff_raw(e, v, memo));
}

// ---------------------------------------------------------------------------
// printing
// ---------------------------------------------------------------------------

namespace detail {

inline int precedence(Expr::Op op) {
  using Op = Expr::Op;
  switch (op) {
    case Op::kAdd:
    case Op::kSub:
      return 1;
    case Op::kMul:
    case Op::kDiv:
      return 2;
    case Op::kNeg:
      return 3;
    case Op::kPow:
      return 4;
    default:
      return 5;
  }
}

inline std::string format_number(double c) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", c);
  std::string s = buf;
  // Shortest representation that still round-trips.
  for (int prec = 1; prec < 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, c);
    if (std::strtod(buf, nullptr) == c) {
      s = buf;
      break;
    }
  }
  return s;
}

inline std::string print(const Expr& e, int parent_prec, bool right_operand) {
  using Op = Expr::Op;
  const int prec = precedence(e.op());
  std::string s;
  switch (e.op()) {
    case Op::kConst:
      s = format_number(e.constant());
      if (e.constant() < 0 || std::signbit(e.constant())) s = "(" + s + ")";
      return s;
    case Op::kVar:
      return e.name();
    case Op::kAdd:
      s = print(e.lhs(), prec, false) + " + " + print(e.rhs(), prec, true);
      break;
    case Op::kSub:
      s = print(e.lhs(), prec, false) + " - " + print(e.rhs(), prec, true);
      break;
    case Op::kMul:
      s = print(e.lhs(), prec, false) + "*" + print(e.rhs(), prec, true);
      break;
    case Op::kDiv:
      s = print(e.lhs(), prec, false) + "/" + print(e.rhs(), prec, true);
      break;
    case Op::kPow: {
      const std::string k = e.exponent() < 0 ? "(" + std::to_string(e.exponent()) + ")" : std::to_string(e.exponent());
      s = print(e.arg(), prec + 1, false) + "^" + k;
      break;
    }
    case Op::kNeg:
      s = "-" + print(e.arg(), prec, true);
      break;
    case Op::kSin:
      return "sin(" + print(e.arg(), 0, false) + ")";
    case Op::kCos:
      return "cos(" + print(e.arg(), 0, false) + ")";
    case Op::kExp:
      return "exp(" + print(e.arg(), 0, false) + ")";
    case Op::kLog:
      return "ln(" + print(e.arg(), 0, false) + ")";
    case Op::kSqrt:
      return "sqrt(" + print(e.arg(), 0, false) + ")";
  }
  const bool needs = prec < parent_prec || (right_operand && prec == parent_prec && prec <= 2);
  return needs ? "(" + s + ")" : s;
}

}  // namespace detail

inline std::string to_string(const Expr& e) { return detail::print(e, 0, false); }

// ---------------------------------------------------------------------------
// parsing
// ---------------------------------------------------------------------------

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int column)
      : std::runtime_error(msg + " at column " + std::to_string(column)), column_(column) {}
  int column() const { return column_; }

 private:
  int column_;
};

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  Expr parse() {
    Expr e = parse_sum();
    skip_ws();
    if (pos_ != s_.size()) error("unexpected character '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void error(const std::string& msg) const { throw ParseError(msg, static_cast<int>(pos_) + 1); }

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\n' || s_[pos_] == '\r')) ++pos_;
  }
  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr parse_sum() {
    Expr e = parse_product();
    for (;;) {
      if (accept('+'))
        e = e + parse_product();
      else if (accept('-'))
        e = e - parse_product();
      else
        return e;
    }
  }

  Expr parse_product() {
    Expr e = parse_unary();
    for (;;) {
      if (accept('*'))
        e = e * parse_unary();
      else if (accept('/'))
        e = e / parse_unary();
      else
        return e;
    }
  }

  Expr parse_unary() {
    if (accept('-')) return -parse_unary();
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (!accept('^')) return base;
    return pow(base, parse_integer_exponent());
  }

  int parse_integer_exponent() {
    skip_ws();
    bool paren = accept('(');
    skip_ws();
    bool neg = false;
    if (accept('-'))
      neg = true;
    else
      accept('+');
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) error("expected an integer exponent");
    if (pos_ < s_.size() && (s_[pos_] == '.' || s_[pos_] == 'e' || s_[pos_] == 'E'))
      error("exponent must be an integer");
    const long k = std::stol(std::string(s_.substr(start, pos_ - start)));
    if (k > 1000) error("exponent too large");
    if (paren && !accept(')')) error("expected ')'");
    return static_cast<int>(neg ? -k : k);
  }

  Expr parse_primary() {
    skip_ws();
    if (pos_ >= s_.size()) error("unexpected end of expression");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = parse_sum();
      if (!accept(')')) error("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string ident(s_.substr(start, pos_ - start));
      skip_ws();
      if (pos_ < s_.size() && s_[pos_] == '(') {
        const std::size_t fn_pos = start;
        ++pos_;
        Expr a = parse_sum();
        if (!accept(')')) error("expected ')'");
        if (ident == "sin") return sin(a);
        if (ident == "cos") return cos(a);
        if (ident == "exp") return exp(a);
        if (ident == "ln" || ident == "log") return log(a);
        if (ident == "sqrt") return sqrt(a);
        throw ParseError("unknown function '" + ident + "'", static_cast<int>(fn_pos) + 1);
      }
      return Expr::variable(ident);
    }
    error("unexpected character '" + std::string(1, c) + "'");
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      } else {
        pos_ = save;
      }
    }
    const std::string text(s_.substr(start, pos_ - start));
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size()) throw ParseError("malformed number '" + text + "'", static_cast<int>(start) + 1);
    return Expr(v);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Expr parse_expr(std::string_view text) { return detail::Parser(text).parse(); }

}  // namespace tbg

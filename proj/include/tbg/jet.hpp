#pragma once

#include <span>
#include <string>
#include <vector>

#include "tbg/dual.hpp"
#include "tbg/expr.hpp"

namespace tbg {

// An expression together with its symbolic partial derivatives (up to the
// requested order) over a fixed, ordered variable list. Evaluating at a point
// yields a jet whose derivative slots come from the symbolic derivatives.
class JetExpr {
 public:
  JetExpr() = default;
  JetExpr(Expr e, std::vector<std::string> vars, int order) : e_(std::move(e)), vars_(std::move(vars)), order_(order) {
    const int n = static_cast<int>(vars_.size());
    if (order_ >= 1) {
      d1_.reserve(n);
      for (const auto& v : vars_) d1_.push_back(differentiate(e_, v));
    }
    if (order_ >= 2) {
      d2_.assign(static_cast<std::size_t>(n * n), Expr(0.0));
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          Expr dij = differentiate(d1_[i], vars_[j]);
          d2_[i * n + j] = dij;
          d2_[j * n + i] = dij;
        }
    }
  }

  const Expr& expr() const { return e_; }
  int order() const { return order_; }
  int nvars() const { return static_cast<int>(vars_.size()); }
  const Expr& first(int i) const { return d1_.at(i); }
  const Expr& second(int i, int j) const { return d2_.at(static_cast<std::size_t>(i * nvars() + j)); }

  double value(std::span<const double> x) const { return evaluate(e_, vars_, x); }

  Dual<double> jet1(std::span<const double> x) const {
    require(1);
    Dual<double> r;
    r.v = value(x);
    r.n = nvars();
    for (int i = 0; i < r.n; ++i) r.d[i] = evaluate(d1_[i], vars_, x);
    return r;
  }

  Dual<Dual<double>> jet2(std::span<const double> x) const {
    require(2);
    const int n = nvars();
    Dual<Dual<double>> r;
    r.n = n;
    r.v.v = value(x);
    r.v.n = n;
    for (int i = 0; i < n; ++i) {
      const double di = evaluate(d1_[i], vars_, x);
      r.v.d[i] = di;
      r.d[i].v = di;
      r.d[i].n = n;
      for (int j = 0; j < n; ++j) r.d[i].d[j] = evaluate(d2_[static_cast<std::size_t>(i * n + j)], vars_, x);
    }
    return r;
  }

 private:
  void require(int k) const {
    if (order_ < k) throw std::logic_error("JetExpr built with insufficient derivative order");
  }

  Expr e_;
  std::vector<std::string> vars_;
  int order_ = 0;
  std::vector<Expr> d1_;
  std::vector<Expr> d2_;
};

}  // namespace tbg

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "tbg/expr.hpp"
#include "tbg/jet.hpp"

using tbg::Expr;
using tbg::EvalPoint;

namespace {

Expr x() { return Expr::variable("x"); }
Expr y() { return Expr::variable("y"); }

double at(const Expr& e, double xv, double yv) { return tbg::evaluate(e, EvalPoint{{"x", xv}, {"y", yv}}); }

}  // namespace

TEST(Differentiate, ProductAndPowerRule) {
  const Expr d = tbg::differentiate(tbg::pow(x(), 2) * y(), "x");
  for (double xv : {-1.3, 0.0, 0.4, 2.0})
    for (double yv : {-0.5, 1.0, 3.0}) EXPECT_NEAR(at(d, xv, yv), 2 * xv * yv, 1e-14);
}

TEST(Differentiate, ConstantIsZero) {
  const Expr d = tbg::simplify(tbg::differentiate(Expr(3.7), "x"));
  ASSERT_TRUE(d.is_constant(0.0));
}

TEST(Differentiate, SinOfProductMatchesCentralDifference) {
  const Expr e = tbg::sin(x() * y());
  const Expr d = tbg::differentiate(e, "x");
  const double h = 1e-6;
  const double fd = (at(e, 0.3 + h, 0.7) - at(e, 0.3 - h, 0.7)) / (2 * h);
  EXPECT_NEAR(at(d, 0.3, 0.7), fd, 1e-8);
}

TEST(Evaluate, Arithmetic) { EXPECT_EQ(tbg::evaluate(x() + Expr(2.0) * y(), EvalPoint{{"x", 1}, {"y", 2}}), 5.0); }

TEST(Evaluate, DivisionByZeroIsDomainError) {
  EXPECT_THROW(tbg::evaluate(Expr(1.0) / x(), EvalPoint{{"x", 0.0}}), tbg::DomainError);
}

TEST(Evaluate, ExpLogRoundTrip) { EXPECT_NEAR(tbg::evaluate(tbg::exp(tbg::log(x())), EvalPoint{{"x", 3.5}}), 3.5, 1e-12); }

TEST(Evaluate, LogAndSqrtOfNegativeAreDomainErrors) {
  EXPECT_THROW(tbg::evaluate(tbg::log(x()), EvalPoint{{"x", -1.0}}), tbg::DomainError);
  EXPECT_THROW(tbg::evaluate(tbg::sqrt(x()), EvalPoint{{"x", -1.0}}), tbg::DomainError);
}

TEST(Evaluate, UnboundVariable) { EXPECT_THROW(tbg::evaluate(x() + y(), EvalPoint{{"x", 1.0}}), tbg::UnboundVariableError); }

TEST(Evaluate, BitIdenticalOnRepeat) {
  const Expr e = tbg::parse_expr("sin(x*y)^3 + exp(x)/(2 + cos(y))");
  const double a = at(e, 0.123, -0.456), b = at(e, 0.123, -0.456);
  EXPECT_EQ(std::memcmp(&a, &b, sizeof a), 0);
}

TEST(Simplify, AnnihilatorAndIdentity) {
  const Expr s = tbg::simplify(Expr(0.0) * tbg::sin(x()) + y());
  EXPECT_TRUE(tbg::structurally_equal(s, y()));
}

TEST(Simplify, PowerOne) { EXPECT_TRUE(tbg::structurally_equal(tbg::simplify(tbg::pow(x(), 1)), x())); }

TEST(Simplify, PowerZero) { EXPECT_TRUE(tbg::simplify(tbg::pow(x(), 0)).is_constant(1.0)); }

TEST(Simplify, ConstantFolding) {
  const Expr s = tbg::simplify((Expr(2.0) + Expr(3.0)) * x());
  EXPECT_TRUE(tbg::structurally_equal(s, Expr(5.0) * x())) << tbg::to_string(s);
}

TEST(Parse, Grammar) {
  EXPECT_NEAR(at(tbg::parse_expr("2*x^2 - y/4 + sqrt(1 + x^2)"), 1.0, 2.0), 2.0 - 0.5 + std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(at(tbg::parse_expr("-x^2"), 3.0, 0.0), -9.0, 0.0);
  EXPECT_NEAR(at(tbg::parse_expr("1.5e-1 * log(y)"), 0.0, std::exp(2.0)), 0.3, 1e-15);
}

TEST(Parse, ErrorColumnIsOneBased) {
  try {
    tbg::parse_expr("x + * y");
    FAIL() << "expected a parse error";
  } catch (const tbg::ParseError& e) {
    EXPECT_EQ(e.column(), 5);
  }
}

TEST(Parse, RejectsUnknownFunction) { EXPECT_THROW(tbg::parse_expr("tan(x)"), tbg::ParseError); }

TEST(Parse, PrintRoundTrip) {
  const Expr e = tbg::parse_expr("(x - y)^2 / (1 + exp(-x)) - sin(y)*cos(x)");
  const Expr back = tbg::parse_expr(tbg::to_string(e));
  EXPECT_NEAR(at(back, 0.3, -0.8), at(e, 0.3, -0.8), 1e-14);
}

TEST(FreeVariables, Collects) {
  const auto v = tbg::free_variables(tbg::parse_expr("x1*sin(x2) + 3"));
  EXPECT_EQ(v, (std::set<std::string>{"x1", "x2"}));
}

// --- random expressions ------------------------------------------------------

namespace {

// Trees over x, y that stay inside every function's domain on [-1, 1]².
class RandomExpr {
 public:
  explicit RandomExpr(std::uint64_t seed) : rng_(seed) {}

  Expr make(int depth) {
    if (depth == 0 || pick(4) == 0) return leaf();
    switch (pick(10)) {
      case 0: return make(depth - 1) + make(depth - 1);
      case 1: return make(depth - 1) - make(depth - 1);
      case 2: return make(depth - 1) * make(depth - 1);
      case 3: return make(depth - 1) / (Expr(2.5) + tbg::sin(make(depth - 1)));
      case 4: return tbg::pow(make(depth - 1), static_cast<int>(pick(4)));
      case 5: return tbg::sin(make(depth - 1));
      case 6: return tbg::cos(make(depth - 1));
      case 7: return tbg::exp(Expr(0.5) * tbg::sin(make(depth - 1)));
      case 8: return tbg::log(Expr(1.0) + tbg::pow(make(depth - 1), 2));
      default: return tbg::sqrt(Expr(0.5) + tbg::pow(make(depth - 1), 2));
    }
  }
  double coord() { return std::uniform_real_distribution<double>(-1.0, 1.0)(rng_); }

 private:
  unsigned pick(unsigned n) { return static_cast<unsigned>(rng_() % n); }
  Expr leaf() {
    switch (pick(3)) {
      case 0: return x();
      case 1: return y();
      default: return Expr(std::uniform_real_distribution<double>(-2.0, 2.0)(rng_));
    }
  }
  std::mt19937_64 rng_;
};

}  // namespace

TEST(RandomExpressions, SymbolicMatchesFiniteDifference) {
  RandomExpr gen(20240917);
  const double h = 1e-5;
  int checked = 0;
  for (int k = 0; k < 1000; ++k) {
    const Expr e = gen.make(4);
    const std::string v = (k % 2) ? "x" : "y";
    const double xv = gen.coord(), yv = gen.coord();
    const double d = at(tbg::differentiate(e, v), xv, yv);
    const double fd = v == "x" ? (at(e, xv + h, yv) - at(e, xv - h, yv)) / (2 * h)
                               : (at(e, xv, yv + h) - at(e, xv, yv - h)) / (2 * h);
    ASSERT_LE(std::abs(d - fd), 1e-6 * (1 + std::abs(d))) << tbg::to_string(e) << " d/d" << v;
    ++checked;
  }
  EXPECT_EQ(checked, 1000);
}

TEST(RandomExpressions, SimplifyIsIdempotent) {
  RandomExpr gen(7);
  for (int k = 0; k < 300; ++k) {
    const Expr s = tbg::simplify(gen.make(4));
    EXPECT_TRUE(tbg::structurally_equal(tbg::simplify(s), s)) << tbg::to_string(s);
  }
}

TEST(RandomExpressions, SimplifyPreservesDerivativeValue) {
  RandomExpr gen(11);
  for (int k = 0; k < 300; ++k) {
    const Expr e = gen.make(4);
    const double xv = gen.coord(), yv = gen.coord();
    const double a = at(tbg::differentiate(tbg::simplify(e), "x"), xv, yv);
    const double b = at(tbg::differentiate(e, "x"), xv, yv);
    EXPECT_LE(std::abs(a - b), 1e-12 * (1 + std::abs(b))) << tbg::to_string(e);
  }
}

TEST(Jet, SecondOrderMatchesSymbolic) {
  const Expr e = tbg::parse_expr("exp(x*y) + x^3*y");
  const tbg::JetExpr j(e, {"x", "y"}, 2);
  const std::vector<double> p{0.4, -0.9};
  const auto d2 = j.jet2(p);
  const double dxx = at(tbg::differentiate(tbg::differentiate(e, "x"), "x"), p[0], p[1]);
  const double dxy = at(tbg::differentiate(tbg::differentiate(e, "x"), "y"), p[0], p[1]);
  EXPECT_NEAR(d2.v.v, at(e, p[0], p[1]), 1e-15);
  EXPECT_NEAR(d2.d[0].d[0], dxx, 1e-13);
  EXPECT_NEAR(d2.d[0].d[1], dxy, 1e-13);
  EXPECT_NEAR(d2.d[1].d[0], dxy, 1e-13);
}

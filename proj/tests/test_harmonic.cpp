#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <vector>

#include "tbg/harmonic.hpp"
#include "tbg/sampling.hpp"
#include "tbg/zoo.hpp"

using namespace tbg;

namespace {

std::shared_ptr<const ChartManifold> scaled(const ChartManifold& m, double c) {
  Tensor<Expr, 2> g(m.dim());
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) g(i, j) = Expr(c) * m.metric(i, j);
  return std::make_shared<const ChartManifold>(m.vars(), g);
}

TangentBundleGeometry geometry(const LoadedSpec& s, double delta) { return TangentBundleGeometry(s.manifold, s.phi, delta); }

double max_block(const MapHessian& b, int n, bool mixed) {
  double v = 0.0;
  for (int h = 0; h < b.n; ++h)
    for (int i = 0; i < 2 * n; ++i)
      for (int j = 0; j < 2 * n; ++j)
        if (((i < n) != (j < n)) == mixed) v = std::max(v, std::abs(b(h, i, j)));
  return v;
}

VectorField field(const LoadedSpec& s, const std::string& name) {
  for (const auto& [k, v] : s.fields)
    if (k == name) return v;
  throw std::runtime_error("no field " + name);
}

}  // namespace

TEST(SecondFundamentalForm, IdentitySameMetricIsZero) {
  const auto s = load_builtin("para-product");
  const auto gamma = christoffel(s.manifold);
  const auto id = identity_map(s.manifold->chart());
  for (const auto& x : sample_base_points(*s.manifold, 10, 3)) {
    const auto g = gamma.at(x);
    const auto b = second_fundamental_form(id.derivatives(x), g, g);
    for (double v : b.b) EXPECT_EQ(v, 0.0);
    for (double v : tension_field(b, metric_inverse_at(*s.manifold, x))) EXPECT_EQ(v, 0.0);
  }
}

TEST(SecondFundamentalForm, AffineMapBetweenFlatSpaces) {
  const Chart c{{"x1", "x2"}};
  const SmoothMap f(c, {parse_expr("2*x1 - x2 + 3"), parse_expr("0.5*x2"), parse_expr("x1 + x2")});
  const auto b = second_fundamental_form(f.derivatives(std::vector<double>{0.2, -0.7}), Tensor<double, 3>(2, 0.0),
                                         Tensor<double, 3>(3, 0.0));
  for (double v : b.b) EXPECT_EQ(v, 0.0);
}

TEST(SecondFundamentalForm, QuadraticMapHessian) {
  const Chart c{{"x1", "x2"}};
  const SmoothMap f(c, {parse_expr("x1^2*x2")});
  const auto b = second_fundamental_form(f.derivatives(std::vector<double>{0.5, 3.0}), Tensor<double, 3>(2, 0.0),
                                         Tensor<double, 3>(1, 0.0));
  EXPECT_NEAR(b(0, 0, 0), 6.0, 1e-14);  // 2 x2
  EXPECT_NEAR(b(0, 0, 1), 1.0, 1e-14);  // 2 x1
  EXPECT_NEAR(b(0, 1, 1), 0.0, 1e-14);
}

TEST(SecondFundamentalForm, IdentityBetweenMetricsIsChristoffelDifference) {
  const auto g = load_builtin("flat-para-2");
  const auto h = load_builtin("para-surface");
  const auto gg = christoffel(g.manifold), gh = christoffel(h.manifold);
  const auto id = identity_map(g.manifold->chart());
  for (const auto& x : sample_base_points(*g.manifold, 20, 8)) {
    const auto b = second_fundamental_form(id.derivatives(x), gg.at(x), gh.at(x));
    const auto ref = gh.at(x);
    for (std::size_t k = 0; k < b.b.size(); ++k) ASSERT_NEAR(b.b[k], ref.flat()[k] - gg.at(x).flat()[k], 1e-14);
  }
}

TEST(Projection, FlatBaseTotallyGeodesicAndHarmonic) {
  for (const char* name : {"flat-para-2", "flat-para-4"}) {
    const auto s = load_builtin(name);
    const auto tb = geometry(s, 1.0);
    const auto pi = projection_map(tb);
    for (const auto& p : sample_tb_points(*s.manifold, 20, 2)) {
      const auto d = tb.base_data(p.x, p.u);
      const auto b = projection_beta_oracle(tb, pi, d.gamma, p.x, p.u);
      ASSERT_LE(max_abs(b.b), 1e-10) << name;
      ASSERT_LE(max_abs(tension_field(b, invert(tb.adapted_metric(d)))), 1e-10);
    }
  }
}

TEST(Projection, CurvedBaseMixedBlockNonzeroButHarmonic) {
  const auto s = load_builtin("para-product");
  const auto tb = geometry(s, 1.0);
  const auto pi = projection_map(tb);
  double mixed = 0.0;
  for (const auto& p : sample_tb_points(*s.manifold, 40, 2)) {
    const auto d = tb.base_data(p.x, p.u);
    const auto b = projection_beta_oracle(tb, pi, d.gamma, p.x, p.u);
    mixed = std::max(mixed, max_block(b, 4, true));
    ASSERT_LE(max_block(b, 4, false), 1e-10);
    ASSERT_LE(max_abs(tension_field(b, invert(tb.adapted_metric(d)))), 1e-9);
    const auto c = projection_beta_closed_form(d, d.gamma);
    for (std::size_t k = 0; k < b.b.size(); ++k) ASSERT_NEAR(b.b[k], c.b[k], 1e-9);
  }
  EXPECT_GT(mixed, 1e-6);
}

TEST(HarmonicPair, SameMetric) {
  const auto s = load_builtin("para-product");
  EXPECT_TRUE(harmonic_pair_check(s.manifold, s.manifold, sample_base_points(*s.manifold, 30, 1)).all_pass());
}

TEST(HarmonicPair, ConstantMultiple) {
  const auto s = load_builtin("para-product");
  const auto r = harmonic_pair_check(s.manifold, scaled(*s.manifold, 2.5), sample_base_points(*s.manifold, 30, 1));
  EXPECT_TRUE(r.all_pass());
  EXPECT_LE(r.checks[0].max_abs, 1e-10);
}

TEST(HarmonicPair, ResidualEqualsIdentityTension) {
  const auto g = load_builtin("flat-para-2");
  const auto h = load_builtin("para-surface");
  const auto gg = christoffel(g.manifold), gh = christoffel(h.manifold);
  const auto id = identity_map(g.manifold->chart());
  double size = 0.0;
  for (const auto& x : sample_base_points(*g.manifold, 100, 42)) {
    const Matrix ginv = metric_inverse_at(*g.manifold, x);
    const auto res = harmonic_pair_residual(ginv, gg.at(x), gh.at(x));
    const auto tau = tension_field(second_fundamental_form(id.derivatives(x), gg.at(x), gh.at(x)), ginv);
    for (int k = 0; k < 2; ++k) ASSERT_NEAR(res[k], tau[k], 1e-10);
    size = std::max(size, max_abs(res));
  }
  EXPECT_GT(size, 1e-3);  // the comparison is not vacuous
}

TEST(Section, PushforwardAndPullbackAgreeWithJacobian) {
  const auto s = load_builtin("para-product");
  for (double delta : {0.0, 1.0}) {
    const auto tb = geometry(s, delta);
    for (const char* name : {"parallel", "x1_d2", "mixed"}) {
      const SectionField sf(s.manifold, field(s, name));
      const auto map = section_map(tb, field(s, name));
      for (const auto& x : sample_base_points(*s.manifold, 20, 6)) {
        const auto sp = sf.at(x);
        const auto jd = map.derivatives(x);
        const auto d = tb.base_data(x, sp.xi);
        const Matrix a = section_pushforward_adapted(tb, jd, d), b = section_pushforward_closed_form(sp);
        for (std::size_t k = 0; k < a.size(); ++k) ASSERT_NEAR(a.flat()[k], b.flat()[k], 1e-9);
        const Matrix p = pullback_metric_formula(d, sp, delta), q = pullback_metric_jacobian(tb, jd);
        for (std::size_t k = 0; k < p.size(); ++k) ASSERT_NEAR(p.flat()[k], q.flat()[k], 1e-9);
      }
    }
  }
}

TEST(Section, IsometricExactlyForParallelField) {
  const auto s = load_builtin("para-product");
  const auto tb = geometry(s, 1.0);
  auto gap = [&](const char* name) {
    const SectionField sf(s.manifold, field(s, name));
    double v = 0.0;
    for (const auto& x : sample_base_points(*s.manifold, 50, 6)) {
      const auto sp = sf.at(x);
      const Matrix gb = pullback_metric_formula(tb.base_data(x, sp.xi), sp, 1.0);
      const Matrix g = s.manifold->metric_at(x);
      for (std::size_t k = 0; k < g.size(); ++k) v = std::max(v, std::abs(gb.flat()[k] - g.flat()[k]));
    }
    return v;
  };
  EXPECT_LE(gap("parallel"), 1e-10);
  EXPECT_GT(gap("x1_d2"), 1e-6);
}

TEST(Section, ParallelFieldTotallyGeodesicAndHarmonic) {
  const auto s = load_builtin("para-product");
  for (double delta : {0.0, 0.5, 2.0}) {
    const auto tb = geometry(s, delta);
    const auto xi = field(s, "parallel");
    const SectionField sf(s.manifold, xi);
    const auto map = section_map(tb, xi);
    const std::vector<double> zero(4, 0.0);
    for (const auto& x : sample_base_points(*s.manifold, 30, 7)) {
      const auto sp = sf.at(x);
      ASSERT_LE(max_abs(sp.dxi), 1e-10);
      const auto dx = tb.base_data(x, zero);
      const auto b = section_beta_oracle(tb, map, dx, tb.base_data(x, sp.xi));
      ASSERT_LE(max_abs(b.b), 1e-10);
      ASSERT_LE(max_abs(tension_field(b, dx.ginv)), 1e-10);
    }
  }
}

TEST(Section, ClosedFormsResolveToPlusSignAndNormDenominator) {
  const auto s = load_builtin("para-product");
  const auto tb = geometry(s, 1.0);
  const auto xi = field(s, "mixed");
  const SectionField sf(s.manifold, xi);
  const auto map = section_map(tb, xi);
  const std::vector<double> zero(4, 0.0);
  double best = 0.0, printed = 0.0;
  for (const auto& x : sample_base_points(*s.manifold, 30, 7)) {
    const auto sp = sf.at(x);
    const auto dx = tb.base_data(x, zero), dxi = tb.base_data(x, sp.xi);
    const auto b = section_beta_oracle(tb, map, dx, dxi);
    const auto c = section_beta_closed_form(dxi, sp, 1.0, +1.0, Denominator::kOnePlusDelta2G00);
    const auto p = section_beta_closed_form(dxi, sp, 1.0, -1.0, Denominator::kOnePlusDelta2);
    for (std::size_t k = 0; k < b.b.size(); ++k) {
      best = std::max(best, std::abs(b.b[k] - c.b[k]));
      printed = std::max(printed, std::abs(b.b[k] - p.b[k]));
    }
    const auto t = tension_field(b, dx.ginv);
    const auto tc = section_tension_closed_form(dxi, sp, 1.0, +1.0, Denominator::kOnePlusDelta2G00);
    for (int k = 0; k < 8; ++k) ASSERT_NEAR(t[k], tc[k], 1e-9);
  }
  EXPECT_LE(best, 1e-9);
  EXPECT_GT(printed, 1e-6);
}

TEST(IdentityMaps, DeltaZeroBothDirectionsHarmonic) {
  const auto s = load_builtin("para-product");
  const auto a = geometry(s, 0.0), b = geometry(s, 0.0);
  for (const auto& p : sample_tb_points(*s.manifold, 10, 4)) EXPECT_LE(max_abs(identity_tension_oracle(a, b, p.x, p.u)), 1e-12);
}

TEST(IdentityMaps, BergerToSasakiNotHarmonic) {
  const auto s = load_builtin("flat-para-2");
  for (double delta : {0.5, 1.0, 2.0}) {
    const auto bs = geometry(s, delta), sa = geometry(s, 0.0);
    double size = 0.0;
    for (const auto& p : sample_tb_points(*s.manifold, 100, 42)) {
      const auto t = identity_tension_oracle(bs, sa, p.x, p.u);
      const auto d = bs.base_data(p.x, p.u);
      const auto derived = bs_to_sasaki_tension_derived(d, delta);
      for (std::size_t k = 0; k < t.size(); ++k) ASSERT_NEAR(t[k], derived[k], 1e-9);
      size = std::max(size, max_abs(t));
    }
    EXPECT_GT(size, 1e-6) << delta;
  }
}

TEST(IdentityMaps, SasakiToBergerHarmonic) {
  const auto s = load_builtin("para-product");
  const auto bs = geometry(s, 1.0), sa = geometry(s, 0.0);
  for (const auto& p : sample_tb_points(*s.manifold, 30, 42)) ASSERT_LE(max_abs(identity_tension_oracle(sa, bs, p.x, p.u)), 1e-9);
}

TEST(IdentityToMean, FlatBaseZeroAndCurvedTraceFree) {
  for (const char* name : {"flat-para-2", "para-product"}) {
    const auto s = load_builtin(name);
    const auto tb = geometry(s, 1.0);
    double size = 0.0;
    for (const auto& p : sample_tb_points(*s.manifold, 30, 8)) {
      const auto d = tb.base_data(p.x, p.u);
      const auto o = tb.connection_oracle(p.x, p.u);
      const auto mean = mean_by_definition(svk_by_definition(o), tb.structure(p.x, p.u));
      const auto b = identity_beta_to_mean_oracle(o, mean);
      const auto c = identity_beta_to_mean_closed_form(d);
      for (std::size_t k = 0; k < b.b.size(); ++k) ASSERT_NEAR(b.b[k], c.b[k], 1e-9);
      ASSERT_LE(max_abs(tension_field(b, invert(tb.adapted_metric(d)))), 1e-9);
      size = std::max(size, max_abs(b.b));
    }
    if (std::string(name) == "flat-para-2")
      EXPECT_LE(size, 1e-10);
    else
      EXPECT_GT(size, 1e-6);
  }
}

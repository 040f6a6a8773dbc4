#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "tbg/sampling.hpp"
#include "tbg/tangent_bundle.hpp"
#include "tbg/zoo.hpp"

using namespace tbg;

namespace {

TangentBundleGeometry geometry(const std::string& builtin, double delta) {
  const auto s = load_builtin(builtin);
  return TangentBundleGeometry(s.manifold, s.phi, delta);
}

// TM metric in induced coordinates written out from ∂_i = E_i + Γ^h_{i0} E_h̄, ∂_ī = E_ī.
Matrix coord_metric_explicit(const TangentBundleGeometry& tb, const std::vector<double>& xu) {
  const int n = tb.base_dim();
  const std::vector<double> x(xu.begin(), xu.begin() + n), u(xu.begin() + n, xu.end());
  const Matrix g = tb.base().metric_at(x);
  const Matrix phi = tb.phi().at(x);
  const auto gamma = christoffel(tb.base_ptr()).at(x);
  std::vector<double> phiu(n, 0.0), w(n, 0.0);
  for (int h = 0; h < n; ++h)
    for (int k = 0; k < n; ++k) phiu[h] += phi(h, k) * u[k];
  for (int a = 0; a < n; ++a)
    for (int m = 0; m < n; ++m) w[a] += g(a, m) * phiu[m];
  Matrix v(n), c(n);
  const double d2 = tb.delta() * tb.delta();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      v(a, b) = g(a, b) + d2 * w[a] * w[b];
      for (int k = 0; k < n; ++k) c(a, b) += gamma(a, b, k) * u[k];  // Γ^a_{b0}
    }
  Matrix out(2 * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double hh = g(i, j), hv = 0.0;
      for (int a = 0; a < n; ++a) {
        hv += c(a, i) * v(a, j);
        for (int b = 0; b < n; ++b) hh += c(a, i) * c(b, j) * v(a, b);
      }
      out(i, j) = hh;
      out(i, n + j) = out(n + j, i) = hv;
      out(n + i, n + j) = v(i, j);
    }
  return out;
}

// Levi-Civita symbols of the explicit TM metric by central differences.
Tensor<double, 3> coord_christoffel_fd(const TangentBundleGeometry& tb, const std::vector<double>& xu, double h) {
  const int m = tb.dim();
  std::vector<Matrix> dg;
  for (int k = 0; k < m; ++k) {
    auto p = xu, q = xu;
    p[k] += h;
    q[k] -= h;
    const Matrix a = coord_metric_explicit(tb, p), b = coord_metric_explicit(tb, q);
    Matrix d(m);
    for (std::size_t z = 0; z < d.size(); ++z) d.flat()[z] = (a.flat()[z] - b.flat()[z]) / (2 * h);
    dg.push_back(d);
  }
  const Matrix ginv = invert(coord_metric_explicit(tb, xu));
  Tensor<double, 3> g(m, 0.0);
  for (int a = 0; a < m; ++a)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int l = 0; l < m; ++l) g(a, i, j) += 0.5 * ginv(a, l) * (dg[i](l, j) + dg[j](l, i) - dg[l](i, j));
  return g;
}

}  // namespace

TEST(InducedChart, AppendsFiberCoordinates) {
  const Chart tb = induce_tangent_chart(Chart{{"x1", "x2"}});
  EXPECT_EQ(tb.vars, (std::vector<std::string>{"x1", "x2", "u1", "u2"}));
}

TEST(InducedChart, FiberNameCollision) {
  EXPECT_THROW(induce_tangent_chart(Chart{{"u1", "x2"}}), FiberNameCollisionError);
}

TEST(AdaptedFrame, FlatBaseIsIdentity) {
  const auto tb = geometry("flat-para-2", 1.0);
  const Matrix f = tb.frame(tb.base_data(std::vector<double>{0.3, 0.4}, std::vector<double>{1.0, -0.5}));
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) EXPECT_EQ(f(a, b), a == b ? 1.0 : 0.0);
}

TEST(BergerMetric, DeltaZeroIsSasaki) {
  const auto tb = geometry("para-product", 0.0);
  const auto d = tb.base_data(std::vector<double>{0.1, -0.2, 0.3, 0.0}, std::vector<double>{0.5, 0.2, -0.7, 0.1});
  const Matrix G = tb.adapted_metric(d);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      EXPECT_EQ(G(i, j), d.g(i, j));
      EXPECT_EQ(G(4 + i, 4 + j), d.g(i, j));
      EXPECT_EQ(G(i, 4 + j), 0.0);
    }
}

TEST(BergerMetric, CoordinateFormMatchesExplicitLift) {
  for (double delta : {0.0, 0.5, 2.0}) {
    const auto tb = geometry("para-product", delta);
    for (const auto& p : sample_tb_points(tb.base(), 30, 17)) {
      const Matrix a = tb.coord_metric(p.x, p.u), b = coord_metric_explicit(tb, p.joined());
      for (std::size_t k = 0; k < a.size(); ++k) ASSERT_NEAR(a.flat()[k], b.flat()[k], 1e-12 * (1 + std::abs(b.flat()[k])));
    }
  }
}

TEST(BergerInverse, DeltaZero) {
  const auto tb = geometry("para-surface", 0.0);
  const auto d = tb.base_data(std::vector<double>{0.2, 0.5}, std::vector<double>{1.0, 0.3});
  const Matrix inv = tb.adapted_metric_inverse_closed_form(d);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      EXPECT_EQ(inv(i, j), d.ginv(i, j));
      EXPECT_EQ(inv(2 + i, 2 + j), d.ginv(i, j));
    }
}

TEST(BergerInverse, FlatSwapUnitDelta) {
  const auto tb = geometry("flat-para-2", 1.0);
  const auto d = tb.base_data(std::vector<double>{0.0, 0.0}, std::vector<double>{1.0, 0.0});
  const Matrix inv = tb.adapted_metric_inverse_closed_form(d);
  EXPECT_NEAR(inv(2, 2), 1.0, 1e-15);
  EXPECT_NEAR(inv(2, 3), 0.0, 1e-15);
  EXPECT_NEAR(inv(3, 3), 0.5, 1e-15);
  const Matrix prod = multiply(inv, tb.adapted_metric(d));
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) EXPECT_NEAR(prod(a, b), a == b ? 1.0 : 0.0, 1e-15);
}

TEST(BergerInverse, ProductWithBlockMatrixIsIdentity) {
  for (double delta : {0.5, 1.0, 2.0}) {
    const auto tb = geometry("para-product", delta);
    for (const auto& p : sample_tb_points(tb.base(), 50, 4)) {
      const auto d = tb.base_data(p.x, p.u);
      const Matrix prod = multiply(tb.adapted_metric_inverse_closed_form(d), tb.adapted_metric(d));
      for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b) ASSERT_NEAR(prod(a, b), a == b ? 1.0 : 0.0, 1e-9);
    }
  }
}

TEST(ConnectionOracle, FlatSasakiIsZero) {
  const auto tb = geometry("flat-para-4", 0.0);
  for (const auto& p : sample_tb_points(tb.base(), 10, 2)) EXPECT_LE(max_abs(tb.connection_oracle(p.x, p.u).c), 1e-15);
}

TEST(ConnectionOracle, CoordinateSymbolsMatchFiniteDifferences) {
  const auto tb = geometry("para-product", 1.0);
  for (const auto& p : sample_tb_points(tb.base(), 5, 23)) {
    const auto a = tb.coord_christoffel(p.x, p.u);
    const auto b = coord_christoffel_fd(tb, p.joined(), 1e-5);
    for (std::size_t k = 0; k < a.size(); ++k) ASSERT_NEAR(a.flat()[k], b.flat()[k], 1e-7);
  }
}

TEST(ConnectionOracle, TorsionFreeAndCompatible) {
  for (double delta : {0.0, 0.5, 1.0, 2.0}) {
    const auto tb = geometry("para-product", delta);
    for (const auto& p : sample_tb_points(tb.base(), 40, 6)) {
      const auto o = tb.connection_oracle(p.x, p.u);
      ASSERT_LE(max_abs(connection_torsion(o, tb.structure(p.x, p.u))), 1e-9);
      ASSERT_LE(max_abs(adapted_metric_compatibility(o, tb.adapted_metric_jet(p.x, p.u), tb.frame_jet(p.x, p.u))), 1e-9);
    }
  }
}

TEST(ConnectionClosedForm, LinesOneToThreeAgreeWithOracle) {
  for (double delta : {0.0, 0.5, 1.0, 2.0}) {
    const auto tb = geometry("para-product", delta);
    const int n = 4;
    for (const auto& p : sample_tb_points(tb.base(), 40, 12)) {
      const auto o = tb.connection_oracle(p.x, p.u);
      const auto c = tb.connection_closed_form(tb.base_data(p.x, p.u), Denominator::kOnePlusDelta2);
      for (int g = 0; g < 2 * n; ++g)
        for (int a = 0; a < 2 * n; ++a)
          for (int b = 0; b < 2 * n; ++b)
            if (a < n || b < n) ASSERT_NEAR(c.c(g, a, b), o.c(g, a, b), 1e-9 * (1 + std::abs(o.c(g, a, b))));
    }
  }
}

TEST(ConnectionClosedForm, LineFourResolvesToNormDenominator) {
  const auto tb = geometry("para-product", 1.0);
  double printed = 0.0, norm = 0.0;
  for (const auto& p : sample_tb_points(tb.base(), 40, 12)) {
    const auto o = tb.connection_oracle(p.x, p.u);
    const auto d = tb.base_data(p.x, p.u);
    const auto a = tb.connection_closed_form(d, Denominator::kOnePlusDelta2);
    const auto b = tb.connection_closed_form(d, Denominator::kOnePlusDelta2G00);
    for (std::size_t k = 0; k < o.c.size(); ++k) {
      printed = std::max(printed, std::abs(a.c.flat()[k] - o.c.flat()[k]));
      norm = std::max(norm, std::abs(b.c.flat()[k] - o.c.flat()[k]));
    }
  }
  EXPECT_LE(norm, 1e-9);
  EXPECT_GT(printed, 1e-3);
}

TEST(ConnectionClosedForm, DeltaContinuity) {
  const auto t0 = geometry("para-product", 0.0), t1 = geometry("para-product", 1e-6);
  for (const auto& p : sample_tb_points(t0.base(), 20, 1)) {
    const auto d = t0.base_data(p.x, p.u);
    const auto a = t0.connection_closed_form(d, Denominator::kOnePlusDelta2G00);
    const auto b = t1.connection_closed_form(d, Denominator::kOnePlusDelta2G00);
    for (std::size_t k = 0; k < a.c.size(); ++k) ASSERT_LE(std::abs(a.c.flat()[k] - b.c.flat()[k]), 1e-10);
  }
}

TEST(SvkConnection, FlatBaseEqualsLeviCivita) {
  const auto tb = geometry("flat-para-2", 1.0);
  for (const auto& p : sample_tb_points(tb.base(), 20, 3)) {
    const auto o = tb.connection_oracle(p.x, p.u);
    const auto s = svk_by_definition(o);
    for (std::size_t k = 0; k < o.c.size(); ++k) ASSERT_LE(std::abs(s.c.flat()[k] - o.c.flat()[k]), 1e-12);
  }
}

TEST(SvkConnection, PreservesSplittingAndMatchesClosedForm) {
  const auto tb = geometry("para-product", 0.5);
  const int n = 4;
  for (const auto& p : sample_tb_points(tb.base(), 20, 9)) {
    const auto s = svk_by_definition(tb.connection_oracle(p.x, p.u));
    for (int g = 0; g < 2 * n; ++g)
      for (int a = 0; a < 2 * n; ++a)
        for (int b = 0; b < 2 * n; ++b)
          if ((g < n) != (b < n)) ASSERT_EQ(s.c(g, a, b), 0.0);
    const auto c = svk_closed_form(tb, tb.base_data(p.x, p.u), Denominator::kOnePlusDelta2G00);
    for (std::size_t k = 0; k < c.c.size(); ++k) ASSERT_NEAR(c.c.flat()[k], s.c.flat()[k], 1e-9);
  }
}

TEST(MeanConnection, FlatBaseEqualsLeviCivita) {
  const auto tb = geometry("flat-para-4", 2.0);
  for (const auto& p : sample_tb_points(tb.base(), 20, 3)) {
    const auto o = tb.connection_oracle(p.x, p.u);
    const auto m = mean_by_definition(svk_by_definition(o), tb.structure(p.x, p.u));
    for (std::size_t k = 0; k < o.c.size(); ++k) ASSERT_LE(std::abs(m.c.flat()[k] - o.c.flat()[k]), 1e-10);
  }
}

TEST(MeanConnection, TorsionFreeOnCurvedBase) {
  const auto tb = geometry("para-product", 1.0);
  for (const auto& p : sample_tb_points(tb.base(), 20, 5)) {
    const auto st = tb.structure(p.x, p.u);
    const auto m = mean_by_definition(svk_by_definition(tb.connection_oracle(p.x, p.u)), st);
    ASSERT_LE(max_abs(connection_torsion(m, st)), 1e-9);
  }
}

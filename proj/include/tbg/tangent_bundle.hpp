#pragma once

#include <algorithm>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tbg/chart.hpp"
#include "tbg/para.hpp"

namespace tbg {

class FiberNameCollisionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline std::string fiber_name(int i) { return "u" + std::to_string(i + 1); }

// Chart on TM with variables (x^1..x^n, u^1..u^n).
inline Chart induce_tangent_chart(const Chart& base) {
  Chart tb = base;
  for (int i = 0; i < base.dim(); ++i) {
    const std::string u = fiber_name(i);
    if (std::find(base.vars.begin(), base.vars.end(), u) != base.vars.end())
      throw FiberNameCollisionError("base coordinate '" + u + "' collides with a fiber coordinate name; rename it");
    tb.vars.push_back(u);
  }
  return tb;
}

// Which denominator the δ²-terms carry.
enum class Denominator { kOnePlusDelta2, kOnePlusDelta2G00 };

inline const char* label(Denominator d) { return d == Denominator::kOnePlusDelta2 ? "1+delta^2" : "1+delta^2*g00"; }

// Everything about the base needed at one point (x, u) of TM.
struct BasePointData {
  int n = 0;
  std::vector<double> x, u;
  Matrix g, ginv, phi;
  Tensor<double, 3> gamma;    // Γ^h_{ij} as (h, i, j)
  Tensor<double, 4> riemann;  // R_{ijk}^h as (i, j, k, h)
  Tensor<double, 3> r0;       // R_{ij0}^h as (i, j, h)
  Tensor<double, 3> rs;       // R^h_{.j0i} as (h, j, i)
  Tensor<double, 4> rmix;     // R^h_{.jkm} = R_{ljk}^s g^{lh} g_{sm} as (h, j, k, m)
  std::vector<double> g0;     // g_{m0}
  std::vector<double> phi0;   // φ^h_0
  double g00 = 0.0;
  double phi00 = 0.0;         // g(u, φu)
};

// Connection coefficients on TM in the adapted frame: c(γ, α, β) with
// ∇_{E_α} E_β = c^γ_{αβ} E_γ, fiber indices offset by n.
struct TBConnection {
  Tensor<double, 3> c;
  std::string provenance;
};

namespace detail {

// Adapted frame, coframe, adapted metric and coordinate metric from base data
// of scalar type S (double, or jets carrying derivatives in x and u).
template <class S>
struct TBAssembly {
  Tensor<S, 2> frame, coframe, adapted, coords;
};

template <class S>
TBAssembly<S> assemble(const Tensor<S, 2>& g, const Tensor<S, 3>& gamma, const Tensor<S, 2>& phi,
                       const std::vector<S>& u, double delta) {
  const int n = g.dim();
  const int m = 2 * n;
  TBAssembly<S> a;
  a.frame = Tensor<S, 2>(m, S(0.0));
  a.coframe = Tensor<S, 2>(m, S(0.0));
  for (int i = 0; i < m; ++i) {
    a.frame(i, i) = S(1.0);
    a.coframe(i, i) = S(1.0);
  }
  for (int h = 0; h < n; ++h)
    for (int i = 0; i < n; ++i) {
      S gi0(0.0);
      for (int k = 0; k < n; ++k) gi0 = gi0 + gamma(h, i, k) * u[k];
      a.frame(n + h, i) = -gi0;   // E_i = ∂_i − Γ^h_{i0} ∂_{u^h}
      a.coframe(n + h, i) = gi0;  // δu^h = du^h + Γ^h_{i0} dx^i
    }
  // w_i = g_{m0} φ^m_i
  std::vector<S> g0(static_cast<std::size_t>(n), S(0.0)), w(static_cast<std::size_t>(n), S(0.0));
  for (int mm = 0; mm < n; ++mm)
    for (int k = 0; k < n; ++k) g0[mm] = g0[mm] + g(mm, k) * u[k];
  for (int i = 0; i < n; ++i)
    for (int mm = 0; mm < n; ++mm) w[i] = w[i] + g0[mm] * phi(mm, i);
  a.adapted = Tensor<S, 2>(m, S(0.0));
  const double d2 = delta * delta;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      a.adapted(i, j) = g(i, j);
      a.adapted(n + i, n + j) = g(i, j) + d2 * w[i] * w[j];
    }
  // coords = coframeᵀ · adapted · coframe
  Tensor<S, 2> tmp(m, S(0.0));
  for (int b = 0; b < m; ++b)
    for (int jj = 0; jj < m; ++jj) {
      S acc(0.0);
      for (int c = 0; c < m; ++c) {
        if (value_of(a.coframe(c, jj)) == 0.0 && !IsDual<S>::value) continue;
        acc = acc + a.adapted(b, c) * a.coframe(c, jj);
      }
      tmp(b, jj) = acc;
    }
  a.coords = Tensor<S, 2>(m, S(0.0));
  for (int ii = 0; ii < m; ++ii)
    for (int jj = ii; jj < m; ++jj) {
      S acc(0.0);
      for (int b = 0; b < m; ++b) acc = acc + a.coframe(b, ii) * tmp(b, jj);
      a.coords(ii, jj) = acc;
      a.coords(jj, ii) = acc;
    }
  return a;
}

}  // namespace detail

// The tangent bundle of an (anti-paraKähler) base with the Berger-type
// deformed Sasaki metric for a fixed δ. δ = 0 gives the Sasaki metric.
class TangentBundleGeometry {
 public:
  TangentBundleGeometry(std::shared_ptr<const ChartManifold> base, ParaStructure phi, double delta)
      : base_(std::move(base)), phi_(std::move(phi)), delta_(delta), tb_chart_(induce_tangent_chart(base_->chart())) {
    if (delta_ < 0.0) throw std::invalid_argument("delta must be nonnegative");
    if (phi_.dim() != base_->dim()) throw std::invalid_argument("phi does not live on the base chart");
    if (2 * base_->dim() > kMaxVars) throw std::invalid_argument("base dimension too large for the jet width");
  }

  TangentBundleGeometry with_delta(double d) const { return TangentBundleGeometry(base_, phi_, d); }

  int base_dim() const { return base_->dim(); }
  int dim() const { return 2 * base_->dim(); }
  double delta() const { return delta_; }
  const ChartManifold& base() const { return *base_; }
  const std::shared_ptr<const ChartManifold>& base_ptr() const { return base_; }
  const ParaStructure& phi() const { return phi_; }
  const Chart& tb_chart() const { return tb_chart_; }

  BasePointData base_data(std::span<const double> x, std::span<const double> u) const {
    const int n = base_dim();
    BasePointData d;
    d.n = n;
    d.x.assign(x.begin(), x.end());
    d.u.assign(u.begin(), u.end());
    base_->require_positive_definite(x);
    d.g = base_->metric_at(x);
    d.ginv = invert(d.g);
    d.phi = phi_.at(x);
    const Tensor<Dual<double>, 3> gj = christoffel_from_metric_jet<Dual<double>>(base_->metric_jet2(x));
    d.gamma = primal(gj);
    d.riemann = riemann_from_connection_jet<double>(gj);
    d.r0 = Tensor<double, 3>(n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int h = 0; h < n; ++h) {
          double acc = 0.0;
          for (int k = 0; k < n; ++k) acc += d.riemann(i, j, k, h) * u[k];
          d.r0(i, j, h) = acc;
        }
    d.rs = index_shuffle(d.riemann, d.g, d.ginv, u);
    d.rmix = raise_first_lower_last(d.riemann, d.g, d.ginv);
    d.g0.assign(static_cast<std::size_t>(n), 0.0);
    d.phi0.assign(static_cast<std::size_t>(n), 0.0);
    for (int m = 0; m < n; ++m)
      for (int k = 0; k < n; ++k) {
        d.g0[m] += d.g(m, k) * u[k];
        d.phi0[m] += d.phi(m, k) * u[k];
      }
    for (int m = 0; m < n; ++m) {
      d.g00 += d.g0[m] * u[m];
      d.phi00 += d.g0[m] * d.phi0[m];
    }
    return d;
  }

  // ---- frames -------------------------------------------------------------

  Matrix frame(const BasePointData& d) const { return assemble_values(d).frame; }
  Matrix coframe(const BasePointData& d) const { return assemble_values(d).coframe; }

  // Adapted frame with first derivatives over (x, u).
  FrameJet frame_jet(std::span<const double> x, std::span<const double> u) const { return assemble_jets(x, u).frame; }

  // ---- metrics ------------------------------------------------------------

  // Block matrix in the adapted frame: diag(g, g + δ² g_{m0} g_{n0} φ^m_i φ^n_j).
  Matrix adapted_metric(const BasePointData& d) const { return assemble_values(d).adapted; }

  // Published closed form of the inverse of the adapted metric.
  Matrix adapted_metric_inverse_closed_form(const BasePointData& d) const {
    const int n = d.n;
    Matrix inv(2 * n, 0.0);
    const double d2 = delta_ * delta_;
    const double k = d2 / (1.0 + d2 * d.g00);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        inv(i, j) = d.ginv(i, j);
        inv(n + i, n + j) = d.ginv(i, j) - k * d.phi0[i] * d.phi0[j];
      }
    return inv;
  }

  Matrix coord_metric(std::span<const double> x, std::span<const double> u) const {
    return assemble_values(base_data(x, u)).coords;
  }
  Tensor<Dual<double>, 2> coord_metric_jet(std::span<const double> x, std::span<const double> u) const {
    return assemble_jets(x, u).coords;
  }
  Tensor<Dual<double>, 2> adapted_metric_jet(std::span<const double> x, std::span<const double> u) const {
    return assemble_jets(x, u).adapted;
  }

  // Levi-Civita Christoffel symbols of the coordinate-frame metric on the 2n-chart.
  Tensor<double, 3> coord_christoffel(std::span<const double> x, std::span<const double> u) const {
    const Tensor<Dual<double>, 2> gc = coord_metric_jet(x, u);
    if (!is_positive_definite(primal(gc)))
      throw NotPositiveDefiniteError("tangent-bundle metric is not positive definite at " + format_point(x));
    return christoffel_from_metric_jet<double>(gc);
  }

  // ---- connections --------------------------------------------------------

  // Independent route: coordinate Christoffels of the 2n-chart metric moved
  // into the adapted frame. Never uses the closed forms.
  TBConnection connection_oracle(std::span<const double> x, std::span<const double> u) const {
    const auto a = assemble_jets(x, u);
    if (!is_positive_definite(primal(a.coords)))
      throw NotPositiveDefiniteError("tangent-bundle metric is not positive definite at " + format_point(x));
    return {frame_connection_coefficients(christoffel_from_metric_jet<double>(a.coords), a.frame), "oracle"};
  }

  // Published closed form of the Levi-Civita connection in the adapted frame.
  TBConnection connection_closed_form(const BasePointData& d, Denominator den) const {
    const int n = d.n;
    Tensor<double, 3> c(2 * n, 0.0);
    const double d2 = delta_ * delta_;
    const double q = d2 / (den == Denominator::kOnePlusDelta2 ? 1.0 + d2 : 1.0 + d2 * d.g00);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int h = 0; h < n; ++h) {
          // ∇_{E_i} E_j = Γ^h_{ij} E_h − ½ R_{ij0}^h E_h̄
          c(h, i, j) = d.gamma(h, i, j);
          c(n + h, i, j) = -0.5 * d.r0(i, j, h);
          // ∇_{E_ī} E_j = −½ R^h_{.j0i} E_h
          c(h, n + i, j) = -0.5 * d.rs(h, j, i);
          // ∇_{E_i} E_j̄ = −½ R^h_{.i0j} E_h + Γ^h_{ij} E_h̄
          c(h, i, n + j) = -0.5 * d.rs(h, i, j);
          c(n + h, i, n + j) = d.gamma(h, i, j);
          // ∇_{E_ī} E_j̄ = q φ^k_j φ^h_0 g_{ik} E_h̄
          double a = 0.0;
          for (int k = 0; k < n; ++k) a += d.phi(k, j) * d.g(i, k);
          c(n + h, n + i, n + j) = q * a * d.phi0[h];
        }
    return {c, std::string("closed_form[") + label(den) + "]"};
  }

  // [E_α, E_β] = c^γ_{αβ} E_γ.
  Tensor<double, 3> structure(std::span<const double> x, std::span<const double> u) const {
    return structure_functions(frame_jet(x, u));
  }

 private:
  detail::TBAssembly<double> assemble_values(const BasePointData& d) const {
    return detail::assemble<double>(d.g, d.gamma, d.phi, d.u, delta_);
  }

  detail::TBAssembly<Dual<double>> assemble_jets(std::span<const double> x, std::span<const double> u) const {
    const int n = base_dim();
    base_->require_positive_definite(x);
    const auto g2 = base_->metric_jet2(x);
    const Tensor<Dual<double>, 3> gamma = christoffel_from_metric_jet<Dual<double>>(g2);
    const Tensor<Dual<double>, 2> g = primal(g2);
    const Tensor<Dual<double>, 2> phi = phi_.jet1(x);
    std::vector<Dual<double>> uj;
    for (int k = 0; k < n; ++k) uj.push_back(Dual<double>::variable(u[k], n + k, 2 * n));
    return detail::assemble<Dual<double>>(g, gamma, phi, uj, delta_);
  }

  std::shared_ptr<const ChartManifold> base_;
  ParaStructure phi_;
  double delta_;
  Chart tb_chart_;
};

// =============================================================================
// Derived connections and their checks
// =============================================================================

inline bool is_vertical(int a, int n) { return a >= n; }

// Schouten–Van Kampen connection by definition: ∇̃_X Y = V∇_X VY + H∇_X HY.
// Frame vectors are already horizontal or vertical, so this keeps the
// component of ∇_{E_α} E_β of the same type as E_β.
inline TBConnection svk_by_definition(const TBConnection& lc) {
  const int m = lc.c.dim();
  const int n = m / 2;
  TBConnection s{Tensor<double, 3>(m, 0.0), "svk"};
  for (int g = 0; g < m; ++g)
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        if (is_vertical(g, n) == is_vertical(b, n)) s.c(g, a, b) = lc.c(g, a, b);
  return s;
}

// Published local form of the Schouten–Van Kampen connection.
inline TBConnection svk_closed_form(const TangentBundleGeometry& tb, const BasePointData& d, Denominator den) {
  const int n = d.n;
  const TBConnection lc = tb.connection_closed_form(d, den);
  TBConnection s{Tensor<double, 3>(2 * n, 0.0), std::string("svk_closed_form[") + label(den) + "]"};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int h = 0; h < n; ++h) {
        s.c(h, i, j) = d.gamma(h, i, j);
        s.c(h, n + i, j) = lc.c(h, n + i, j);
        s.c(n + h, i, n + j) = d.gamma(h, i, j);
        s.c(n + h, n + i, n + j) = lc.c(n + h, n + i, n + j);
      }
  return s;
}

// Torsion components T^γ_{αβ} of a frame connection.
inline Tensor<double, 3> connection_torsion(const TBConnection& c, const Tensor<double, 3>& structure) {
  return torsion(c.c, structure);
}

// Mean connection by definition: ∇̃ − ½T.
inline TBConnection mean_by_definition(const TBConnection& svk, const Tensor<double, 3>& structure) {
  const Tensor<double, 3> t = torsion(svk.c, structure);
  const int m = svk.c.dim();
  TBConnection r{Tensor<double, 3>(m, 0.0), "mean"};
  for (std::size_t k = 0; k < r.c.size(); ++k) r.c.flat()[k] = svk.c.flat()[k] - 0.5 * t.flat()[k];
  return r;
}

// Reading of the four-line local form of the mean connection.
//   kPrinted: line 1 equal to the SVK coefficient, line 3 equal to the
//             Levi-Civita coefficient minus ¼R.
//   kSwapped: line 1 equal to the Levi-Civita coefficient, line 3 equal to
//             the SVK coefficient minus ¼R.
enum class MeanReading { kPrinted, kSwapped };

inline const char* label(MeanReading r) { return r == MeanReading::kPrinted ? "as printed" : "lines 1 and 3 swapped"; }

inline TBConnection mean_closed_form(const TangentBundleGeometry& tb, const BasePointData& d, Denominator den,
                                     MeanReading reading) {
  const int n = d.n;
  const TBConnection lc = tb.connection_closed_form(d, den);
  const TBConnection svk = svk_closed_form(tb, d, den);
  TBConnection r{Tensor<double, 3>(2 * n, 0.0), std::string("mean_closed_form[") + label(reading) + "]"};
  const TBConnection& line1 = reading == MeanReading::kPrinted ? svk : lc;
  const TBConnection& line3 = reading == MeanReading::kPrinted ? lc : svk;
  for (int g = 0; g < 2 * n; ++g)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        r.c(g, i, j) = line1.c(g, i, j);
        r.c(g, n + i, j) = 0.5 * lc.c(g, n + i, j);
        r.c(g, i, n + j) = line3.c(g, i, n + j);
        r.c(g, n + i, n + j) = lc.c(g, n + i, n + j);
      }
  for (int h = 0; h < n; ++h)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) r.c(h, i, n + j) -= 0.25 * d.rs(h, i, j);
  return r;
}

// (∇_{E_α} G)_{βγ} = E_α(G_{βγ}) − C^δ_{αβ} G_{δγ} − C^δ_{αγ} G_{βδ}, stored as (α, β, γ).
inline Tensor<double, 3> adapted_metric_compatibility(const TBConnection& c, const Tensor<Dual<double>, 2>& adapted_jet,
                                                      const FrameJet& frame) {
  const int m = c.c.dim();
  const Matrix f = primal(frame);
  const Matrix gv = primal(adapted_jet);
  Tensor<double, 3> r(m, 0.0);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int g = 0; g < m; ++g) {
        double acc = 0.0;
        for (int A = 0; A < m; ++A) acc += f(A, a) * adapted_jet(b, g).d[A];
        for (int d = 0; d < m; ++d) acc -= c.c(d, a, b) * gv(d, g) + c.c(d, a, g) * gv(b, d);
        r(a, b, g) = acc;
      }
  return r;
}

}  // namespace tbg

#pragma once

#include <cmath>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tbg/chart.hpp"
#include "tbg/tangent_bundle.hpp"

namespace tbg {

// =============================================================================
// Maps between charts
// =============================================================================

// Value, Jacobian and Hessian of a map at a point.
struct MapDerivatives {
  int m = 0;  // source dimension
  int n = 0;  // target dimension
  std::vector<double> value, jac, hess;

  double J(int a, int i) const { return jac[static_cast<std::size_t>(a * m + i)]; }
  double H(int a, int i, int j) const { return hess[static_cast<std::size_t>((a * m + i) * m + j)]; }
};

// f^α(x^1..x^m) given by expressions in the source chart variables.
class SmoothMap {
 public:
  SmoothMap(Chart source, std::vector<Expr> components) : source_(std::move(source)) {
    for (auto& c : components) comps_.emplace_back(simplify(c), source_.vars, 2);
  }

  int source_dim() const { return source_.dim(); }
  int target_dim() const { return static_cast<int>(comps_.size()); }
  const Chart& source() const { return source_; }

  std::vector<double> image(std::span<const double> x) const {
    std::vector<double> y;
    for (const auto& c : comps_) y.push_back(c.value(x));
    return y;
  }

  MapDerivatives derivatives(std::span<const double> x) const {
    MapDerivatives d;
    d.m = source_dim();
    d.n = target_dim();
    d.value.resize(static_cast<std::size_t>(d.n));
    d.jac.resize(static_cast<std::size_t>(d.n * d.m));
    d.hess.resize(static_cast<std::size_t>(d.n * d.m * d.m));
    for (int a = 0; a < d.n; ++a) {
      const Dual<Dual<double>> j = comps_[a].jet2(x);
      d.value[a] = j.v.v;
      for (int i = 0; i < d.m; ++i) {
        d.jac[static_cast<std::size_t>(a * d.m + i)] = j.v.d[i];
        for (int k = 0; k < d.m; ++k) d.hess[static_cast<std::size_t>((a * d.m + i) * d.m + k)] = j.d[i].d[k];
      }
    }
    return d;
  }

 private:
  Chart source_;
  std::vector<JetExpr> comps_;
};

// β^γ_{ij}: source slots i, j (dimension m), target slot γ (dimension n).
struct MapHessian {
  int m = 0;
  int n = 0;
  std::vector<double> b;

  MapHessian() = default;
  MapHessian(int source, int target) : m(source), n(target), b(static_cast<std::size_t>(source * source * target), 0.0) {}

  double& operator()(int g, int i, int j) { return b[static_cast<std::size_t>((g * m + i) * m + j)]; }
  double operator()(int g, int i, int j) const { return b[static_cast<std::size_t>((g * m + i) * m + j)]; }
};

// β^γ_{ij} = ∂_i∂_j f^γ − ^MΓ^k_{ij} ∂_k f^γ + ^NΓ^γ_{αβ} ∂_i f^α ∂_j f^β.
// The target connection only needs to be torsion-free; no target metric is used.
inline MapHessian second_fundamental_form(const MapDerivatives& d, const Tensor<double, 3>& source_gamma,
                                          const Tensor<double, 3>& target_gamma) {
  MapHessian beta(d.m, d.n);
  for (int g = 0; g < d.n; ++g)
    for (int i = 0; i < d.m; ++i)
      for (int j = 0; j < d.m; ++j) {
        double acc = d.H(g, i, j);
        for (int k = 0; k < d.m; ++k) acc -= source_gamma(k, i, j) * d.J(g, k);
        for (int a = 0; a < d.n; ++a) {
          const double fa = d.J(a, i);
          if (fa == 0.0) continue;
          for (int b = 0; b < d.n; ++b) acc += target_gamma(g, a, b) * fa * d.J(b, j);
        }
        beta(g, i, j) = acc;
      }
  return beta;
}

// τ^γ = g^{ij} β^γ_{ij}.
inline std::vector<double> tension_field(const MapHessian& beta, const Matrix& source_ginv) {
  std::vector<double> tau(static_cast<std::size_t>(beta.n), 0.0);
  for (int g = 0; g < beta.n; ++g)
    for (int i = 0; i < beta.m; ++i)
      for (int j = 0; j < beta.m; ++j) tau[g] += source_ginv(i, j) * beta(g, i, j);
  return tau;
}

// β(E_α, E_β) for a source frame with frame(i, α) = E_α^i.
inline MapHessian to_source_frame(const MapHessian& beta, const Matrix& frame) {
  MapHessian out(beta.m, beta.n);
  for (int g = 0; g < beta.n; ++g)
    for (int a = 0; a < beta.m; ++a)
      for (int b = 0; b < beta.m; ++b) {
        double acc = 0.0;
        for (int i = 0; i < beta.m; ++i) {
          const double fa = frame(i, a);
          if (fa == 0.0) continue;
          for (int j = 0; j < beta.m; ++j) acc += fa * frame(j, b) * beta(g, i, j);
        }
        out(g, a, b) = acc;
      }
  return out;
}

// Target components in a frame with coframe rows θ^c: β^c = θ^c_γ β^γ.
inline MapHessian to_target_frame(const MapHessian& beta, const Matrix& coframe) {
  MapHessian out(beta.m, beta.n);
  for (int c = 0; c < beta.n; ++c)
    for (int g = 0; g < beta.n; ++g) {
      const double t = coframe(c, g);
      if (t == 0.0) continue;
      for (int i = 0; i < beta.m; ++i)
        for (int j = 0; j < beta.m; ++j) out(c, i, j) += t * beta(g, i, j);
    }
  return out;
}

inline std::vector<double> to_target_frame(const std::vector<double>& v, const Matrix& coframe) {
  std::vector<double> out(v.size(), 0.0);
  for (std::size_t c = 0; c < v.size(); ++c)
    for (std::size_t g = 0; g < v.size(); ++g) out[c] += coframe(static_cast<int>(c), static_cast<int>(g)) * v[g];
  return out;
}

inline SmoothMap identity_map(const Chart& c) {
  std::vector<Expr> comps;
  for (const auto& v : c.vars) comps.push_back(Expr::variable(v));
  return SmoothMap(c, comps);
}

// =============================================================================
// The projection π : TM → M
// =============================================================================

inline SmoothMap projection_map(const TangentBundleGeometry& tb) {
  std::vector<Expr> comps;
  for (const auto& v : tb.base().vars()) comps.push_back(Expr::variable(v));
  return SmoothMap(tb.tb_chart(), comps);
}

// β(π) with source slots in the adapted frame and target slots in ∂/∂x,
// computed from the coordinate formula with the given target connection at x.
inline MapHessian projection_beta_oracle(const TangentBundleGeometry& tb, const SmoothMap& pi,
                                         const Tensor<double, 3>& target_gamma, std::span<const double> x,
                                         std::span<const double> u) {
  std::vector<double> p(x.begin(), x.end());
  p.insert(p.end(), u.begin(), u.end());
  const MapHessian coords = second_fundamental_form(pi.derivatives(p), tb.coord_christoffel(x, u), target_gamma);
  return to_source_frame(coords, primal(tb.frame_jet(x, u)));
}

// Same quantity computed directly against the frame-expressed source
// connection: β(E_α, E_β)^h = E_α(dπ E_β)^h − C^γ_{αβ} dπ(E_γ)^h + Γ^h_{ab} dπ(E_α)^a dπ(E_β)^b.
// dπ(E_i) = ∂_i and dπ(E_ī) = 0, so the first term vanishes.
inline MapHessian projection_beta_frame_route(const TBConnection& lc, const Tensor<double, 3>& target_gamma, int n) {
  MapHessian out(2 * n, n);
  for (int h = 0; h < n; ++h)
    for (int a = 0; a < 2 * n; ++a)
      for (int b = 0; b < 2 * n; ++b) {
        double acc = -lc.c(h, a, b);
        if (a < n && b < n) acc += target_gamma(h, a, b);
        out(h, a, b) = acc;
      }
  return out;
}

// Published block form of β(π): horizontal block ^hΓ − Γ (zero when the
// target is the base itself), vertical block 0, mixed block ½ R^h_{.j0i}.
inline MapHessian projection_beta_closed_form(const BasePointData& d, const Tensor<double, 3>& target_gamma) {
  const int n = d.n;
  MapHessian out(2 * n, n);
  for (int h = 0; h < n; ++h)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        out(h, i, j) = target_gamma(h, i, j) - d.gamma(h, i, j);
        out(h, n + i, j) = 0.5 * d.rs(h, j, i);
        out(h, j, n + i) = 0.5 * d.rs(h, j, i);
      }
  return out;
}

// g^{ij}(^hΓ^k_{ij} − Γ^k_{ij}).
inline std::vector<double> harmonic_pair_residual(const Matrix& ginv, const Tensor<double, 3>& gamma_g,
                                                  const Tensor<double, 3>& gamma_h) {
  const int n = ginv.dim();
  std::vector<double> r(static_cast<std::size_t>(n), 0.0);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) r[k] += ginv(i, j) * (gamma_h(k, i, j) - gamma_g(k, i, j));
  return r;
}

// Harmonic-pair report over sample points: passes iff the residual vanishes.
inline VerificationReport harmonic_pair_check(const std::shared_ptr<const ChartManifold>& g,
                                              const std::shared_ptr<const ChartManifold>& h,
                                              const std::vector<std::vector<double>>& pts) {
  const ConnectionField cg = christoffel(g);
  const ConnectionField ch = christoffel(h);
  DeviationAccumulator acc(tol::kIdentity);
  for (const auto& x : pts) acc.add_all_zero(harmonic_pair_residual(metric_inverse_at(*g, x), cg.at(x), ch.at(x)), &x);
  VerificationReport r;
  r.add(make_identity_check("maps.eq9.harmonic_pair", "eq9", "maps", "g^ij (h-Gamma - Gamma) = 0",
                            static_cast<long>(pts.size()), acc));
  return r;
}

// =============================================================================
// Sections ξ : M → TM
// =============================================================================

// ξ and its first two covariant derivatives at base points.
struct SectionPointData {
  std::vector<double> x;
  std::vector<double> xi;
  Matrix dxi;               // ∇_i ξ^h as (i, h)
  Tensor<double, 3> ddxi;   // ∇_i ∇_j ξ^h as (i, j, h)
};

class SectionField {
 public:
  SectionField(std::shared_ptr<const ChartManifold> base, VectorField xi)
      : base_(std::move(base)), xi_(std::move(xi)), gamma_(christoffel(base_)),
        jets_(base_->chart(), vector_field_tensor(xi_), 2) {
    if (static_cast<int>(xi_.size()) != base_->dim()) throw std::invalid_argument("vector field has the wrong number of components");
  }

  const VectorField& field() const { return xi_; }

  SectionPointData at(std::span<const double> x) const {
    const int n = base_->dim();
    SectionPointData s;
    s.x.assign(x.begin(), x.end());
    s.xi = jets_.value(x).comps;
    const Tensor<Dual<double>, 3> gj = gamma_.jet_at(x);
    const TensorField<Dual<double>> first = covariant_derivative<Dual<double>>(jets_.jet2(x), gj);
    const TensorField<double> second = covariant_derivative<double>(first, primal(gj));
    s.dxi = Matrix(n, 0.0);
    s.ddxi = Tensor<double, 3>(n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int h = 0; h < n; ++h) {
        s.dxi(i, h) = first(i, h).v;
        for (int j = 0; j < n; ++j) s.ddxi(i, j, h) = second(i, j, h);
      }
    return s;
  }

 private:
  std::shared_ptr<const ChartManifold> base_;
  VectorField xi_;
  ConnectionField gamma_;
  TensorFieldJets jets_;
};

inline SmoothMap section_map(const TangentBundleGeometry& tb, const VectorField& xi) {
  std::vector<Expr> comps;
  for (const auto& v : tb.base().vars()) comps.push_back(Expr::variable(v));
  for (const auto& c : xi) comps.push_back(c);
  return SmoothMap(tb.base().chart(), comps);
}

// Adapted components of ξ_*(∂_i) at ξ(p): column i of coframe · Jacobian.
inline Matrix section_pushforward_adapted(const TangentBundleGeometry& tb, const MapDerivatives& d,
                                          const BasePointData& at_xi) {
  const int n = tb.base_dim();
  const Matrix theta = tb.coframe(at_xi);
  Matrix out(2 * n, 0.0);  // out(A, i) for i < n; remaining columns unused
  for (int a = 0; a < 2 * n; ++a)
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int b = 0; b < 2 * n; ++b) acc += theta(a, b) * d.J(b, i);
      out(a, i) = acc;
    }
  return out;
}

// Published pushforward: ^H X + ^V(∇_X ξ) in adapted components.
inline Matrix section_pushforward_closed_form(const SectionPointData& s) {
  const int n = static_cast<int>(s.x.size());
  Matrix out(2 * n, 0.0);
  for (int i = 0; i < n; ++i) {
    out(i, i) = 1.0;
    for (int h = 0; h < n; ++h) out(n + h, i) = s.dxi(i, h);
  }
  return out;
}

// ḡ_{ij} = g_{ij} + g(∇_iξ, ∇_jξ) + δ² g(∇_iξ, φξ) g(∇_jξ, φξ).
inline Matrix pullback_metric_formula(const BasePointData& d, const SectionPointData& s, double delta) {
  const int n = d.n;
  std::vector<double> w(static_cast<std::size_t>(n), 0.0);  // g(∇_iξ, φξ)
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) w[i] += s.dxi(i, a) * d.g(a, b) * d.phi0[b];
  Matrix out(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double acc = d.g(i, j) + delta * delta * w[i] * w[j];
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) acc += s.dxi(i, a) * d.g(a, b) * s.dxi(j, b);
      out(i, j) = acc;
    }
  return out;
}

// Literal pullback Jᵀ g_coords(ξ(p)) J.
inline Matrix pullback_metric_jacobian(const TangentBundleGeometry& tb, const MapDerivatives& d) {
  const int n = tb.base_dim();
  std::vector<double> x(d.value.begin(), d.value.begin() + n), u(d.value.begin() + n, d.value.end());
  const Matrix gc = tb.coord_metric(x, u);
  Matrix out(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int a = 0; a < 2 * n; ++a)
        for (int b = 0; b < 2 * n; ++b) acc += d.J(a, i) * gc(a, b) * d.J(b, j);
      out(i, j) = acc;
    }
  return out;
}

// β(ξ) from the coordinate formula with target components in the adapted frame at ξ(p).
inline MapHessian section_beta_oracle(const TangentBundleGeometry& tb, const SmoothMap& map, const BasePointData& base_at_x,
                                      const BasePointData& at_xi) {
  const MapDerivatives d = map.derivatives(base_at_x.x);
  const MapHessian coords = second_fundamental_form(d, base_at_x.gamma, tb.coord_christoffel(at_xi.x, at_xi.u));
  return to_target_frame(coords, tb.coframe(at_xi));
}

// Published closed form of β(ξ). `horizontal_sign` multiplies ½{...} in the
// horizontal part (the published form carries −1); `den` is the denominator of
// the A-term. Base data must be evaluated with u = ξ(p).
inline MapHessian section_beta_closed_form(const BasePointData& d, const SectionPointData& s, double delta,
                                           double horizontal_sign, Denominator den) {
  const int n = d.n;
  const double d2 = delta * delta;
  const double q = d2 / (den == Denominator::kOnePlusDelta2 ? 1.0 + d2 : 1.0 + d2 * d.g00);
  // rx(h, i, k) = R^h_{.ikm} ξ^m
  Tensor<double, 3> rx(n, 0.0);
  for (int h = 0; h < n; ++h)
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        double acc = 0.0;
        for (int m = 0; m < n; ++m) acc += d.rmix(h, i, k, m) * s.xi[m];
        rx(h, i, k) = acc;
      }
  // A^h_{mn} = q φ^k_n φ^h_0 g_{mk}
  Tensor<double, 3> A(n, 0.0);
  for (int h = 0; h < n; ++h)
    for (int m = 0; m < n; ++m)
      for (int nn = 0; nn < n; ++nn) {
        double acc = 0.0;
        for (int k = 0; k < n; ++k) acc += d.phi(k, nn) * d.g(m, k);
        A(h, m, nn) = q * acc * d.phi0[h];
      }
  MapHessian out(n, 2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int h = 0; h < n; ++h) {
        double hz = 0.0;
        for (int k = 0; k < n; ++k) hz += s.dxi(j, k) * rx(h, i, k) + s.dxi(i, k) * rx(h, j, k);
        out(h, i, j) = horizontal_sign * 0.5 * hz;
        double vt = s.ddxi(i, j, h);
        for (int m = 0; m < n; ++m) {
          vt -= 0.5 * d.riemann(i, j, m, h) * s.xi[m];
          for (int nn = 0; nn < n; ++nn) vt += s.dxi(i, m) * s.dxi(j, nn) * A(h, m, nn);
        }
        out(n + h, i, j) = vt;
      }
  return out;
}

// Published closed form of τ(ξ): horizontal part `horizontal_sign`·g^{ij}(∇_jξ^k) R^h_{.ikm} ξ^m
// (published sign +1), vertical part g^{ij}∇_i∇_jξ^h + g^{ij}(∇_iξ^m)(∇_jξ^n) A^h_{mn}.
inline std::vector<double> section_tension_closed_form(const BasePointData& d, const SectionPointData& s, double delta,
                                                       double horizontal_sign, Denominator den) {
  const int n = d.n;
  const double d2 = delta * delta;
  const double q = d2 / (den == Denominator::kOnePlusDelta2 ? 1.0 + d2 : 1.0 + d2 * d.g00);
  std::vector<double> tau(static_cast<std::size_t>(2 * n), 0.0);
  for (int h = 0; h < n; ++h) {
    double hz = 0.0, vt = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double gij = d.ginv(i, j);
        if (gij == 0.0) continue;
        for (int k = 0; k < n; ++k)
          for (int m = 0; m < n; ++m) hz += gij * s.dxi(j, k) * d.rmix(h, i, k, m) * s.xi[m];
        vt += gij * s.ddxi(i, j, h);
        for (int m = 0; m < n; ++m)
          for (int nn = 0; nn < n; ++nn) {
            double a = 0.0;
            for (int k = 0; k < n; ++k) a += d.phi(k, nn) * d.g(m, k);
            vt += gij * s.dxi(i, m) * s.dxi(j, nn) * q * a * d.phi0[h];
          }
      }
    tau[h] = horizontal_sign * hz;
    tau[n + h] = vt;
  }
  return tau;
}

// =============================================================================
// Identity maps of TM
// =============================================================================

// τ of I : (TM, source) → (TM, target) in the adapted frame, from the coordinate
// formula: τ^γ = G_src^{AB} (^tΓ^γ_{AB} − ^sΓ^γ_{AB}).
inline std::vector<double> identity_tension_oracle(const TangentBundleGeometry& source, const TangentBundleGeometry& target,
                                                   std::span<const double> x, std::span<const double> u) {
  const int m = source.dim();
  const Matrix ginv = invert(source.coord_metric(x, u));
  const Tensor<double, 3> gs = source.coord_christoffel(x, u);
  const Tensor<double, 3> gt = target.coord_christoffel(x, u);
  std::vector<double> tau(static_cast<std::size_t>(m), 0.0);
  for (int g = 0; g < m; ++g)
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) tau[g] += ginv(a, b) * (gt(g, a, b) - gs(g, a, b));
  return to_target_frame(tau, source.coframe(source.base_data(x, u)));
}

// β of the identity between two metrics on TM, adapted frame on both sides.
inline MapHessian identity_beta_oracle(const TangentBundleGeometry& source, const TangentBundleGeometry& target,
                                       std::span<const double> x, std::span<const double> u) {
  const TBConnection a = source.connection_oracle(x, u);
  const TBConnection b = target.connection_oracle(x, u);
  const int m = source.dim();
  MapHessian out(m, m);
  for (int g = 0; g < m; ++g)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) out(g, i, j) = b.c(g, i, j) - a.c(g, i, j);
  return out;
}

// Published vertical components of τ for I:(TM, g_BS) → (TM, g_S), with the
// (1+δ²) factors replaced by `den` and "n" set to `n_value`.
inline std::vector<double> bs_to_sasaki_tension_closed_form(const BasePointData& d, double delta, Denominator den,
                                                            double n_value) {
  const int n = d.n;
  const double d2 = delta * delta;
  const double D = den == Denominator::kOnePlusDelta2 ? 1.0 + d2 : 1.0 + d2 * d.g00;
  std::vector<double> tau(static_cast<std::size_t>(2 * n), 0.0);
  for (int h = 0; h < n; ++h)
    tau[n + h] = -d2 * n_value / D * d.phi0[h] + d2 * d2 * d.g00 * d.u[h] / (D * (1.0 + d2 * d.g00));
  return tau;
}

// Value obtained from the connection difference: δ⁴ g(u, φu) / (1+δ²g00)² φ^h_0.
inline std::vector<double> bs_to_sasaki_tension_derived(const BasePointData& d, double delta) {
  const int n = d.n;
  const double d2 = delta * delta;
  const double D = 1.0 + d2 * d.g00;
  std::vector<double> tau(static_cast<std::size_t>(2 * n), 0.0);
  for (int h = 0; h < n; ++h) tau[n + h] = d2 * d2 * d.phi00 / (D * D) * d.phi0[h];
  return tau;
}

// Published vertical components of τ for I:(TM, g_S) → (TM, g_BS).
inline std::vector<double> sasaki_to_bs_tension_closed_form(const BasePointData& d, double delta, Denominator den,
                                                            double n_value) {
  const int n = d.n;
  const double d2 = delta * delta;
  const double D = den == Denominator::kOnePlusDelta2 ? 1.0 + d2 : 1.0 + d2 * d.g00;
  std::vector<double> tau(static_cast<std::size_t>(2 * n), 0.0);
  for (int h = 0; h < n; ++h) tau[n + h] = d2 * n_value / D * d.phi0[h];
  return tau;
}

// The δ²-part of the Levi-Civita connection is g_BS-trace free (trace φ = 0),
// so the tension of I:(TM, g_S) → (TM, g_BS) vanishes identically.
inline std::vector<double> sasaki_to_bs_tension_derived(const BasePointData& d) {
  return std::vector<double>(static_cast<std::size_t>(2 * d.n), 0.0);
}

// β(I) for I:(TM, g_BS) → (TM, mean connection) as a connection difference.
inline MapHessian identity_beta_to_mean_oracle(const TBConnection& lc, const TBConnection& mean) {
  const int m = lc.c.dim();
  MapHessian out(m, m);
  for (int g = 0; g < m; ++g)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) out(g, i, j) = mean.c(g, i, j) - lc.c(g, i, j);
  return out;
}

// Published closed form: zero on the pure blocks, ¼ R^h_{.j0i} E_h on (E_ī, E_j)
// and, by symmetry of β, ¼ R^h_{.i0j} E_h on (E_i, E_j̄).
inline MapHessian identity_beta_to_mean_closed_form(const BasePointData& d) {
  const int n = d.n;
  MapHessian out(2 * n, 2 * n);
  for (int h = 0; h < n; ++h)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        out(h, n + i, j) = 0.25 * d.rs(h, j, i);
        out(h, i, n + j) = 0.25 * d.rs(h, i, j);
      }
  return out;
}

}  // namespace tbg

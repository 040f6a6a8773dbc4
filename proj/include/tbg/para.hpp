#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tbg/chart.hpp"
#include "tbg/report.hpp"

namespace tbg {

class OddDimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A (1,1)-tensor field phi(i, j) = φ^i_j (row = upper index) on a chart.
class ParaStructure {
 public:
  ParaStructure() = default;
  ParaStructure(const Chart& chart, const Tensor<Expr, 2>& phi) : chart_(chart), phi_(phi.dim()) {
    if (phi.dim() != chart.dim()) throw std::invalid_argument("phi size does not match chart dimension");
    jets_ = Tensor<JetExpr, 2>(phi.dim());
    for (int i = 0; i < phi.dim(); ++i)
      for (int j = 0; j < phi.dim(); ++j) {
        phi_(i, j) = simplify(phi(i, j));
        jets_(i, j) = JetExpr(phi_(i, j), chart.vars, 1);
      }
  }

  // Block swap of the two halves of R^{2k}: φ(∂_a) = ∂_{a+k}, φ(∂_{a+k}) = ∂_a.
  static ParaStructure block_swap(const Chart& chart) {
    const int n = chart.dim();
    if (n % 2 != 0) throw OddDimensionError("block swap structure needs an even dimension");
    Tensor<Expr, 2> phi(n, Expr(0.0));
    for (int a = 0; a < n / 2; ++a) {
      phi(a, a + n / 2) = Expr(1.0);
      phi(a + n / 2, a) = Expr(1.0);
    }
    return ParaStructure(chart, phi);
  }

  int dim() const { return phi_.dim(); }
  const Chart& chart() const { return chart_; }
  const Expr& component(int i, int j) const { return phi_(i, j); }
  const Tensor<Expr, 2>& components() const { return phi_; }

  Matrix at(std::span<const double> x) const {
    Matrix m(dim());
    for (int i = 0; i < dim(); ++i)
      for (int j = 0; j < dim(); ++j) m(i, j) = jets_(i, j).value(x);
    return m;
  }
  Tensor<Dual<double>, 2> jet1(std::span<const double> x) const {
    Tensor<Dual<double>, 2> m(dim());
    for (int i = 0; i < dim(); ++i)
      for (int j = 0; j < dim(); ++j) m(i, j) = jets_(i, j).jet1(x);
    return m;
  }

  TensorField<Expr> as_tensor() const {
    TensorField<Expr> t(dim(), {Slot::kUp, Slot::kDown});
    t.comps = phi_.flat();
    return t;
  }

  // (φX)^h = φ^h_j X^j
  VectorField apply(const VectorField& x) const {
    VectorField out(static_cast<std::size_t>(dim()), Expr(0.0));
    for (int h = 0; h < dim(); ++h) {
      Expr acc(0.0);
      for (int j = 0; j < dim(); ++j) acc = acc + phi_(h, j) * x[j];
      out[h] = simplify(acc);
    }
    return out;
  }

 private:
  Chart chart_;
  Tensor<Expr, 2> phi_;
  Tensor<JetExpr, 2> jets_;
};

inline VectorField coordinate_field(int n, int k) {
  VectorField v(static_cast<std::size_t>(n), Expr(0.0));
  v[k] = Expr(1.0);
  return v;
}

// N_φ(X,Y) = [φX, φY] − φ[φX, Y] − φ[X, φY] + [X, Y]
inline VectorField nijenhuis(const ParaStructure& phi, const VectorField& x, const VectorField& y) {
  const Chart& c = phi.chart();
  const VectorField px = phi.apply(x);
  const VectorField py = phi.apply(y);
  const VectorField a = lie_bracket(c, px, py);
  const VectorField b = phi.apply(lie_bracket(c, px, y));
  const VectorField d = phi.apply(lie_bracket(c, x, py));
  const VectorField e = lie_bracket(c, x, y);
  VectorField out(a.size(), Expr(0.0));
  for (std::size_t h = 0; h < a.size(); ++h) out[h] = simplify(a[h] - b[h] - d[h] + e[h]);
  return out;
}

inline std::vector<double> evaluate_field(const Chart& c, const VectorField& v, std::span<const double> x) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& e : v) out.push_back(evaluate(e, c.vars, x));
  return out;
}

// =============================================================================
// Admission checks
// =============================================================================

// φ² = I and trace φ = 0.
inline VerificationReport check_almost_paracomplex(const ParaStructure& phi, const std::vector<std::vector<double>>& pts) {
  const int n = phi.dim();
  if (n % 2 != 0) throw OddDimensionError("almost paracomplex structures need an even dimension, got " + std::to_string(n));
  DeviationAccumulator square(tol::kExact), trace(tol::kExact);
  for (const auto& x : pts) {
    const Matrix p = phi.at(x);
    const Matrix p2 = multiply(p, p);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) square.add(p2(i, j), i == j ? 1.0 : 0.0, &x);
    double tr = 0.0;
    for (int i = 0; i < n; ++i) tr += p(i, i);
    trace.add_zero(tr, &x);
  }
  VerificationReport r;
  const long np = static_cast<long>(pts.size());
  r.add(make_identity_check("admission.paracomplex.square", "", "admission", "phi^2 = identity", np, square));
  r.add(make_identity_check("admission.paracomplex.trace", "", "admission", "trace phi = 0", np, trace));
  return r;
}

// g(φX, φY) = g(X, Y) and g(φX, Y) = g(X, φY) on coordinate pairs.
inline VerificationReport check_anti_para_hermitian(const ChartManifold& m, const ParaStructure& phi,
                                                    const std::vector<std::vector<double>>& pts) {
  const int n = m.dim();
  DeviationAccumulator invariance(tol::kExact), symmetry(tol::kExact);
  for (const auto& x : pts) {
    const Matrix g = m.metric_at(x);
    const Matrix p = phi.at(x);
    const Matrix ptgp = multiply(transpose(p), multiply(g, p));
    const Matrix ptg = multiply(transpose(p), g);
    const Matrix gp = multiply(g, p);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        invariance.add(ptgp(i, j), g(i, j), &x);
        symmetry.add(ptg(i, j), gp(i, j), &x);
      }
  }
  VerificationReport r;
  const long np = static_cast<long>(pts.size());
  r.add(make_identity_check("admission.hermitian.invariance", "", "admission", "g(phi X, phi Y) = g(X, Y)", np, invariance));
  r.add(make_identity_check("admission.hermitian.symmetry", "", "admission", "g(phi X, Y) = g(X, phi Y)", np, symmetry));
  return r;
}

// ∇φ = 0 for the Levi-Civita connection of g, plus the implied vanishing of N_φ.
inline VerificationReport check_anti_para_kahler(const std::shared_ptr<const ChartManifold>& m, const ParaStructure& phi,
                                                 const std::vector<std::vector<double>>& pts) {
  const int n = m->dim();
  const ConnectionField gamma = christoffel(m);
  const TensorFieldJets jets(m->chart(), phi.as_tensor(), 1);
  std::vector<std::vector<VectorField>> nij(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      nij[a].push_back(nijenhuis(phi, coordinate_field(n, a), coordinate_field(n, b)));

  DeviationAccumulator parallel(tol::kIdentity), integrable(tol::kIdentity);
  for (const auto& x : pts) {
    const TensorField<double> dphi = covariant_derivative<double>(jets.jet1(x), gamma.at(x));
    parallel.add_all_zero(dphi.comps, &x);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) integrable.add_all_zero(evaluate_field(m->chart(), nij[a][b], x), &x);
  }
  VerificationReport r;
  const long np = static_cast<long>(pts.size());
  r.add(make_identity_check("admission.kahler.parallel", "", "admission", "nabla phi = 0 (Levi-Civita)", np, parallel));
  r.add(make_identity_check("admission.kahler.nijenhuis", "", "admission", "N_phi = 0 on coordinate pairs", np, integrable));
  return r;
}

struct AdmissionResult {
  std::vector<CheckRecord> checks;
  bool paracomplex = false;
  bool hermitian = false;
  bool kahler = false;
  bool admitted() const { return paracomplex && hermitian && kahler; }
};

// Runs the hierarchy in order; a failed level gates the levels above it.
inline AdmissionResult run_admission(const std::shared_ptr<const ChartManifold>& m, const ParaStructure& phi,
                                     const std::vector<std::vector<double>>& pts) {
  AdmissionResult a;
  auto take = [&a](const VerificationReport& r) {
    for (const auto& c : r.checks) a.checks.push_back(c);
    return r.all_pass();
  };
  auto skipped = [&a, &pts](const std::string& id, const std::string& what) {
    CheckRecord c;
    c.id = id;
    c.suite = "admission";
    c.description = what;
    c.points = static_cast<long>(pts.size());
    c.pass = false;
    c.verdict = "not run: lower admission level failed";
    a.checks.push_back(c);
  };
  a.paracomplex = take(check_almost_paracomplex(phi, pts));
  if (a.paracomplex)
    a.hermitian = take(check_anti_para_hermitian(*m, phi, pts));
  else
    skipped("admission.hermitian", "anti-paraHermitian conditions");
  if (a.hermitian)
    a.kahler = take(check_anti_para_kahler(m, phi, pts));
  else
    skipped("admission.kahler", "anti-paraKahler conditions");
  return a;
}

}  // namespace tbg

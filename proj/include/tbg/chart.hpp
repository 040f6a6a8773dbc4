#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tbg/dual.hpp"
#include "tbg/expr.hpp"
#include "tbg/jet.hpp"
#include "tbg/tensor.hpp"

namespace tbg {

// =============================================================================
// Charts and fields
// =============================================================================

struct Chart {
  std::vector<std::string> vars;
  int dim() const { return static_cast<int>(vars.size()); }
};

enum class Slot { kUp, kDown };

// Tensor field components with a runtime variance signature. Components are
// stored row-major over the slots; every slot ranges over 0..n-1.
template <class T>
struct TensorField {
  int n = 0;
  std::vector<Slot> slots;
  std::vector<T> comps;

  TensorField() = default;
  TensorField(int dim, std::vector<Slot> s, const T& fill = T{}) : n(dim), slots(std::move(s)) {
    std::size_t count = 1;
    for (std::size_t r = 0; r < slots.size(); ++r) count *= static_cast<std::size_t>(n);
    comps.assign(count, fill);
  }

  int rank() const { return static_cast<int>(slots.size()); }

  std::size_t offset(std::span<const int> idx) const {
    if (static_cast<int>(idx.size()) != rank()) throw std::out_of_range("tensor index rank mismatch");
    std::size_t off = 0;
    for (int k : idx) {
      if (k < 0 || k >= n) throw std::out_of_range("tensor index out of range");
      off = off * static_cast<std::size_t>(n) + static_cast<std::size_t>(k);
    }
    return off;
  }
  template <class... I>
  T& operator()(I... idx) {
    const int a[] = {static_cast<int>(idx)...};
    return comps[offset(a)];
  }
  template <class... I>
  const T& operator()(I... idx) const {
    const int a[] = {static_cast<int>(idx)...};
    return comps[offset(a)];
  }

  // Multi-index of a flat offset.
  std::vector<int> unflatten(std::size_t off) const {
    std::vector<int> idx(slots.size());
    for (int r = rank() - 1; r >= 0; --r) {
      idx[r] = static_cast<int>(off % static_cast<std::size_t>(n));
      off /= static_cast<std::size_t>(n);
    }
    return idx;
  }
};

using VectorField = std::vector<Expr>;

class NotPositiveDefiniteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string format_point(std::span<const double> x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x[i]);
    if (i) s += ", ";
    s += buf;
  }
  return s + ")";
}

// Cholesky factorization success is the positive-definiteness test.
inline bool is_positive_definite(const Matrix& a) {
  const int n = a.dim();
  Matrix l(n, 0.0);
  for (int j = 0; j < n; ++j) {
    double d = a(j, j);
    for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0)) return false;
    l(j, j) = std::sqrt(d);
    for (int i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return true;
}

// =============================================================================
// ChartManifold
// =============================================================================

// A single coordinate chart carrying a Riemannian metric given by expressions.
// Symbolic first and second derivatives of every metric component are built
// once at construction.
class ChartManifold {
 public:
  ChartManifold(std::vector<std::string> vars, const Tensor<Expr, 2>& metric) : chart_{std::move(vars)} {
    const int n = chart_.dim();
    if (n <= 0) throw std::invalid_argument("chart dimension must be positive");
    if (metric.dim() != n) throw std::invalid_argument("metric size does not match chart dimension");
    if (n * 2 > kMaxVars) throw std::invalid_argument("chart dimension exceeds the supported maximum");
    metric_ = Tensor<JetExpr, 2>(n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        metric_(i, j) = JetExpr(simplify(metric(i, j)), chart_.vars, 2);
        metric_(j, i) = metric_(i, j);
      }
  }

  // Upper triangle given row by row: rows[i] holds g_{i,i..n-1}.
  static ChartManifold from_upper(std::vector<std::string> vars, const std::vector<std::vector<Expr>>& rows) {
    const int n = static_cast<int>(vars.size());
    if (static_cast<int>(rows.size()) != n) throw std::invalid_argument("metric must have one upper-triangle row per coordinate");
    Tensor<Expr, 2> g(n);
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(rows[i].size()) != n - i)
        throw std::invalid_argument("metric upper-triangle row " + std::to_string(i + 1) + " must have " +
                                    std::to_string(n - i) + " entries");
      for (int j = i; j < n; ++j) {
        g(i, j) = rows[i][j - i];
        g(j, i) = rows[i][j - i];
      }
    }
    return ChartManifold(std::move(vars), g);
  }

  int dim() const { return chart_.dim(); }
  const Chart& chart() const { return chart_; }
  const std::vector<std::string>& vars() const { return chart_.vars; }
  const Expr& metric(int i, int j) const { return metric_(i, j).expr(); }
  const JetExpr& metric_jet(int i, int j) const { return metric_(i, j); }

  Matrix metric_at(std::span<const double> x) const {
    Matrix g(dim());
    for (int i = 0; i < dim(); ++i)
      for (int j = i; j < dim(); ++j) g(j, i) = g(i, j) = metric_(i, j).value(x);
    return g;
  }
  Tensor<Dual<double>, 2> metric_jet1(std::span<const double> x) const {
    Tensor<Dual<double>, 2> g(dim());
    for (int i = 0; i < dim(); ++i)
      for (int j = i; j < dim(); ++j) g(j, i) = g(i, j) = metric_(i, j).jet1(x);
    return g;
  }
  Tensor<Dual<Dual<double>>, 2> metric_jet2(std::span<const double> x) const {
    Tensor<Dual<Dual<double>>, 2> g(dim());
    for (int i = 0; i < dim(); ++i)
      for (int j = i; j < dim(); ++j) g(j, i) = g(i, j) = metric_(i, j).jet2(x);
    return g;
  }

  void require_positive_definite(std::span<const double> x) const {
    if (!is_positive_definite(metric_at(x)))
      throw NotPositiveDefiniteError("metric is not positive definite at " + format_point(x));
  }

 private:
  Chart chart_;
  Tensor<JetExpr, 2> metric_;
};

inline Matrix metric_inverse_at(const ChartManifold& m, std::span<const double> x) {
  m.require_positive_definite(x);
  return invert(m.metric_at(x));
}

// =============================================================================
// Connections
// =============================================================================

// Levi-Civita coefficients from a metric jet: Γ^h_{ij} = ½ g^{hs}(∂_i g_{sj} + ∂_j g_{si} − ∂_s g_{ij}).
// With S = double the jet needs first derivatives; with S = Dual<double> it
// needs second derivatives and the result carries ∂Γ.
template <class S>
Tensor<S, 3> christoffel_from_metric_jet(const Tensor<Dual<S>, 2>& g) {
  const int n = g.dim();
  const Tensor<S, 2> ginv = invert(primal(g));
  Tensor<S, 3> first(n, S(0.0));
  for (int s = 0; s < n; ++s)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        S v = (g(s, j).d[i] + g(s, i).d[j] - g(i, j).d[s]) * 0.5;
        first(s, i, j) = v;
        first(s, j, i) = v;
      }
  Tensor<S, 3> gamma(n, S(0.0));
  for (int h = 0; h < n; ++h)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        S acc(0.0);
        for (int s = 0; s < n; ++s) acc = acc + ginv(h, s) * first(s, i, j);
        gamma(h, i, j) = acc;
        gamma(h, j, i) = acc;
      }
  return gamma;
}

enum class FrameKind { kCoordinate, kAnholonomic };

// Connection coefficients Γ^h_{ij} stored as gamma(h, i, j), evaluated at points.
// The optional jet evaluator also returns first derivatives, which curvature
// and second covariant derivatives need.
class ConnectionField {
 public:
  using ValueFn = std::function<Tensor<double, 3>(std::span<const double>)>;
  using JetFn = std::function<Tensor<Dual<double>, 3>(std::span<const double>)>;

  ConnectionField(int dim, ValueFn values, JetFn jets = {}, FrameKind frame = FrameKind::kCoordinate,
                  bool symmetric_lower = true)
      : dim_(dim), values_(std::move(values)), jets_(std::move(jets)), frame_(frame), symmetric_(symmetric_lower) {}

  // Explicit coefficient expressions on a chart.
  static ConnectionField from_exprs(const Chart& chart, const Tensor<Expr, 3>& coeffs, bool symmetric_lower) {
    auto table = std::make_shared<std::vector<JetExpr>>();
    for (const auto& e : coeffs.flat()) table->emplace_back(simplify(e), chart.vars, 1);
    const int n = chart.dim();
    ValueFn values = [table, n](std::span<const double> x) {
      Tensor<double, 3> g(n);
      for (std::size_t k = 0; k < table->size(); ++k) g.flat()[k] = (*table)[k].value(x);
      return g;
    };
    JetFn jets = [table, n](std::span<const double> x) {
      Tensor<Dual<double>, 3> g(n);
      for (std::size_t k = 0; k < table->size(); ++k) g.flat()[k] = (*table)[k].jet1(x);
      return g;
    };
    return ConnectionField(n, std::move(values), std::move(jets), FrameKind::kCoordinate, symmetric_lower);
  }

  int dim() const { return dim_; }
  FrameKind frame() const { return frame_; }
  bool symmetric_lower() const { return symmetric_; }
  bool has_jet() const { return static_cast<bool>(jets_); }

  Tensor<double, 3> at(std::span<const double> x) const { return values_(x); }
  Tensor<Dual<double>, 3> jet_at(std::span<const double> x) const {
    if (!jets_) throw std::logic_error("connection does not provide derivatives");
    return jets_(x);
  }

 private:
  int dim_;
  ValueFn values_;
  JetFn jets_;
  FrameKind frame_;
  bool symmetric_;
};

// Levi-Civita connection of a chart metric. The inverse metric is formed
// numerically at each query point; only metric derivatives are symbolic.
inline ConnectionField christoffel(std::shared_ptr<const ChartManifold> m) {
  const int n = m->dim();
  ConnectionField::ValueFn values = [m](std::span<const double> x) {
    m->require_positive_definite(x);
    return christoffel_from_metric_jet<double>(m->metric_jet1(x));
  };
  ConnectionField::JetFn jets = [m](std::span<const double> x) {
    m->require_positive_definite(x);
    return christoffel_from_metric_jet<Dual<double>>(m->metric_jet2(x));
  };
  return ConnectionField(n, std::move(values), std::move(jets), FrameKind::kCoordinate, true);
}

// =============================================================================
// Curvature
// =============================================================================

// R_{ijk}^h = ∂_i Γ^h_{jk} − ∂_j Γ^h_{ik} + Γ^h_{is} Γ^s_{jk} − Γ^h_{js} Γ^s_{ik},
// i.e. R(∂_i, ∂_j)∂_k = R_{ijk}^h ∂_h with R(X,Y) = [∇_X, ∇_Y] − ∇_[X,Y].
// Stored as r(i, j, k, h).
template <class S>
Tensor<S, 4> riemann_from_connection_jet(const Tensor<Dual<S>, 3>& gamma) {
  const int n = gamma.dim();
  Tensor<S, 4> r(n, S(0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      for (int k = 0; k < n; ++k)
        for (int h = 0; h < n; ++h) {
          S acc = gamma(h, j, k).d[i] - gamma(h, i, k).d[j];
          for (int s = 0; s < n; ++s)
            acc = acc + gamma(h, i, s).v * gamma(s, j, k).v - gamma(h, j, s).v * gamma(s, i, k).v;
          r(i, j, k, h) = acc;
        }
    }
  return r;
}

class CurvatureField {
 public:
  explicit CurvatureField(ConnectionField gamma) : gamma_(std::move(gamma)) {
    if (gamma_.frame() != FrameKind::kCoordinate) throw std::invalid_argument("curvature requires a coordinate-frame connection");
    if (!gamma_.has_jet()) throw std::invalid_argument("curvature requires connection derivatives");
  }
  int dim() const { return gamma_.dim(); }
  Tensor<double, 4> at(std::span<const double> x) const { return riemann_from_connection_jet<double>(gamma_.jet_at(x)); }

 private:
  ConnectionField gamma_;
};

inline CurvatureField riemann(const ChartManifold& /*m*/, const ConnectionField& gamma) { return CurvatureField(gamma); }

// R_{ij} = R_{kij}^k and scalar curvature g^{ij} R_{ij}.
inline double scalar_curvature(const Tensor<double, 4>& r, const Matrix& ginv) {
  const int n = r.dim();
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double ric = 0.0;
      for (int k = 0; k < n; ++k) ric += r(k, i, j, k);
      s += ginv(i, j) * ric;
    }
  return s;
}

// K(h, j, k, i) = R_{ljk}^s g^{lh} g_{si}: first slot raised, last slot lowered.
inline Tensor<double, 4> raise_first_lower_last(const Tensor<double, 4>& r, const Matrix& g, const Matrix& ginv) {
  const int n = r.dim();
  Tensor<double, 4> tmp(n, 0.0);  // tmp(l, j, k, i) = R_{ljk}^s g_{si}
  for (int l = 0; l < n; ++l)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) {
          double acc = 0.0;
          for (int s = 0; s < n; ++s) acc += r(l, j, k, s) * g(s, i);
          tmp(l, j, k, i) = acc;
        }
  Tensor<double, 4> out(n, 0.0);
  for (int h = 0; h < n; ++h)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) {
          double acc = 0.0;
          for (int l = 0; l < n; ++l) acc += ginv(l, h) * tmp(l, j, k, i);
          out(h, j, k, i) = acc;
        }
  return out;
}

// R^h_{.j0i} = R_{lj0}^s g^{lh} g_{si}, the third slot contracted with the
// fiber coordinates u. Stored as out(h, j, i).
inline Tensor<double, 3> index_shuffle(const Tensor<double, 4>& r, const Matrix& g, const Matrix& ginv,
                                       std::span<const double> u) {
  const int n = r.dim();
  const Tensor<double, 4> k4 = raise_first_lower_last(r, g, ginv);
  Tensor<double, 3> out(n, 0.0);
  for (int h = 0; h < n; ++h)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int k = 0; k < n; ++k) acc += k4(h, j, k, i) * u[k];
        out(h, j, i) = acc;
      }
  return out;
}

// =============================================================================
// Index gymnastics and derivatives of fields
// =============================================================================

// Replace a lower slot by contraction with u (the "0" index convention).
template <class T>
TensorField<T> fiber_contract(const TensorField<T>& t, int slot, const std::vector<T>& u) {
  if (slot < 0 || slot >= t.rank()) throw std::out_of_range("fiber_contract: slot out of range");
  if (t.slots[slot] != Slot::kDown) throw std::invalid_argument("fiber_contract: slot must be a lower index");
  if (static_cast<int>(u.size()) != t.n) throw std::invalid_argument("fiber_contract: fiber vector has wrong length");
  std::vector<Slot> slots = t.slots;
  slots.erase(slots.begin() + slot);
  TensorField<T> out(t.n, slots, T(0.0));
  for (std::size_t off = 0; off < t.comps.size(); ++off) {
    std::vector<int> idx = t.unflatten(off);
    const int k = idx[slot];
    idx.erase(idx.begin() + slot);
    const std::size_t o = out.offset(idx);
    out.comps[o] = out.comps[o] + t.comps[off] * u[k];
  }
  if constexpr (std::is_same_v<T, Expr>)
    for (auto& c : out.comps) c = simplify(c);
  return out;
}

// [X,Y]^h = X^s ∂_s Y^h − Y^s ∂_s X^h.
inline VectorField lie_bracket(const Chart& chart, const VectorField& x, const VectorField& y) {
  const int n = chart.dim();
  if (static_cast<int>(x.size()) != n || static_cast<int>(y.size()) != n)
    throw std::invalid_argument("lie_bracket: vector fields must live on the chart");
  VectorField out(n, Expr(0.0));
  for (int h = 0; h < n; ++h) {
    Expr acc(0.0);
    for (int s = 0; s < n; ++s) {
      acc = acc + x[s] * differentiate(y[h], chart.vars[s]) - y[s] * differentiate(x[h], chart.vars[s]);
    }
    out[h] = simplify(acc);
  }
  return out;
}

// Coordinate covariant derivative; the new lower slot is placed first, so
// out(i, a...) = ∇_i T^{a...}. T must carry first derivatives; the result
// keeps one derivative level less than T. Applying this twice to a vector
// field with S = Dual<double> then S = double yields ∇_i ∇_j ξ^h.
template <class S>
TensorField<S> covariant_derivative(const TensorField<Dual<S>>& t, const Tensor<S, 3>& gamma) {
  const int n = t.n;
  std::vector<Slot> slots{Slot::kDown};
  slots.insert(slots.end(), t.slots.begin(), t.slots.end());
  TensorField<S> out(n, slots, S(0.0));
  const std::size_t inner = t.comps.size();
  for (int i = 0; i < n; ++i)
    for (std::size_t off = 0; off < inner; ++off) {
      std::vector<int> idx = t.unflatten(off);
      S acc = t.comps[off].d[i];
      for (int p = 0; p < t.rank(); ++p) {
        const int a = idx[p];
        for (int s = 0; s < n; ++s) {
          std::vector<int> j = idx;
          j[p] = s;
          const S& ts = t.comps[t.offset(j)].v;
          if (t.slots[p] == Slot::kUp)
            acc = acc + gamma(a, i, s) * ts;
          else
            acc = acc - gamma(s, i, a) * ts;
        }
      }
      out.comps[static_cast<std::size_t>(i) * inner + off] = acc;
    }
  return out;
}

// Jets of an expression tensor field at a point, with cached derivatives.
class TensorFieldJets {
 public:
  TensorFieldJets(const Chart& chart, const TensorField<Expr>& t, int order) : n_(t.n), slots_(t.slots) {
    for (const auto& c : t.comps) comps_.emplace_back(c, chart.vars, order);
  }
  TensorField<double> value(std::span<const double> x) const {
    TensorField<double> out(n_, slots_, 0.0);
    for (std::size_t k = 0; k < comps_.size(); ++k) out.comps[k] = comps_[k].value(x);
    return out;
  }
  TensorField<Dual<double>> jet1(std::span<const double> x) const {
    TensorField<Dual<double>> out(n_, slots_);
    for (std::size_t k = 0; k < comps_.size(); ++k) out.comps[k] = comps_[k].jet1(x);
    return out;
  }
  TensorField<Dual<Dual<double>>> jet2(std::span<const double> x) const {
    TensorField<Dual<Dual<double>>> out(n_, slots_);
    for (std::size_t k = 0; k < comps_.size(); ++k) out.comps[k] = comps_[k].jet2(x);
    return out;
  }

 private:
  int n_;
  std::vector<Slot> slots_;
  std::vector<JetExpr> comps_;
};

inline TensorField<Expr> vector_field_tensor(const VectorField& v) {
  TensorField<Expr> t(static_cast<int>(v.size()), {Slot::kUp});
  t.comps = v;
  return t;
}

// ∇T at x for an expression tensor field.
inline TensorField<double> covariant_derivative_at(const Chart& chart, const TensorField<Expr>& t,
                                                    const ConnectionField& gamma, std::span<const double> x) {
  TensorFieldJets jets(chart, t, 1);
  return covariant_derivative<double>(jets.jet1(x), gamma.at(x));
}

// ∇∇T at x: out(i, j, a...) = ∇_i ∇_j T^{a...}.
inline TensorField<double> second_covariant_derivative_at(const Chart& chart, const TensorField<Expr>& t,
                                                           const ConnectionField& gamma, std::span<const double> x) {
  TensorFieldJets jets(chart, t, 2);
  const Tensor<Dual<double>, 3> gj = gamma.jet_at(x);
  const TensorField<Dual<double>> first = covariant_derivative<Dual<double>>(jets.jet2(x), gj);
  return covariant_derivative<double>(first, primal(gj));
}

// =============================================================================
// Frames
// =============================================================================

// Frame vectors as columns: frame(A, a) = E_a^A, with first derivatives.
using FrameJet = Tensor<Dual<double>, 2>;

struct FrameField {
  int dim = 0;
  std::function<FrameJet(std::span<const double>)> jet;

  static FrameField from_exprs(const Chart& chart, const Tensor<Expr, 2>& e) {
    auto table = std::make_shared<std::vector<JetExpr>>();
    for (const auto& c : e.flat()) table->emplace_back(simplify(c), chart.vars, 1);
    const int n = chart.dim();
    return FrameField{n, [table, n](std::span<const double> x) {
                        FrameJet f(n);
                        for (std::size_t k = 0; k < table->size(); ++k) f.flat()[k] = (*table)[k].jet1(x);
                        return f;
                      }};
  }
  static FrameField identity(int n) {
    return FrameField{n, [n](std::span<const double>) {
                        FrameJet f(n);
                        for (int i = 0; i < n; ++i) f(i, i) = Dual<double>(1.0);
                        return f;
                      }};
  }

  Matrix frame_at(std::span<const double> x) const { return primal(jet(x)); }
  // Dual coframe: rows are the dual 1-forms.
  Matrix coframe_at(std::span<const double> x) const { return invert(frame_at(x)); }
};

// ∇_{E_a} E_b = C^c_{ab} E_c with C^c_{ab} = θ^c_B E_a^A (∂_A E_b^B + Γ^B_{AC} E_b^C).
// Valid for anholonomic frames: the frame-derivative term is included.
inline Tensor<double, 3> frame_connection_coefficients(const Tensor<double, 3>& gamma_coord, const FrameJet& frame) {
  const int m = frame.dim();
  const Matrix f = primal(frame);
  const Matrix theta = invert(f);
  Tensor<double, 3> c(m, 0.0);
  std::vector<double> w(static_cast<std::size_t>(m));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      for (int bb = 0; bb < m; ++bb) {
        double acc = 0.0;
        for (int aa = 0; aa < m; ++aa) {
          const double ea = f(aa, a);
          if (ea == 0.0) continue;
          double inner = frame(bb, b).d[aa];
          for (int cc = 0; cc < m; ++cc) inner += gamma_coord(bb, aa, cc) * f(cc, b);
          acc += ea * inner;
        }
        w[bb] = acc;
      }
      for (int g = 0; g < m; ++g) {
        double acc = 0.0;
        for (int bb = 0; bb < m; ++bb) acc += theta(g, bb) * w[bb];
        c(g, a, b) = acc;
      }
    }
  return c;
}

// Structure functions: [E_a, E_b] = c^g_{ab} E_g, stored as c(g, a, b).
inline Tensor<double, 3> structure_functions(const FrameJet& frame) {
  const int m = frame.dim();
  const Matrix f = primal(frame);
  const Matrix theta = invert(f);
  Tensor<double, 3> c(m, 0.0);
  std::vector<double> br(static_cast<std::size_t>(m));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      for (int aa = 0; aa < m; ++aa) {
        double acc = 0.0;
        for (int bb = 0; bb < m; ++bb) acc += f(bb, a) * frame(aa, b).d[bb] - f(bb, b) * frame(aa, a).d[bb];
        br[aa] = acc;
      }
      for (int g = 0; g < m; ++g) {
        double acc = 0.0;
        for (int aa = 0; aa < m; ++aa) acc += theta(g, aa) * br[aa];
        c(g, a, b) = acc;
      }
    }
  return c;
}

// T^g_{ab} = C^g_{ab} − C^g_{ba} − c^g_{ab}.
inline Tensor<double, 3> torsion(const Tensor<double, 3>& conn, const Tensor<double, 3>& structure) {
  const int m = conn.dim();
  Tensor<double, 3> t(m, 0.0);
  for (int g = 0; g < m; ++g)
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) t(g, a, b) = conn(g, a, b) - conn(g, b, a) - structure(g, a, b);
  return t;
}

}  // namespace tbg

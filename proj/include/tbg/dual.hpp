#pragma once

#include <algorithm>
#include <array>
#include <cmath>

namespace tbg {

// Upper bound on the number of independent variables a jet can carry.
// Tangent-bundle charts use 2n variables, so bases up to dimension 8 fit.
inline constexpr int kMaxVars = 16;

// Forward-mode first-order jet: a value together with its gradient over up to
// kMaxVars variables. Nesting (Dual<Dual<double>>) carries second derivatives.
// Gradient slots at or beyond `n` are always zero, so jets over different
// variable counts mix correctly.
template <class S>
struct Dual {
  S v{};
  std::array<S, kMaxVars> d{};
  int n = 0;

  Dual() = default;
  Dual(double c) : v(c) {}  // NOLINT: constants promote implicitly

  static Dual variable(const S& value, int index, int nvars) {
    Dual r;
    r.v = value;
    r.n = nvars;
    r.d[index] = S(1.0);
    return r;
  }
};

template <class T>
struct IsDual : std::false_type {};
template <class S>
struct IsDual<Dual<S>> : std::true_type {};

inline double value_of(double x) { return x; }
template <class S>
double value_of(const Dual<S>& x) {
  return value_of(x.v);
}

// Drop one derivative level: the S-valued value part.
template <class S>
const S& primal(const Dual<S>& x) {
  return x.v;
}

template <class S>
Dual<S> operator-(const Dual<S>& a) {
  Dual<S> r;
  r.v = -a.v;
  r.n = a.n;
  for (int k = 0; k < r.n; ++k) r.d[k] = -a.d[k];
  return r;
}

template <class S>
Dual<S> operator+(const Dual<S>& a, const Dual<S>& b) {
  Dual<S> r;
  r.v = a.v + b.v;
  r.n = std::max(a.n, b.n);
  for (int k = 0; k < r.n; ++k) r.d[k] = a.d[k] + b.d[k];
  return r;
}

template <class S>
Dual<S> operator-(const Dual<S>& a, const Dual<S>& b) {
  Dual<S> r;
  r.v = a.v - b.v;
  r.n = std::max(a.n, b.n);
  for (int k = 0; k < r.n; ++k) r.d[k] = a.d[k] - b.d[k];
  return r;
}

template <class S>
Dual<S> operator*(const Dual<S>& a, const Dual<S>& b) {
  Dual<S> r;
  r.v = a.v * b.v;
  r.n = std::max(a.n, b.n);
  for (int k = 0; k < r.n; ++k) r.d[k] = a.d[k] * b.v + a.v * b.d[k];
  return r;
}

template <class S>
Dual<S> operator/(const Dual<S>& a, const Dual<S>& b) {
  Dual<S> r;
  r.v = a.v / b.v;
  r.n = std::max(a.n, b.n);
  for (int k = 0; k < r.n; ++k) r.d[k] = (a.d[k] - r.v * b.d[k]) / b.v;
  return r;
}

template <class S>
Dual<S> operator*(const Dual<S>& a, double c) {
  Dual<S> r;
  r.v = a.v * c;
  r.n = a.n;
  for (int k = 0; k < r.n; ++k) r.d[k] = a.d[k] * c;
  return r;
}
template <class S>
Dual<S> operator*(double c, const Dual<S>& a) {
  return a * c;
}
template <class S>
Dual<S> operator/(const Dual<S>& a, double c) {
  return a * (1.0 / c);
}
template <class S>
Dual<S> operator+(const Dual<S>& a, double c) {
  Dual<S> r = a;
  r.v = r.v + c;
  return r;
}
template <class S>
Dual<S> operator+(double c, const Dual<S>& a) {
  return a + c;
}
template <class S>
Dual<S> operator-(const Dual<S>& a, double c) {
  return a + (-c);
}
template <class S>
Dual<S> operator-(double c, const Dual<S>& a) {
  return (-a) + c;
}
template <class S>
Dual<S> operator/(double c, const Dual<S>& a) {
  return Dual<S>(c) / a;
}

template <class S>
Dual<S>& operator+=(Dual<S>& a, const Dual<S>& b) {
  a = a + b;
  return a;
}
template <class S>
Dual<S>& operator-=(Dual<S>& a, const Dual<S>& b) {
  a = a - b;
  return a;
}

namespace detail {
// Chain rule: f(a) with f'(a.v) = slope.
template <class S>
Dual<S> chain(const Dual<S>& a, const S& fv, const S& slope) {
  Dual<S> r;
  r.v = fv;
  r.n = a.n;
  for (int k = 0; k < r.n; ++k) r.d[k] = slope * a.d[k];
  return r;
}
}  // namespace detail

template <class S>
Dual<S> sin(const Dual<S>& a) {
  using std::cos;
  using std::sin;
  return detail::chain(a, S(sin(a.v)), S(cos(a.v)));
}
template <class S>
Dual<S> cos(const Dual<S>& a) {
  using std::cos;
  using std::sin;
  return detail::chain(a, S(cos(a.v)), S(-sin(a.v)));
}
template <class S>
Dual<S> exp(const Dual<S>& a) {
  using std::exp;
  S e = exp(a.v);
  return detail::chain(a, e, e);
}
template <class S>
Dual<S> log(const Dual<S>& a) {
  using std::log;
  return detail::chain(a, S(log(a.v)), S(1.0 / a.v));
}
template <class S>
Dual<S> sqrt(const Dual<S>& a) {
  using std::sqrt;
  S s = sqrt(a.v);
  return detail::chain(a, s, S(0.5 / s));
}

// Integer power by repeated multiplication (exact product rule).
template <class T>
T ipow(const T& base, int k) {
  if (k < 0) return T(1.0) / ipow(base, -k);
  T result(1.0);
  T b = base;
  while (k > 0) {
    if (k & 1) result = result * b;
    k >>= 1;
    if (k > 0) b = b * b;
  }
  return result;
}

}  // namespace tbg

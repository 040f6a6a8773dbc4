#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tbg/dual.hpp"

namespace tbg {

// Dense array of fixed rank R with every slot ranging over 0..n-1.
// Row-major: the last index varies fastest.
template <class T, std::size_t R>
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(int n, const T& fill = T{}) : n_(n), data_(size_for(n), fill) {}

  int dim() const { return n_; }
  std::size_t size() const { return data_.size(); }

  template <class... I>
  T& operator()(I... idx) {
    static_assert(sizeof...(I) == R, "wrong number of indices");
    return data_[offset(idx...)];
  }
  template <class... I>
  const T& operator()(I... idx) const {
    static_assert(sizeof...(I) == R, "wrong number of indices");
    return data_[offset(idx...)];
  }

  std::vector<T>& flat() { return data_; }
  const std::vector<T>& flat() const { return data_; }

 private:
  static std::size_t size_for(int n) {
    std::size_t s = 1;
    for (std::size_t r = 0; r < R; ++r) s *= static_cast<std::size_t>(n);
    return s;
  }
  template <class... I>
  std::size_t offset(I... idx) const {
    std::size_t off = 0;
    ((off = off * static_cast<std::size_t>(n_) + static_cast<std::size_t>(idx)), ...);
    return off;
  }

  int n_ = 0;
  std::vector<T> data_;
};

using Matrix = Tensor<double, 2>;

inline Matrix identity_matrix(int n) {
  Matrix m(n, 0.0);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

// Strip derivative information from a tensor of jets.
template <class S, std::size_t R>
Tensor<S, R> primal(const Tensor<Dual<S>, R>& t) {
  Tensor<S, R> out(t.dim());
  for (std::size_t k = 0; k < t.size(); ++k) out.flat()[k] = t.flat()[k].v;
  return out;
}

template <std::size_t R, class T>
Tensor<double, R> values_of(const Tensor<T, R>& t) {
  Tensor<double, R> out(t.dim());
  for (std::size_t k = 0; k < t.size(); ++k) out.flat()[k] = value_of(t.flat()[k]);
  return out;
}

class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Gauss-Jordan inverse with partial pivoting on the numeric value. Works for
// plain doubles and for jets, in which case the derivative of the inverse is
// carried along exactly.
template <class T>
Tensor<T, 2> invert(const Tensor<T, 2>& a) {
  const int n = a.dim();
  Tensor<T, 2> m = a;
  Tensor<T, 2> inv(n, T(0.0));
  for (int i = 0; i < n; ++i) inv(i, i) = T(1.0);

  double scale = 0.0;
  for (const auto& x : a.flat()) scale = std::max(scale, std::abs(value_of(x)));
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::abs(value_of(m(r, col))) > std::abs(value_of(m(pivot, col)))) pivot = r;
    }
    if (std::abs(value_of(m(pivot, col))) <= 1e-300 + 1e-14 * scale) {
      throw SingularMatrixError("matrix is singular to working precision");
    }
    if (pivot != col) {
      for (int k = 0; k < n; ++k) {
        std::swap(m(pivot, k), m(col, k));
        std::swap(inv(pivot, k), inv(col, k));
      }
    }
    const T p = m(col, col);
    for (int k = 0; k < n; ++k) {
      m(col, k) = m(col, k) / p;
      inv(col, k) = inv(col, k) / p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const T f = m(r, col);
      if (value_of(f) == 0.0 && !IsDual<T>::value) continue;
      for (int k = 0; k < n; ++k) {
        m(r, k) = m(r, k) - f * m(col, k);
        inv(r, k) = inv(r, k) - f * inv(col, k);
      }
    }
  }
  return inv;
}

inline Matrix multiply(const Matrix& a, const Matrix& b) {
  const int n = a.dim();
  Matrix c(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

inline Matrix transpose(const Matrix& a) {
  Matrix t(a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) t(j, i) = a(i, j);
  return t;
}

inline std::vector<double> mat_vec(const Matrix& a, const std::vector<double>& v) {
  std::vector<double> out(static_cast<std::size_t>(a.dim()), 0.0);
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) out[i] += a(i, j) * v[j];
  return out;
}

// g(a, b) for a bilinear form given by its matrix.
inline double bilinear(const Matrix& g, const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (int i = 0; i < g.dim(); ++i)
    for (int j = 0; j < g.dim(); ++j) s += a[i] * g(i, j) * b[j];
  return s;
}

inline double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

template <std::size_t R>
double max_abs(const Tensor<double, R>& t) {
  return max_abs(t.flat());
}

}  // namespace tbg

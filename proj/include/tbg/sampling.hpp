#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "tbg/chart.hpp"

namespace tbg {

inline constexpr double kBaseBox = 0.8;
inline constexpr double kFiberRadius = 1.5;
inline constexpr double kMinEigenvalue = 1e-6;

// Seeded uniform doubles. The conversion from raw 64-bit draws is done by
// hand so sequences are identical across standard library implementations.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}
  double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * unit(); }

 private:
  std::mt19937_64 rng_;
};

inline double min_eigenvalue(const Matrix& g) {
  const int n = g.dim();
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = g(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

struct SamplePoint {
  std::vector<double> x;
  std::vector<double> u;

  // (x, u) concatenated: a point of the tangent-bundle chart.
  std::vector<double> joined() const {
    std::vector<double> p = x;
    p.insert(p.end(), u.begin(), u.end());
    return p;
  }
};

class SamplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {
inline bool admissible(const ChartManifold& m, const std::vector<double>& x) {
  try {
    const Matrix g = m.metric_at(x);
    for (double v : g.flat())
      if (!std::isfinite(v)) return false;
    return min_eigenvalue(g) >= kMinEigenvalue;
  } catch (const DomainError&) {
    return false;
  }
}

inline std::vector<double> draw_base(Sampler& s, const ChartManifold& m) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<double> x(static_cast<std::size_t>(m.dim()));
    for (auto& v : x) v = s.uniform(-kBaseBox, kBaseBox);
    if (admissible(m, x)) return x;
  }
  throw SamplingError("no admissible base point found (metric degenerate on the sample box)");
}

inline std::vector<double> draw_fiber(Sampler& s, int n) {
  std::vector<double> u(static_cast<std::size_t>(n));
  for (;;) {
    double r2 = 0.0;
    for (auto& v : u) {
      v = s.uniform(-kFiberRadius, kFiberRadius);
      r2 += v * v;
    }
    if (r2 <= kFiberRadius * kFiberRadius) return u;
  }
}
}  // namespace detail

// Base points in [-0.8, 0.8]^n, rejecting near-degenerate metrics.
inline std::vector<std::vector<double>> sample_base_points(const ChartManifold& m, int count, std::uint64_t seed) {
  Sampler s(seed);
  std::vector<std::vector<double>> pts;
  pts.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) pts.push_back(detail::draw_base(s, m));
  return pts;
}

// Tangent-bundle points. The first point always sits on the zero section.
inline std::vector<SamplePoint> sample_tb_points(const ChartManifold& m, int count, std::uint64_t seed) {
  Sampler s(seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<SamplePoint> pts;
  pts.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    SamplePoint p;
    p.x = detail::draw_base(s, m);
    p.u = k == 0 ? std::vector<double>(static_cast<std::size_t>(m.dim()), 0.0) : detail::draw_fiber(s, m.dim());
    pts.push_back(std::move(p));
  }
  return pts;
}

}  // namespace tbg

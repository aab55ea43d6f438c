#pragma once

// Test-only quadrature, written without the library's Jacobi machinery so
// that it can serve as an independent oracle.

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

namespace dgtm::testing {

/// n-point Gauss-Legendre rule on [-1, 1] by Newton iteration on P_n.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  std::vector<double> x(n), w(n);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return {x, w};
}

/// Integral over the reference triangle via the collapsed square
/// r = (1+a)(1-b)/2 - 1, s = b, with Jacobian (1-b)/2.
template <class F>
double integrate_triangle(F&& f, int points = 24) {
  const auto [x, w] = gauss_legendre(points);
  double sum = 0.0;
  for (int i = 0; i < points; ++i) {
    for (int j = 0; j < points; ++j) {
      const double a = x[i], b = x[j];
      const double r = 0.5 * (1.0 + a) * (1.0 - b) - 1.0;
      const double s = b;
      sum += w[i] * w[j] * 0.5 * (1.0 - b) * f(r, s);
    }
  }
  return sum;
}

}  // namespace dgtm::testing

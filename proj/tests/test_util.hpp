#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <utility>

#include "hessdamp/problem.hpp"

namespace testutil {

using hessdamp::Mat;
using hessdamp::Vec;

inline Vec random_vec(std::mt19937_64& g, int n, double scale = 1.0) {
  std::normal_distribution<double> N(0.0, 1.0);
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = scale * N(g);
  return v;
}

inline Mat random_mat(std::mt19937_64& g, int m, int n) {
  std::normal_distribution<double> N(0.0, 1.0);
  Mat A(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = N(g);
  return A;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

// Brute-force minimizer on [-10, 10] with step 1e-3, then refined once around the best point.
inline double grid_argmin_1d(const std::function<double(double)>& phi, double lo = -10.0, double hi = 10.0) {
  auto scan = [&](double a, double b, double h) {
    double best = a, fb = std::numeric_limits<double>::infinity();
    const long n = static_cast<long>(std::round((b - a) / h));
    for (long i = 0; i <= n; ++i) {
      const double z = a + h * static_cast<double>(i);
      const double v = phi(z);
      if (v < fb) fb = v, best = z;
    }
    return best;
  };
  const double z0 = scan(lo, hi, 1e-3);
  const double z1 = scan(z0 - 2e-3, z0 + 2e-3, 1e-6);
  return scan(z1 - 2e-6, z1 + 2e-6, 1e-9);
}

// 2-D version: step 1e-2, refined twice.
inline Vec grid_argmin_2d(const std::function<double(double, double)>& phi, double lo = -10.0, double hi = 10.0) {
  auto scan = [&](double a0, double a1, double b0, double b1, double h) {
    double bx = a0, by = b0, fb = std::numeric_limits<double>::infinity();
    const long nx = static_cast<long>(std::round((a1 - a0) / h)), ny = static_cast<long>(std::round((b1 - b0) / h));
    for (long i = 0; i <= nx; ++i)
      for (long j = 0; j <= ny; ++j) {
        const double x = a0 + h * static_cast<double>(i), y = b0 + h * static_cast<double>(j);
        const double v = phi(x, y);
        if (v < fb) fb = v, bx = x, by = y;
      }
    return std::pair<double, double>{bx, by};
  };
  auto [x0, y0] = scan(lo, hi, lo, hi, 1e-2);
  auto [x1, y1] = scan(x0 - 2e-2, x0 + 2e-2, y0 - 2e-2, y0 + 2e-2, 1e-4);
  auto [x2, y2] = scan(x1 - 2e-4, x1 + 2e-4, y1 - 2e-4, y1 + 2e-4, 1e-6);
  Vec r(2);
  r << x2, y2;
  return r;
}

}  // namespace testutil

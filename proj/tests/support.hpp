#pragma once

// Finite-difference helpers shared by the test binaries. They only ever see
// plain function values, never the analytic derivatives under test.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace testsupport {

using Fn = std::function<double(double)>;

/// Central differences extrapolated over `levels` halvings of h0 (Neville).
inline double richardson_d1(const Fn& f, double x, double h0, int levels = 6) {
  std::vector<std::vector<double>> t(levels);
  double h = h0;
  for (int i = 0; i < levels; ++i, h *= 0.5) {
    t[i].push_back((f(x + h) - f(x - h)) / (2.0 * h));
    double p = 4.0;
    for (int j = 1; j <= i; ++j, p *= 4.0) t[i].push_back(t[i][j - 1] + (t[i][j - 1] - t[i - 1][j - 1]) / (p - 1.0));
  }
  return t.back().back();
}

inline double richardson_d2(const Fn& f, double x, double h0, int levels = 6) {
  std::vector<std::vector<double>> t(levels);
  double h = h0;
  const double f0 = f(x);
  for (int i = 0; i < levels; ++i, h *= 0.5) {
    t[i].push_back((f(x + h) - 2.0 * f0 + f(x - h)) / (h * h));
    double p = 4.0;
    for (int j = 1; j <= i; ++j, p *= 4.0) t[i].push_back(t[i][j - 1] + (t[i][j - 1] - t[i - 1][j - 1]) / (p - 1.0));
  }
  return t.back().back();
}

/// 4th-order 5-point stencils.
inline double d1_5(const Fn& f, double x, double h) {
  return (f(x - 2 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2 * h)) / (12.0 * h);
}
inline double d2_5(const Fn& f, double x, double h) {
  return (-f(x - 2 * h) + 16.0 * f(x - h) - 30.0 * f(x) + 16.0 * f(x + h) - f(x + 2 * h)) / (12.0 * h * h);
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

inline std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

/// Deterministic generator for the randomized identity sweeps.
struct Draws {
  explicit Draws(std::uint64_t seed) : rng(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  std::mt19937_64 rng;
};

}  // namespace testsupport

// Test-side oracles shared by the unit tests and the acceptance binary.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "llb/spectral.hpp"

namespace llb::testing {

// Plain RK4 for y' = l (y x h + h) at one point, written independently of the
// library so that orientation mistakes in either show up.
inline Vec3d rk4_marcus_point(double t, double l, Vec3d y, const Vec3d& h, double step) {
  if (t == 0.0) return y;
  const int n = static_cast<int>(std::ceil(t / step));
  const double dt = t / n;
  auto f = [&](const Vec3d& v) -> Vec3d { return l * (v.cross(h) + h); };
  for (int i = 0; i < n; ++i) {
    const Vec3d k1 = f(y);
    const Vec3d k2 = f(y + 0.5 * dt * k1);
    const Vec3d k3 = f(y + 0.5 * dt * k2);
    const Vec3d k4 = f(y + dt * k3);
    y += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return y;
}

// r' = -r - r^3 with r(0) = r0: u = r^2 solves u' = -2u - 2u^2.
inline double decay_oracle(double r0, double t) {
  const double u0 = r0 * r0;
  const double e = std::exp(-2.0 * t);
  return std::sqrt(u0 * e / (1.0 + u0 * (1.0 - e)));
}

// One-sample Kolmogorov-Smirnov statistic.
inline double ks_statistic(std::vector<double> x, const std::function<double(double)>& cdf) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, (double(i) + 1.0) / n - f, f - double(i) / n});
  }
  return d;
}

// Asymptotic critical value of the KS statistic at level 0.01.
inline double ks_critical_001(std::size_t n) { return 1.6276 / std::sqrt(static_cast<double>(n)); }

// Two-sided normal critical value at level 0.01.
inline constexpr double kZ001 = 2.5758;

}  // namespace llb::testing

#pragma once

// Test-only oracles, kept independent of the library code paths they check.

#include <Eigen/Dense>

#include <complex>
#include <functional>

namespace oracles {

using Complex = std::complex<double>;

/// Fixed-step classic Runge-Kutta on a complex 2-state system y' = f(t, y).
template <typename F>
Eigen::Vector2cd rk4_integrate(F&& f, Eigen::Vector2cd y, double t0, double t1, double dt) {
  double t = t0;
  while (t < t1 - 1e-15) {
    const double h = std::min(dt, t1 - t);
    const Eigen::Vector2cd k1 = f(t, y);
    const Eigen::Vector2cd k2 = f(t + 0.5 * h, y + 0.5 * h * k1);
    const Eigen::Vector2cd k3 = f(t + 0.5 * h, y + 0.5 * h * k2);
    const Eigen::Vector2cd k4 = f(t + h, y + h * k3);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += h;
  }
  return y;
}

/// Derivative of the complexified mode system mu u'' + (eps - i) u' + alpha u = 0
/// written for the RK4 oracle; deliberately re-derived here rather than shared.
inline auto mode_system(double mu, double eps, double alpha) {
  return [mu, eps, alpha](double, const Eigen::Vector2cd& y) {
    Eigen::Vector2cd dy;
    dy[0] = y[1];
    dy[1] = -(alpha / mu) * y[0] - (Complex(eps, -1.0) / mu) * y[1];
    return dy;
  };
}

}  // namespace oracles

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "skm/errors.hpp"

namespace skm {

/// Composite Simpson over n uniform intervals (n must be even and >= 2).
template <typename F>
double composite_simpson(F&& f, double a, double b, int n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("composite_simpson: n must be even and >= 2");
  const double h = (b - a) / n;
  double odd = 0.0, even = 0.0;
  for (int i = 1; i < n; i += 2) odd += f(a + i * h);
  for (int i = 2; i < n; i += 2) even += f(a + i * h);
  return (h / 3.0) * (f(a) + 4.0 * odd + 2.0 * even + f(b));
}

/// Simpson over pre-sampled values on a uniform grid (values.size() odd).
double simpson_sampled(const std::vector<double>& values, double h);

/// Adaptive Simpson on a vector-valued integrand, controlled in the max norm.
/// rel_tol is relative to the accumulated integral magnitude (with abs floor).
Eigen::VectorXd adaptive_simpson(const std::function<Eigen::VectorXd(double)>& f, double a,
                                 double b, double rel_tol, int max_depth = 40);

/// Gauss-Legendre nodes and weights on [a, b].
struct GaussLegendre {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};
GaussLegendre gauss_legendre(int n, double a, double b);

/// Values of the orthonormal shifted Legendre basis phi_0..phi_{order-1}
/// on [0, h] at point s:  phi_j(s) = sqrt((2j+1)/h) P_j(2s/h - 1).
Eigen::VectorXd orthonormal_legendre(int order, double h, double s);

}  // namespace skm

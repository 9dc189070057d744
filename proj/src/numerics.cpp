#include "skm/numerics.hpp"

#include <cmath>
#include <numbers>

namespace skm {

double simpson_sampled(const std::vector<double>& values, double h) {
  const int n = static_cast<int>(values.size()) - 1;
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument("simpson_sampled: need an odd number of samples >= 3");
  double odd = 0.0, even = 0.0;
  for (int i = 1; i < n; i += 2) odd += values[i];
  for (int i = 2; i < n; i += 2) even += values[i];
  return (h / 3.0) * (values.front() + 4.0 * odd + 2.0 * even + values.back());
}

namespace {

struct AdaptiveCtx {
  const std::function<Eigen::VectorXd(double)>& f;
  double tol_scale;
};

Eigen::VectorXd adaptive_step(const AdaptiveCtx& ctx, double a, double b,
                              const Eigen::VectorXd& fa, const Eigen::VectorXd& fm,
                              const Eigen::VectorXd& fb, const Eigen::VectorXd& whole,
                              int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const Eigen::VectorXd flm = ctx.f(lm);
  const Eigen::VectorXd frm = ctx.f(rm);
  const double h = b - a;
  const Eigen::VectorXd left = (h / 12.0) * (fa + 4.0 * flm + fm);
  const Eigen::VectorXd right = (h / 12.0) * (fm + 4.0 * frm + fb);
  const Eigen::VectorXd sum = left + right;
  const double err = (sum - whole).cwiseAbs().maxCoeff() / 15.0;
  if (depth <= 0) throw RefinementRequired("adaptive_simpson: max recursion depth reached");
  if (err <= ctx.tol_scale * h) return sum + (sum - whole) / 15.0;
  return adaptive_step(ctx, a, m, fa, flm, fm, left, depth - 1) +
         adaptive_step(ctx, m, b, fm, frm, fb, right, depth - 1);
}

}  // namespace

Eigen::VectorXd adaptive_simpson(const std::function<Eigen::VectorXd(double)>& f, double a,
                                 double b, double rel_tol, int max_depth) {
  const Eigen::VectorXd fa = f(a);
  const Eigen::VectorXd fb = f(b);
  const Eigen::VectorXd fm = f(0.5 * (a + b));
  const Eigen::VectorXd whole = ((b - a) / 6.0) * (fa + 4.0 * fm + fb);
  const double scale =
      std::max({fa.cwiseAbs().maxCoeff(), fm.cwiseAbs().maxCoeff(), fb.cwiseAbs().maxCoeff(), 1e-300});
  AdaptiveCtx ctx{f, rel_tol * scale};
  return adaptive_step(ctx, a, b, fa, fm, fb, whole, max_depth);
}

GaussLegendre gauss_legendre(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  GaussLegendre gl;
  gl.nodes.resize(n);
  gl.weights.resize(n);
  // Newton iteration on P_n over [-1, 1], then affine map to [a, b].
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    gl.nodes[i] = 0.5 * (b - a) * x + 0.5 * (a + b);
    gl.weights[i] = (b - a) / ((1.0 - x * x) * dp * dp);
  }
  return gl;
}

Eigen::VectorXd orthonormal_legendre(int order, double h, double s) {
  Eigen::VectorXd phi(order);
  const double x = 2.0 * s / h - 1.0;
  double prev = 0.0, cur = 1.0;  // P_{-1} (unused at j=0), P_0
  for (int j = 0; j < order; ++j) {
    phi[j] = std::sqrt((2.0 * j + 1.0) / h) * cur;
    const double next = ((2.0 * j + 1.0) * x * cur - j * prev) / (j + 1.0);
    prev = cur;
    cur = next;
  }
  return phi;
}

}  // namespace skm

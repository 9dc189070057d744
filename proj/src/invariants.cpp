#include "skm/invariants.hpp"

#include <cmath>
#include <vector>

#include "skm/numerics.hpp"

namespace skm {

namespace {

double abs2(Complex z) { return std::norm(z); }

/// int_0^t f(s) ds by Simpson on quad_steps intervals with a half-step guard.
template <typename F>
double guarded_time_integral(F&& f, double t, int quad_steps, const char* who) {
  if (quad_steps < 4) throw std::invalid_argument(std::string(who) + ": quad_steps must be >= 4");
  quad_steps = ((quad_steps + 3) / 4) * 4;  // the half-step guard needs a multiple of 4
  std::vector<double> samples(quad_steps + 1);
  const double h = t / quad_steps;
  for (int i = 0; i <= quad_steps; ++i) samples[i] = f(i * h);
  const double fine = simpson_sampled(samples, h);
  std::vector<double> half(quad_steps / 2 + 1);
  for (int i = 0; i <= quad_steps / 2; ++i) half[i] = samples[2 * i];
  const double coarse = simpson_sampled(half, 2.0 * h);
  const double scale = std::max(std::abs(fine), 1.0);
  if (std::abs(fine - coarse) > 1e-6 * scale)
    throw RefinementRequired(std::string(who) + ": quadrature disagreement above 1e-6");
  return fine;
}

}  // namespace

double energy_identity_defect(double mu, double eps, double alpha, ModeState z0, double t,
                              int quad_steps) {
  if (mu <= 0.0 || alpha <= 0.0) throw std::invalid_argument("energy_identity_defect: mu, alpha > 0");
  if (eps < 0.0) throw std::invalid_argument("energy_identity_defect: eps >= 0");
  if (quad_steps < 4) throw std::invalid_argument("energy_identity_defect: quad_steps must be >= 4");
  const ModeState zt = apply(second_order_propagator(mu, eps, alpha, t), z0);
  double integral = 0.0;
  if (eps != 0.0 && t != 0.0) {
    integral = guarded_time_integral(
        [&](double s) { return abs2(apply(second_order_propagator(mu, eps, alpha, s), z0).v); }, t,
        quad_steps, "energy_identity_defect");
  }
  const double lhs = mu * abs2(zt.v) / alpha + abs2(zt.u) + 2.0 * eps * integral / alpha;
  const double rhs = mu * abs2(z0.v) / alpha + abs2(z0.u);
  return lhs - rhs;
}

double energy_identity2_defect(double mu, double eps, double alpha, ModeState z0, double t,
                               int quad_steps) {
  if (mu <= 0.0 || alpha <= 0.0) throw std::invalid_argument("energy_identity2_defect: mu, alpha > 0");
  if (eps < 0.0) throw std::invalid_argument("energy_identity2_defect: eps >= 0");
  if (quad_steps < 4) throw std::invalid_argument("energy_identity2_defect: quad_steps must be >= 4");
  const Complex j(eps, -1.0);
  const ModeState zt = apply(second_order_propagator(mu, eps, alpha, t), z0);
  double integral = 0.0;
  if (eps != 0.0 && t != 0.0) {
    integral = guarded_time_integral(
        [&](double s) { return abs2(apply(second_order_propagator(mu, eps, alpha, s), z0).u); }, t,
        quad_steps, "energy_identity2_defect");
  }
  const double lhs = mu * abs2(zt.u) + abs2(mu * zt.v + j * zt.u) / alpha + 2.0 * eps * integral;
  const double rhs = mu * abs2(z0.u) + abs2(mu * z0.v + j * z0.u) / alpha;
  return lhs - rhs;
}

double damped_component_defect(double mu, double eps, double theta, double gamma, double alpha,
                               Complex y, double t) {
  if (gamma < 0.0 || gamma > 1.0)
    throw std::invalid_argument("damped_component_defect: gamma must lie in [0,1]");
  const ModeState zt = apply(second_order_propagator(mu, eps, alpha, t), {Complex(0.0), y});
  const double measured = std::pow(alpha, theta / 2.0) * std::abs(zt.u);
  const double bound = std::pow(2.0, gamma) * std::pow(mu, (1.0 + gamma) / 2.0) *
                       std::pow(alpha, (theta + gamma - 1.0) / 2.0) * std::abs(y);
  return measured - bound;
}

int sup_grid_points(double T, double mu) {
  const double dense = std::max(2048.0 * T, 20.0 * T / mu);
  return static_cast<int>(std::min(std::ceil(dense), 4.0e6)) + 1;
}

GapResult semigroup_gap_mu(double mu, double eps, double alpha, Complex x, double T,
                           int grid_points) {
  if (eps <= 0.0) throw std::invalid_argument("semigroup_gap_mu: eps must be positive");
  if (grid_points <= 1) grid_points = sup_grid_points(T, mu);
  double sup = 0.0;
  for (int i = 0; i < grid_points; ++i) {
    const double t = T * i / (grid_points - 1);
    const Complex first = apply(second_order_propagator(mu, eps, alpha, t), {x, Complex(0.0)}).u;
    const Complex limit = exp_j_scaled_complex(eps, -alpha * t) * x;
    sup = std::max(sup, std::abs(first - limit));
  }
  return {sup, (mu / eps) * alpha * std::abs(x) * std::exp(alpha * T)};
}

GapResult semigroup_gap_mu_velocity(double mu, double eps, double alpha, Complex y, double t0,
                                    double T, int grid_points) {
  if (eps <= 0.0) throw std::invalid_argument("semigroup_gap_mu_velocity: eps must be positive");
  if (!(0.0 < t0 && t0 < T)) throw std::invalid_argument("semigroup_gap_mu_velocity: need 0 < t0 < T");
  if (grid_points <= 1) grid_points = sup_grid_points(T - t0, mu);
  const Complex jinv = Complex(eps, 1.0) / (1.0 + eps * eps);
  double sup = 0.0;
  for (int i = 0; i < grid_points; ++i) {
    const double t = t0 + (T - t0) * i / (grid_points - 1);
    const Complex first =
        apply(second_order_propagator(mu, eps, alpha, t), {Complex(0.0), y / mu}).u;
    const Complex limit = exp_j_scaled_complex(eps, -alpha * t) * jinv * y;
    sup = std::max(sup, std::abs(first - limit));
  }
  const double bound =
      (std::exp(-eps * t0 / mu) + mu * alpha / eps) * std::abs(y) * std::exp(alpha * T);
  return {sup, bound};
}

GapResult semigroup_gap_eps(double mu, double eps, const PhasePoint& z, double t,
                            const EigenSequence& eig) {
  if (mu <= 0.0) throw std::invalid_argument("semigroup_gap_eps: mu must be positive");
  if (eps < 0.0) throw std::invalid_argument("semigroup_gap_eps: eps must be nonnegative");
  const PhasePoint with_friction = apply_S_mu_eps(mu, eps, t, z, eig);
  const PhasePoint frictionless = apply_S_mu_eps(mu, 0.0, t, z, eig);
  const double measured = weighted_phase_norm(with_friction - frictionless, mu, eig);
  const double bound = (eps * t / mu) * weighted_phase_norm(z, mu, eig);
  return {measured, bound};
}

namespace {

/// int_0^T s^{-delta} f(s) ds with the substitution s = tau^{1/(1-delta)},
/// which makes the transformed integrand bounded at 0.
template <typename F>
double singular_weighted_integral(F&& f, double delta, double T, int quad_steps) {
  const double q = 1.0 / (1.0 - delta);
  const double upper = std::pow(T, 1.0 - delta);
  auto g = [&](double tau) {
    const double s = std::pow(tau, q);
    return q * f(s);
  };
  return composite_simpson(g, 0.0, upper, quad_steps);
}

}  // namespace

IntegralBound weighted_integral_bound(double mu, double eps, double delta, double alpha,
                                      double lambda, double T_upper, int quad_steps) {
  if (!(0.0 < delta && delta < 1.0))
    throw std::invalid_argument("weighted_integral_bound: delta must lie in (0,1)");
  if (lambda == 0.0) return {0.0, 0.0};
  auto f = [&](double s) {
    const ModeState z = apply(second_order_propagator(mu, eps, alpha, s), {Complex(0.0), Complex(lambda / mu)});
    return std::norm(z.u);
  };
  const double value = singular_weighted_integral(f, delta, T_upper, quad_steps);
  return {value, lambda * lambda / std::pow(alpha, 1.0 - delta)};
}

IntegralBound weighted_integral_bound_first_order(double eps, double delta, double alpha,
                                                  double lambda, double T, int quad_steps) {
  if (!(0.0 < delta && delta < 1.0))
    throw std::invalid_argument("weighted_integral_bound_first_order: delta must lie in (0,1)");
  if (lambda == 0.0) return {0.0, 0.0};
  const Complex jinv = Complex(eps, 1.0) / (1.0 + eps * eps);
  auto f = [&](double s) {
    return std::norm(exp_j_scaled_complex(eps, -alpha * s) * jinv * lambda);
  };
  const double value = singular_weighted_integral(f, delta, T, quad_steps);
  return {value, std::pow(T, 1.0 - delta) * lambda * lambda / (1.0 - delta)};
}

double t0_isometry_defect(const SpectralField& u, double theta, double t,
                          const EigenSequence& eig) {
  const SpectralField moved = apply_T_eps(0.0, t, u, eig);
  return sobolev_norm(moved, SobolevIndex{theta}, eig) - sobolev_norm(u, SobolevIndex{theta}, eig);
}

double j_inverse_gap(double eps) {
  // J_eps^{-1} - J_0^{-1} = eps/(1+eps^2) I - eps^2/(1+eps^2) J_0^{-1}; for
  // a I + b J_0^{-1} the operator norm is sqrt(a^2 + b^2).
  return eps / std::sqrt(1.0 + eps * eps);
}

}  // namespace skm

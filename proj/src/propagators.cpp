#include "skm/propagators.hpp"

#include <cmath>

#include "skm/numerics.hpp"

namespace skm {

Eigen::Matrix2d FrictionMatrix::matrix() const {
  Eigen::Matrix2d j;
  j << eps, 1.0, -1.0, eps;
  return j;
}

Eigen::Matrix2d FrictionMatrix::inverse() const {
  Eigen::Matrix2d j;
  j << eps, -1.0, 1.0, eps;
  return j / (1.0 + eps * eps);
}

Complex exp_j_scaled_complex(double eps, double t) {
  const double s = t / (1.0 + eps * eps);
  return std::exp(eps * s) * Complex(std::cos(s), std::sin(s));
}

Eigen::Matrix2d exp_j_scaled(double eps, double t) {
  const Complex e = exp_j_scaled_complex(eps, t);
  Eigen::Matrix2d m;
  m << e.real(), -e.imag(), e.imag(), e.real();
  return m;
}

namespace {

Eigen::Matrix2cd taylor_exponential(const Eigen::Matrix2cd& g) {
  // Scaling and squaring with a truncated series; adequate for the 2x2 blocks here.
  const double norm = g.cwiseAbs().maxCoeff();
  int squarings = 0;
  double scale = 1.0;
  while (norm * scale > 0.25) {
    scale *= 0.5;
    ++squarings;
  }
  const Eigen::Matrix2cd a = scale * g;
  Eigen::Matrix2cd term = Eigen::Matrix2cd::Identity();
  Eigen::Matrix2cd sum = term;
  for (int k = 1; k <= 18; ++k) {
    term = (term * a) / double(k);
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

}  // namespace

Eigen::Matrix2cd second_order_generator(double mu, double eps, double alpha) {
  Eigen::Matrix2cd g;
  g << Complex(0, 0), Complex(1, 0), Complex(-alpha / mu, 0), -Complex(eps, -1.0) / mu;
  return g;
}

ModePropagator second_order_propagator(double mu, double eps, double alpha, double t) {
  if (mu <= 0.0) throw std::invalid_argument("second_order_propagator: mu must be positive");
  if (alpha <= 0.0) throw std::invalid_argument("second_order_propagator: alpha must be positive");
  if (eps < 0.0) throw std::invalid_argument("second_order_propagator: eps must be nonnegative");

  ModePropagator p{mu, eps, alpha, t, Eigen::Matrix2cd::Identity()};
  if (t == 0.0) return p;

  // Complexified mode equation mu w'' + (eps - i) w' + alpha w = 0.
  const Complex j(eps, -1.0);
  const Complex disc = j * j - 4.0 * mu * alpha;
  if (std::abs(disc) < 1e-8) {
    // Confluent roots: fall back to a direct matrix exponential.
    p.matrix = taylor_exponential(t * second_order_generator(mu, eps, alpha));
    return p;
  }
  const Complex root = std::sqrt(disc);
  const Complex sp = (-j + root) / (2.0 * mu);
  const Complex sm = (-j - root) / (2.0 * mu);
  const Complex ep = std::exp(sp * t);
  const Complex em = std::exp(sm * t);
  const Complex d = sp - sm;
  p.matrix(0, 0) = (sp * em - sm * ep) / d;
  p.matrix(0, 1) = (ep - em) / d;
  p.matrix(1, 0) = sp * sm * (em - ep) / d;
  p.matrix(1, 1) = (sp * ep - sm * em) / d;
  return p;
}

Eigen::Matrix2cd second_order_exponential_taylor(double mu, double eps, double alpha, double t) {
  return taylor_exponential(t * second_order_generator(mu, eps, alpha));
}

Eigen::Matrix4d ModePropagator::real_matrix() const {
  Eigen::Matrix4d m;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      const Complex e = matrix(r, c);
      m(2 * r, 2 * c) = e.real();
      m(2 * r, 2 * c + 1) = -e.imag();
      m(2 * r + 1, 2 * c) = e.imag();
      m(2 * r + 1, 2 * c + 1) = e.real();
    }
  return m;
}

ModeState apply(const ModePropagator& p, ModeState s) {
  return {p.matrix(0, 0) * s.u + p.matrix(0, 1) * s.v, p.matrix(1, 0) * s.u + p.matrix(1, 1) * s.v};
}

PhasePoint apply_S_mu_eps(double mu, double eps, double t, const PhasePoint& z,
                          const EigenSequence& eig) {
  if (z.modes() > eig.size())
    throw std::invalid_argument("apply_S_mu_eps: more modes than eigenvalues");
  PhasePoint out = PhasePoint::zero(z.modes());
  for (int k = 0; k < z.modes(); ++k) {
    const ModePropagator p = second_order_propagator(mu, eps, eig[k], t);
    const ModeState s = apply(p, {z.u.coeffs[k], z.v.coeffs[k]});
    out.u.coeffs[k] = s.u;
    out.v.coeffs[k] = s.v;
  }
  return out;
}

SpectralField apply_T_eps(double eps, double t, const SpectralField& u, const EigenSequence& eig) {
  if (u.modes() > eig.size()) throw std::invalid_argument("apply_T_eps: more modes than eigenvalues");
  SpectralField out = u;
  for (int k = 0; k < u.modes(); ++k)
    out.coeffs[k] *= exp_j_scaled_complex(eps, -eig[k] * t);
  return out;
}

namespace {

/// Simpson weights over N uniform intervals, N even.
std::vector<double> simpson_weights(int intervals, double h) {
  std::vector<double> w(intervals + 1, 0.0);
  for (int i = 0; i < intervals; i += 2) {
    w[i] += h / 3.0;
    w[i + 1] += 4.0 * h / 3.0;
    w[i + 2] += h / 3.0;
  }
  return w;
}

}  // namespace

SpectralField duhamel_second_order(double mu, double eps, const std::vector<SpectralField>& psi,
                                   double t, const EigenSequence& eig) {
  if (psi.size() < 3 || psi.size() % 2 == 0)
    throw std::invalid_argument("duhamel_second_order: need an odd number of samples >= 3");
  const int intervals = static_cast<int>(psi.size()) - 1;
  const double dt = t / intervals;
  if (dt > mu / 10.0)
    throw RefinementRequired("duhamel_second_order: sample spacing exceeds mu/10");
  const int n = psi.front().modes();
  SpectralField out = SpectralField::zero(n);
  const auto w = simpson_weights(intervals, dt);
  for (int i = 0; i <= intervals; ++i) {
    const double s = i * dt;
    if (psi[i].modes() != n) throw std::invalid_argument("duhamel_second_order: ragged path");
    for (int k = 0; k < n; ++k) {
      const ModePropagator p = second_order_propagator(mu, eps, eig[k], t - s);
      out.coeffs[k] += w[i] * p.matrix(0, 1) * psi[i].coeffs[k] / mu;
    }
  }
  return out;
}

SpectralField duhamel_first_order(double eps, const std::vector<SpectralField>& psi, double t,
                                  const EigenSequence& eig) {
  if (psi.size() < 3 || psi.size() % 2 == 0)
    throw std::invalid_argument("duhamel_first_order: need an odd number of samples >= 3");
  const int intervals = static_cast<int>(psi.size()) - 1;
  const double dt = t / intervals;
  const Complex jinv = Complex(eps, 1.0) / (1.0 + eps * eps);
  const int n = psi.front().modes();
  SpectralField out = SpectralField::zero(n);
  const auto w = simpson_weights(intervals, dt);
  for (int i = 0; i <= intervals; ++i) {
    const double s = i * dt;
    if (psi[i].modes() != n) throw std::invalid_argument("duhamel_first_order: ragged path");
    for (int k = 0; k < n; ++k)
      out.coeffs[k] += w[i] * exp_j_scaled_complex(eps, -eig[k] * (t - s)) * jinv * psi[i].coeffs[k];
  }
  return out;
}

}  // namespace skm

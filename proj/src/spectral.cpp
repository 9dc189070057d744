#include "skm/spectral.hpp"

#include <cmath>
#include <numbers>

namespace skm {

EigenSequence dirichlet_eigens(double L, int n) {
  if (L <= 0.0) throw std::invalid_argument("dirichlet_eigens: L must be positive");
  if (n < 1) throw std::invalid_argument("dirichlet_eigens: n must be >= 1");
  EigenSequence eig;
  eig.source = EigenSequence::Source::DirichletInterval;
  eig.length = L;
  eig.values.resize(n);
  for (int k = 0; k < n; ++k) {
    const double w = (k + 1) * std::numbers::pi / L;
    eig.values[k] = w * w;
  }
  return eig;
}

EigenSequence explicit_eigens(Eigen::VectorXd values) {
  if (values.size() == 0) throw std::invalid_argument("explicit_eigens: empty sequence");
  if (values[0] <= 0.0) throw std::invalid_argument("explicit_eigens: eigenvalues must be positive");
  for (int k = 0; k + 1 < values.size(); ++k)
    if (values[k + 1] < values[k])
      throw std::invalid_argument("explicit_eigens: eigenvalues must be nondecreasing");
  EigenSequence eig;
  eig.source = EigenSequence::Source::ExplicitList;
  eig.values = std::move(values);
  return eig;
}

EigenSequence power_law_eigens(double c, double q, int n) {
  if (c <= 0.0 || q < 0.0 || n < 1) throw std::invalid_argument("power_law_eigens: need c > 0, q >= 0, n >= 1");
  EigenSequence eig;
  eig.source = EigenSequence::Source::PowerLaw;
  eig.values.resize(n);
  for (int k = 0; k < n; ++k) eig.values[k] = c * std::pow(double(k + 1), q);
  return eig;
}

SpectralField operator+(const SpectralField& a, const SpectralField& b) {
  if (a.modes() != b.modes()) throw std::invalid_argument("SpectralField: truncation mismatch");
  return SpectralField(a.coeffs + b.coeffs);
}

SpectralField operator-(const SpectralField& a, const SpectralField& b) {
  if (a.modes() != b.modes()) throw std::invalid_argument("SpectralField: truncation mismatch");
  return SpectralField(a.coeffs - b.coeffs);
}

SpectralField operator*(double s, const SpectralField& a) { return SpectralField(s * a.coeffs); }

PhasePoint::PhasePoint(SpectralField u_, SpectralField v_) : u(std::move(u_)), v(std::move(v_)) {
  if (u.modes() != v.modes()) throw std::invalid_argument("PhasePoint: u and v truncations differ");
}

PhasePoint operator-(const PhasePoint& a, const PhasePoint& b) { return {a.u - b.u, a.v - b.v}; }

double sobolev_norm(const SpectralField& field, SobolevIndex theta, const EigenSequence& eig) {
  if (field.modes() > eig.size())
    throw std::invalid_argument("sobolev_norm: field has more modes than the eigenvalue sequence");
  const int n = field.modes();
  if (n == 0) return 0.0;
  const auto weights = eig.values.head(n).array().pow(theta.theta);
  return std::sqrt((weights * field.coeffs.array().abs2()).sum());
}

double phase_norm(const PhasePoint& z, SobolevIndex theta, const EigenSequence& eig) {
  const double nu = sobolev_norm(z.u, theta, eig);
  const double nv = sobolev_norm(z.v, SobolevIndex{theta.theta - 1.0}, eig);
  return std::hypot(nu, nv);
}

double weighted_phase_norm(const PhasePoint& z, double mu, const EigenSequence& eig) {
  if (mu <= 0.0) throw std::invalid_argument("weighted_phase_norm: mu must be positive");
  const double nu = sobolev_norm(z.u, SobolevIndex{0.0}, eig);
  const double nv = sobolev_norm(z.v, SobolevIndex{-1.0}, eig);
  return std::sqrt(nu * nu + mu * nv * nv);
}

SpectralField project(const SpectralField& field, int m) {
  if (m < 0 || m > field.modes()) throw std::invalid_argument("project: m out of range");
  SpectralField out = field;
  out.coeffs.tail(field.modes() - m).setZero();
  return out;
}

CollocationTransform::CollocationTransform(int n_modes, int grid_size, double L)
    : n_modes_(n_modes), grid_size_(grid_size) {
  if (L <= 0.0) throw std::invalid_argument("CollocationTransform: L must be positive");
  if (n_modes < 1) throw std::invalid_argument("CollocationTransform: need at least one mode");
  if (grid_size < n_modes)
    throw std::invalid_argument("CollocationTransform: grid smaller than truncation");
  const double norm = std::sqrt(2.0 / L);
  forward_.resize(grid_size, n_modes);
  points_.resize(grid_size);
  for (int j = 0; j < grid_size; ++j) {
    points_[j] = (j + 1) * L / (grid_size + 1);
    for (int k = 0; k < n_modes; ++k)
      forward_(j, k) = norm * std::sin((k + 1) * std::numbers::pi * double(j + 1) / (grid_size + 1));
  }
  // Discrete sine orthogonality: sum_j sin(k pi j/(m+1)) sin(l pi j/(m+1)) = (m+1)/2 delta_kl.
  inverse_ = (L / (grid_size + 1)) * forward_.transpose();
}

Eigen::VectorXcd CollocationTransform::synthesize(const Eigen::VectorXcd& coeffs) const {
  if (coeffs.size() != n_modes_) throw std::invalid_argument("synthesize: coefficient count mismatch");
  Eigen::VectorXcd out(grid_size_);
  out.real() = forward_ * coeffs.real();
  out.imag() = forward_ * coeffs.imag();
  return out;
}

Eigen::VectorXcd CollocationTransform::analyze(const Eigen::VectorXcd& values) const {
  if (values.size() != grid_size_) throw std::invalid_argument("analyze: grid size mismatch");
  Eigen::VectorXcd out(n_modes_);
  out.real() = inverse_ * values.real();
  out.imag() = inverse_ * values.imag();
  return out;
}

Eigen::VectorXcd synthesize(const SpectralField& field, int grid_size, double L) {
  CollocationTransform t(field.modes(), grid_size, L);
  return t.synthesize(field.coeffs);
}

SpectralField analyze(const Eigen::VectorXcd& values, double L) {
  const int m = static_cast<int>(values.size());
  CollocationTransform t(m, m, L);
  return SpectralField(t.analyze(values));
}

}  // namespace skm

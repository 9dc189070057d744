#pragma once

#include <Eigen/Dense>

#include <complex>

#include "skm/errors.hpp"

namespace skm {

using Complex = std::complex<double>;

/// Dirichlet-Laplacian eigenvalues 0 < alpha_1 <= alpha_2 <= ... driving all
/// per-mode dynamics. Each spatial mode carries one planar (R^2) coefficient;
/// the doubled basis e_{2k-1} = (e_k, 0), e_{2k} = (0, e_k) shares alpha_k.
struct EigenSequence {
  enum class Source { DirichletInterval, ExplicitList, PowerLaw };

  Eigen::VectorXd values;
  Source source = Source::ExplicitList;
  double length = 0.0;  // interval length when source == DirichletInterval

  int size() const { return static_cast<int>(values.size()); }
  double operator[](int k) const { return values[k]; }  // zero-based spatial mode
};

EigenSequence dirichlet_eigens(double L, int n);
EigenSequence explicit_eigens(Eigen::VectorXd values);
EigenSequence power_law_eigens(double c, double q, int n);

/// Sobolev exponent on the eigenvalues: |u|_{H^theta}^2 = sum alpha_k^theta |c_k|^2.
struct SobolevIndex {
  double theta = 0.0;
};

/// Truncated planar field: c_k = <u, e_{2k-1}> + i <u, e_{2k}>, k = 1..n.
struct SpectralField {
  Eigen::VectorXcd coeffs;

  SpectralField() = default;
  explicit SpectralField(Eigen::VectorXcd c) : coeffs(std::move(c)) {}
  static SpectralField zero(int n) { return SpectralField(Eigen::VectorXcd::Zero(n)); }

  int modes() const { return static_cast<int>(coeffs.size()); }
  bool is_finite() const { return coeffs.allFinite(); }
};

SpectralField operator+(const SpectralField& a, const SpectralField& b);
SpectralField operator-(const SpectralField& a, const SpectralField& b);
SpectralField operator*(double s, const SpectralField& a);

/// State of the second-order system: (u, v) in H^theta x H^{theta-1}.
struct PhasePoint {
  SpectralField u;
  SpectralField v;

  PhasePoint() = default;
  PhasePoint(SpectralField u_, SpectralField v_);
  static PhasePoint zero(int n) { return {SpectralField::zero(n), SpectralField::zero(n)}; }

  int modes() const { return u.modes(); }
};

PhasePoint operator-(const PhasePoint& a, const PhasePoint& b);

double sobolev_norm(const SpectralField& field, SobolevIndex theta, const EigenSequence& eig);
double phase_norm(const PhasePoint& z, SobolevIndex theta, const EigenSequence& eig);

/// Mass-weighted phase norm |(x,y)|^2 = |x|_H^2 + mu |y|_{H^{-1}}^2 in which
/// the frictionless group S_mu^0 is an isometry.
double weighted_phase_norm(const PhasePoint& z, double mu, const EigenSequence& eig);

/// Galerkin projection: zero every spatial mode with index > m. Idempotent.
SpectralField project(const SpectralField& field, int m);

/// Dense sine-collocation transform pair on the interval (0, L) with interior
/// points xi_j = j L / (m+1), j = 1..m. synthesize evaluates
/// sum_k c_k sqrt(2/L) sin(k pi xi / L); analyze is its left inverse on fields
/// truncated to at most m modes.
class CollocationTransform {
 public:
  CollocationTransform(int n_modes, int grid_size, double L);

  Eigen::VectorXcd synthesize(const Eigen::VectorXcd& coeffs) const;
  Eigen::VectorXcd analyze(const Eigen::VectorXcd& values) const;  // returns n_modes coeffs

  int modes() const { return n_modes_; }
  int grid_size() const { return grid_size_; }
  const Eigen::VectorXd& points() const { return points_; }

 private:
  int n_modes_;
  int grid_size_;
  Eigen::MatrixXd forward_;  // grid_size x n_modes
  Eigen::MatrixXd inverse_;  // n_modes x grid_size
  Eigen::VectorXd points_;
};

Eigen::VectorXcd synthesize(const SpectralField& field, int grid_size, double L);
SpectralField analyze(const Eigen::VectorXcd& values, double L);

}  // namespace skm

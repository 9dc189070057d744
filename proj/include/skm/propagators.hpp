#pragma once

#include <Eigen/Dense>

#include <vector>

#include "skm/spectral.hpp"

namespace skm {

/// J_eps = J_0 + eps I with J_0 = [[0, 1], [-1, 0]]. Under the identification
/// (c1, c2) <-> c1 + i c2 the matrix J_eps acts as multiplication by eps - i
/// and J_eps^{-1} as multiplication by (eps + i) / (1 + eps^2).
struct FrictionMatrix {
  double eps = 0.0;

  Eigen::Matrix2d matrix() const;
  Eigen::Matrix2d inverse() const;
  Complex complex_action() const { return {eps, -1.0}; }
  Complex inverse_complex_action() const { return Complex(eps, 1.0) / (1.0 + eps * eps); }
};

/// e^{t J_eps^{-1}} = e^{eps t/(1+eps^2)} rotation(t/(1+eps^2)).
Eigen::Matrix2d exp_j_scaled(double eps, double t);
Complex exp_j_scaled_complex(double eps, double t);

/// One spatial mode of the phase state, complexified: u = u1 + i u2.
struct ModeState {
  Complex u{0.0, 0.0};
  Complex v{0.0, 0.0};
};

/// Exact flow of mu u'' + J_eps u' = -alpha u on one mode, as the complex 2x2
/// matrix mapping (u, v) at time 0 to time t. t may be negative (group).
struct ModePropagator {
  double mu, eps, alpha, t;
  Eigen::Matrix2cd matrix;

  Eigen::Matrix4d real_matrix() const;  // state order (u1, u2, v1, v2)
};

ModePropagator second_order_propagator(double mu, double eps, double alpha, double t);

/// Generator of the complexified mode system, and its scaling-and-squaring
/// exponential (the confluent-root fallback path, also used for cross-checks).
Eigen::Matrix2cd second_order_generator(double mu, double eps, double alpha);
Eigen::Matrix2cd second_order_exponential_taylor(double mu, double eps, double alpha, double t);

ModeState apply(const ModePropagator& p, ModeState s);

/// Mode-by-mode application of the group S_mu^eps(t).
PhasePoint apply_S_mu_eps(double mu, double eps, double t, const PhasePoint& z,
                          const EigenSequence& eig);

/// Mode-by-mode application of T_eps(t); eps = 0 gives the isometry T_0(t).
SpectralField apply_T_eps(double eps, double t, const SpectralField& u, const EigenSequence& eig);

/// (1/mu) int_0^t Pi_1 S_mu^eps(t-s)(0, psi(s)) ds for psi sampled uniformly on
/// [0, t] (odd sample count; composite Simpson). Throws RefinementRequired when
/// the sample spacing exceeds mu/10.
SpectralField duhamel_second_order(double mu, double eps, const std::vector<SpectralField>& psi,
                                   double t, const EigenSequence& eig);

/// int_0^t T_eps(t-s) J_eps^{-1} psi(s) ds, same sampling conventions.
SpectralField duhamel_first_order(double eps, const std::vector<SpectralField>& psi, double t,
                                  const EigenSequence& eig);

}  // namespace skm

#pragma once

#include "skm/propagators.hpp"
#include "skm/spectral.hpp"

namespace skm {

/// Defect functionals for the exact identities and bound envelopes of the
/// linear theory. Every checker returns a signed defect (or measured/bound
/// pair); tolerances live with the callers so they are configured once.

struct GapResult {
  double measured = 0.0;
  double bound = 0.0;
};

struct IntegralBound {
  double integral_value = 0.0;
  double reference = 0.0;
};

/// Energy identity I: defect of
///   mu |v(t)|^2/alpha + |u(t)|^2 + (2 eps/alpha) int_0^t |v|^2 ds
///     - (mu |y|^2/alpha + |x|^2)
/// on a single mode (the theta-independent per-mode form). The time integral
/// uses composite Simpson on quad_steps intervals with a half-step Richardson
/// guard (disagreement above 1e-6 relative throws RefinementRequired).
double energy_identity_defect(double mu, double eps, double alpha, ModeState z0, double t,
                              int quad_steps = 4096);

/// Energy identity II: defect of
///   mu |u(t)|^2 + |mu v(t) + J_eps u(t)|^2/alpha + 2 eps int_0^t |u|^2 ds
///     - (mu |x|^2 + |mu y + J_eps x|^2/alpha).
double energy_identity2_defect(double mu, double eps, double alpha, ModeState z0, double t,
                               int quad_steps = 4096);

/// |Pi_1 S_mu^eps(t)(0,y)|_{H^theta} - 2^gamma mu^{(1+gamma)/2} |y|_{H^{theta+gamma-1}}
/// on one mode; must be <= 0 for gamma in [0,1].
double damped_component_defect(double mu, double eps, double theta, double gamma, double alpha,
                               Complex y, double t);

/// Default sup-grid resolution: 2048 points per unit time and at least 20
/// points per mu (the second-order oscillation scale).
int sup_grid_points(double T, double mu);

/// sup_{t in [0,T]} |Pi_1 S_mu^eps(t)(x,0) - T_eps(t) x|_H on one mode versus
/// the Gronwall envelope (mu/eps) alpha |x| e^{alpha T}.
GapResult semigroup_gap_mu(double mu, double eps, double alpha, Complex x, double T,
                           int grid_points = 0);

/// sup_{t in [t0,T]} |(1/mu) Pi_1 S_mu^eps(t)(0,y) - T_eps(t) J_eps^{-1} y|_H
/// versus (e^{-eps t0/mu} + mu alpha/eps) |y| e^{alpha T}.
GapResult semigroup_gap_mu_velocity(double mu, double eps, double alpha, Complex y, double t0,
                                    double T, int grid_points = 0);

/// |S_mu^eps(t) z - S_mu^0(t) z|_{H(mu)} versus (eps t/mu) |z|_{H(mu)}.
GapResult semigroup_gap_eps(double mu, double eps, const PhasePoint& z, double t,
                            const EigenSequence& eig);

/// Truncated weighted integral int_0^T s^{-delta} |Pi_1 S_mu^eps(s) Q_mu e_k|_H^2 ds
/// (singularity removed by the substitution s = tau^{1/(1-delta)});
/// reference = lambda^2 / alpha^{1-delta} for scaling studies.
IntegralBound weighted_integral_bound(double mu, double eps, double delta, double alpha,
                                      double lambda, double T_upper, int quad_steps = 8192);

/// First-order variant int_0^T s^{-delta} |T_eps(s) Q_eps e_k|_H^2 ds; the
/// reference is the exact bound T^{1-delta} lambda^2 / (1-delta).
IntegralBound weighted_integral_bound_first_order(double eps, double delta, double alpha,
                                                  double lambda, double T, int quad_steps = 8192);

/// |T_0(t) u|_{H^theta} - |u|_{H^theta}; rotations are orthogonal up to rounding.
double t0_isometry_defect(const SpectralField& u, double theta, double t, const EigenSequence& eig);

/// Operator-norm distance ||J_eps^{-1} - J_0^{-1}|| = eps / sqrt(1 + eps^2).
double j_inverse_gap(double eps);

}  // namespace skm

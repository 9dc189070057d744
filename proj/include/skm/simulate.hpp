#pragma once

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <vector>

#include "skm/noise.hpp"
#include "skm/propagators.hpp"
#include "skm/spectral.hpp"

namespace skm {

/// Uniform time grid. Second-order runs additionally require dt <= mu/10
/// (the oscillation scale), enforced by validate_second_order.
struct SimGrid {
  double T = 1.0;
  double dt = 1e-2;
  int n_modes = 1;
  int collocation_size = 0;  // 0 -> 2 * n_modes
  double p = 2.0;

  int steps() const;
  int colloc() const { return collocation_size > 0 ? collocation_size : 2 * n_modes; }
  void validate_second_order(double mu) const;
};

/// Shared physics of one experiment: spectrum, coefficients, initial data.
struct SimConfig {
  EigenSequence eig;
  NoiseSpec noise;
  DriftSpec drift;
  DiffusionSpec diffusion;
  SpectralField u0;
  SpectralField v0;
};

enum class SystemKind { SecondOrder, FirstOrder };

struct SystemSpec {
  SystemKind kind = SystemKind::SecondOrder;
  double mu = 1.0;   // second order only
  double eps = 0.0;
};

/// Per-step exact Gaussian of the linear additive mode: covariance of
/// int_0^dt S_mu^eps(dt-s) Q_mu dW(s) in state order (u1, u2, v1, v2), plus a
/// symmetric PSD factor for sampling.
struct StepCovariance {
  Eigen::Matrix4d cov;
  Eigen::Matrix4d factor;
};

StepCovariance step_covariance(double mu, double eps, double alpha, double lambda, double dt);

/// Per-step covariance actually realized by the within-step basis expansion
/// the simulator samples from, in the same state order. First-order systems
/// occupy the position block only. Agrees with step_covariance up to the
/// basis truncation residual; exposed so that agreement stays testable.
Eigen::Matrix4d expansion_step_covariance(const SystemSpec& sys, double alpha, double lambda,
                                          double dt);

/// Number of orthonormal within-step basis functions used to realize the
/// Wiener path; kernels must be resolved to kNoiseResidualTol in L^2[0, dt].
inline constexpr int kNoiseExpansionOrder = 8;
inline constexpr double kNoiseResidualTol = 1e-6;

/// Advances several linear-plus-Nemytskii systems on one shared Wiener path
/// with exponential-Euler steps: exact group propagation, left-endpoint drift
/// and multiplicative noise, exact (basis-projected) additive noise.
class CoupledSimulator {
 public:
  CoupledSimulator(std::vector<SystemSpec> systems, const SimConfig& cfg, const SimGrid& grid);

  int systems() const { return static_cast<int>(specs_.size()); }
  const SystemSpec& spec(int i) const { return specs_[i]; }

  /// Observer runs at every grid time, including step 0 (initial data).
  using Observer = std::function<void(int step, double t, const CoupledSimulator&)>;

  void run(const WienerLanes& lanes, const Observer& observe);
  void run(PathSeed seed, const Observer& observe);

  const Eigen::VectorXcd& position(int sys) const { return state_u_[sys]; }
  const Eigen::VectorXcd& velocity(int sys) const;  // second order only

 private:
  void precompute();
  void check_stability(int sys, int step, double t) const;

  std::vector<SystemSpec> specs_;
  const SimConfig* cfg_;
  SimGrid grid_;

  // per system, per mode
  std::vector<Eigen::Matrix2cd> prop_;      // second order, flattened [sys][mode]
  std::vector<Complex> rot_;                // first order, flattened
  std::vector<Eigen::VectorXcd> state_u_;
  std::vector<Eigen::VectorXcd> state_v_;
  // additive noise tables, flattened [sys][mode][j]
  std::vector<Complex> noise_u_;
  std::vector<Complex> noise_v_;
  int needed_lanes_ = 2;
  std::unique_ptr<CollocationTransform> colloc_;
};

struct SecondOrderTrajectory {
  std::vector<double> times;
  std::vector<PhasePoint> states;
};

struct FirstOrderTrajectory {
  std::vector<double> times;
  std::vector<SpectralField> states;
};

SecondOrderTrajectory simulate_second_order(double mu, double eps, const SimConfig& cfg,
                                            const SimGrid& grid, PathSeed seed);

FirstOrderTrajectory simulate_first_order(double eps, const SimConfig& cfg, const SimGrid& grid,
                                          PathSeed seed);

/// max over grid times of |Pi_1 z_mu^eps(t) - u_eps(t)|_H^p on the identical
/// Wiener path (the coupled Smoluchowski-Kramers error of one sample).
double coupled_sup_error(double mu, double eps, const SimConfig& cfg, const SimGrid& grid,
                         PathSeed seed, double p);

}  // namespace skm

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "skm/spectral.hpp"

namespace skm {

/// Identifies one Monte Carlo path. All randomness is a pure function of
/// (master_seed, path_id, mode, lane, step), independent of evaluation order.
struct PathSeed {
  std::uint64_t master_seed = 1;
  std::uint32_t path_id = 1;
};

namespace detail {
std::uint64_t mix64(std::uint64_t x);
}

/// Counter-based standard-normal lanes for one (seed, path, mode) stream.
/// Lane pairs (2a, 2a+1) hold the two planar components of the a-th
/// orthonormal within-step basis coefficient of the driving Wiener path;
/// pair 0 is the plain increment scaled by 1/sqrt(dt).
class NoiseStream {
 public:
  NoiseStream(PathSeed seed, int mode);

  /// Fills out[0..lanes) with the lane values at the given step.
  void fill(std::uint32_t step, int lanes, double* out) const;

 private:
  std::uint64_t key_;
};

/// Abstract lane source, so refined paths can be coarsened consistently
/// (coarse increments are sums of fine ones) for step-size studies.
class WienerLanes {
 public:
  virtual ~WienerLanes() = default;
  virtual void fill(int mode, std::uint32_t step, int lanes, double* out) const = 0;
};

class CounterLanes final : public WienerLanes {
 public:
  CounterLanes(PathSeed seed, int n_modes);
  void fill(int mode, std::uint32_t step, int lanes, double* out) const override;

 private:
  std::vector<NoiseStream> streams_;
};

/// Aggregates `factor` fine steps into one coarse step. Only the increment
/// lanes (0, 1) are defined; higher lanes are unavailable by construction.
class CoarsenedLanes final : public WienerLanes {
 public:
  CoarsenedLanes(const WienerLanes& fine, int factor);
  void fill(int mode, std::uint32_t step, int lanes, double* out) const override;

 private:
  const WienerLanes& fine_;
  int factor_;
};

/// i.i.d. N(0, dt) Brownian increments for one mode component.
std::vector<double> brownian_increments(PathSeed seed, int mode, int component, int steps,
                                        double dt);

/// Diagonal noise covariance: Q e = lambda_k e on both planar components of
/// spatial mode k. Class flags mirror the regularity hypotheses the runs rely
/// on: H5 (weighted square-summability with exponent delta), H6 (trace class),
/// H7 (bounded).
struct NoiseSpec {
  enum class Law { Explicit, Power };

  Eigen::VectorXd lambda;
  Law law = Law::Explicit;
  double power_r = 0.0;

  std::optional<double> h5_delta;
  bool h6_trace_class = false;
  bool h7_bounded = false;

  int modes() const { return static_cast<int>(lambda.size()); }
  bool is_zero() const { return lambda.size() == 0 || lambda.cwiseAbs().maxCoeff() == 0.0; }

  static NoiseSpec zero(int n);
  static NoiseSpec power(double r, int n);
  static NoiseSpec explicit_list(Eigen::VectorXd lambda);
};

struct NoiseValidation {
  bool h5_ok = true;
  bool h6_ok = true;
  bool h7_ok = true;
  double trace_sum = 0.0;   // truncated sum of lambda_k^2 (both components)
  double h5_sum = 0.0;      // truncated sum of lambda_k^2 / alpha_k^{1-delta}
  std::string notes;
  bool all_ok() const { return h5_ok && h6_ok && h7_ok; }
};

/// Checks the declared class flags against the sequence: truncated sums always,
/// analytic tail tests when both noise and spectrum follow power laws.
NoiseValidation validate_noise(const NoiseSpec& noise, const EigenSequence& eig);

/// Nemytskii drift b(u) applied pointwise in physical space; Zero and Linear
/// have exact spectral shortcuts.
struct DriftSpec {
  enum class Kind { Zero, Linear, Sine, Custom };

  Kind kind = Kind::Zero;
  double amplitude = 0.0;
  double kappa_B = 0.0;  // declared Lipschitz bound (Hypothesis H2 contract)
  std::function<Complex(Complex u, double xi, double t)> custom;

  bool needs_collocation() const { return kind == Kind::Sine || kind == Kind::Custom; }

  static DriftSpec zero();
  static DriftSpec linear(double a);
  static DriftSpec sine(double a);
};

Complex drift_pointwise(const DriftSpec& drift, Complex u, double xi, double t);

/// Diffusion coefficient: identity (additive) or diagonal Nemytskii
/// g(u) = diag(1 + a sin u1, 1 + a sin u2) acting pointwise (d = 1 only).
/// Custom tables may depend on time; the built-ins are autonomous.
struct DiffusionSpec {
  enum class Kind { AdditiveIdentity, DiagonalNemytskii, Custom };

  Kind kind = Kind::AdditiveIdentity;
  double amplitude = 0.0;
  double kappa_G = 0.0;  // declared Lipschitz bound (Hypothesis H3 contract)
  std::function<Complex(Complex u, Complex z, double xi, double t)> custom;

  bool multiplicative() const { return kind != Kind::AdditiveIdentity; }

  static DiffusionSpec additive();
  static DiffusionSpec nemytskii_sine(double a);
};

Complex diffusion_pointwise(const DiffusionSpec& g, Complex u, Complex z, double xi, double t);

}  // namespace skm

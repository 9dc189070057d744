// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one pass/fail line per criterion. Exit code is the number of
// failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "skm/commands.hpp"
#include "skm/experiments.hpp"
#include "skm/invariants.hpp"
#include "skm/verification.hpp"

using namespace skm;

namespace {

constexpr std::uint64_t kSeed = 20240814;

struct Criterion {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

double now_seconds() {
  using clock = std::chrono::steady_clock;
  static const clock::time_point t0 = clock::now();
  return std::chrono::duration<double>(clock::now() - t0).count();
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

Criterion from_check(const std::string& name, const CheckResult& c, double budget_s,
                     double seconds) {
  Criterion out{name, c.pass, "worst=" + fmt(c.worst) + " tol=" + fmt(c.tolerance) +
                                  (c.detail.empty() ? "" : " " + c.detail),
                seconds};
  if (budget_s > 0.0 && seconds > budget_s) {
    out.pass = false;
    out.detail += " (over " + fmt(budget_s) + " s budget)";
  }
  return out;
}

// ---------------------------------------------------------------------------
// shared experiment configurations
// ---------------------------------------------------------------------------

ExperimentConfig desk_config(int n, double T, double dt, double noise_r) {
  ExperimentConfig cfg;
  cfg.sim.eig = dirichlet_eigens(std::numbers::pi, n);
  cfg.sim.noise = NoiseSpec::power(noise_r, n);
  cfg.sim.drift = DriftSpec::zero();
  cfg.sim.diffusion = DiffusionSpec::additive();
  cfg.sim.u0 = SpectralField::zero(n);
  for (int k = 0; k < n; ++k) cfg.sim.u0.coeffs[k] = Complex(1.0 / (k + 1), 0.0);
  cfg.sim.v0 = SpectralField::zero(n);
  cfg.grid = SimGrid{T, dt, n, 2 * n, 2.0};
  cfg.master_seed = kSeed;
  cfg.threads = 0;
  return cfg;
}

std::string row_summary(const SweepTable& t) {
  std::string s = "estimates";
  for (const auto& r : t.rows) s += " " + fmt(r.estimate);
  return s;
}

// ---------------------------------------------------------------------------
// criterion 7: the counterexample and the frictionless floor
// ---------------------------------------------------------------------------

Criterion criterion_counterexample() {
  const double t_start = now_seconds();

  const double mu = 1e-3, t = 1.0;
  const int steps = 20000;  // dt = 5e-5 = mu/20
  const VarianceCheck vc = counterexample_variance(mu, t, steps, 20000, kSeed);
  const bool variance_ok = std::abs(vc.empirical_var - vc.closed_form) <= 3.0 * vc.std_error;

  ExperimentConfig cfg = desk_config(1, 0.5, 1e-3, 0.0);
  cfg.sim.noise = NoiseSpec::explicit_list((Eigen::VectorXd(1) << 1.0).finished());
  cfg.sim.u0.coeffs[0] = Complex(1.0, 0.0);
  const std::vector<double> mus{1e-2, 1e-3, 1e-4};
  const SweepTable floor = failure_floor(mus, cfg, 500);
  bool bounds_positive = true;
  for (const auto& r : floor.rows) bounds_positive = bounds_positive && r.lower95 > 0.0;
  const bool no_decay = floor.rows.back().lower95 >= 0.5 * floor.rows.front().lower95;

  // contrast: with friction the same configuration does converge
  ExperimentConfig contrast = cfg;
  contrast.grid.dt = 1e-5;
  const SweepTable conv = mu_sweep(0.5, mus, contrast, 200);
  const bool contrast_ok =
      conv.rows.back().estimate < conv.rows.front().estimate / 10.0 && bounds_positive;

  const double secs = now_seconds() - t_start;
  Criterion out;
  out.name = "07 counterexample-and-floor";
  out.pass = variance_ok && bounds_positive && no_decay && contrast_ok && secs < 120.0;
  out.detail = "var=" + fmt(vc.empirical_var) + " ref=" + fmt(vc.closed_form) + " se=" +
               fmt(vc.std_error) + "; floor lower bounds " + fmt(floor.rows.front().lower95) +
               ".." + fmt(floor.rows.back().lower95) + "; friction contrast " +
               fmt(conv.rows.front().estimate) + "->" + fmt(conv.rows.back().estimate);
  out.seconds = secs;
  return out;
}

// ---------------------------------------------------------------------------
// criterion 8: additive small-mass limit at desk scale
// ---------------------------------------------------------------------------

Criterion criterion_additive_limit() {
  const double t_start = now_seconds();
  ExperimentConfig cfg = desk_config(32, 0.5, 2.5e-4, 1.0);
  cfg.sim.drift = DriftSpec::sine(1.0);
  const SweepTable table = mu_sweep(0.5, {1e-1, 3e-2, 1e-2, 3e-3}, cfg, 200);

  const bool monotone = monotone_within_2se(table);
  const bool final_tenth = final_fraction_of_initial(table, 0.1);
  const double secs = now_seconds() - t_start;

  Criterion out;
  out.name = "08 additive-small-mass-limit";
  out.pass = monotone && final_tenth && secs < 600.0;
  out.detail = row_summary(table) + (monotone ? "" : " NOT-MONOTONE") +
               (final_tenth ? "" : " FLOOR-TOO-HIGH");
  out.seconds = secs;
  return out;
}

// ---------------------------------------------------------------------------
// criterion 9: multiplicative small-mass limit (d = 1)
// ---------------------------------------------------------------------------

Criterion criterion_multiplicative_limit() {
  const double t_start = now_seconds();
  ExperimentConfig cfg = desk_config(32, 0.5, 2.5e-4, 1.0);
  cfg.sim.diffusion = DiffusionSpec::nemytskii_sine(0.5);
  const SweepTable table = mu_sweep(0.5, {1e-1, 3e-2, 1e-2, 3e-3}, cfg, 200);

  const bool monotone = monotone_within_2se(table);
  const bool final_fifth = final_fraction_of_initial(table, 0.2);
  const double secs = now_seconds() - t_start;

  Criterion out;
  out.name = "09 multiplicative-small-mass-limit";
  out.pass = monotone && final_fifth && secs < 1200.0;
  out.detail = row_summary(table) + (monotone ? "" : " NOT-MONOTONE") +
               (final_fifth ? "" : " FLOOR-TOO-HIGH");
  out.seconds = secs;
  return out;
}

// ---------------------------------------------------------------------------
// criterion 10: friction removal at desk scale
// ---------------------------------------------------------------------------

Criterion criterion_friction_removal() {
  const double t_start = now_seconds();
  const std::vector<double> eps_list{0.5, 0.2, 0.1, 0.05};
  ExperimentConfig cfg = desk_config(16, 1.0, 1.0 / 256.0, 1.0);

  const SweepTable first = eps_sweep_first_order(eps_list, cfg, 200);
  const bool first_monotone = monotone_within_2se(first);
  const bool first_quarter = final_fraction_of_initial(first, 0.25);

  const double mu = 0.5;
  const SweepTable second = eps_sweep_second_order(mu, eps_list, cfg, 200);
  const bool second_monotone = monotone_within_2se(second);

  // zero-noise rows must sit inside the deterministic gap envelope exactly
  ExperimentConfig quiet = cfg;
  quiet.sim.noise = NoiseSpec::zero(16);
  quiet.sim.v0.coeffs[3] = Complex(0.4, -0.2);
  const SweepTable envelope = eps_sweep_second_order(mu, eps_list, quiet, 1);
  const double z0 =
      weighted_phase_norm({quiet.sim.u0, quiet.sim.v0}, mu, quiet.sim.eig);
  bool envelope_ok = true;
  for (const auto& r : envelope.rows) {
    const double bound = (r.parameter * cfg.grid.T / mu) * z0;
    envelope_ok = envelope_ok && r.estimate <= bound * bound * (1.0 + 1e-10);
  }

  const double secs = now_seconds() - t_start;
  Criterion out;
  out.name = "10 friction-removal-limits";
  out.pass = first_monotone && first_quarter && second_monotone && envelope_ok;
  out.detail = "first " + row_summary(first) + "; second " + row_summary(second) +
               (envelope_ok ? "" : " ENVELOPE-VIOLATED");
  out.seconds = secs;
  return out;
}

// ---------------------------------------------------------------------------
// criterion 11: exact-Gaussian oracle equivalence
// ---------------------------------------------------------------------------

double ks_p_value(std::vector<double> samples, double sigma) {
  std::sort(samples.begin(), samples.end());
  const int n = static_cast<int>(samples.size());
  double d = 0.0;
  for (int i = 0; i < n; ++i) {
    const double f = 0.5 * std::erfc(-samples[i] / (sigma * std::numbers::sqrt2));
    d = std::max(d, std::max((i + 1.0) / n - f, f - double(i) / n));
  }
  const double x = d * (std::sqrt(double(n)) + 0.12 + 0.11 / std::sqrt(double(n)));
  double p = 0.0;
  for (int k = 1; k <= 100; ++k) p += 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * x * x);
  return std::clamp(p, 0.0, 1.0);
}

Criterion criterion_gaussian_oracle() {
  const double t_start = now_seconds();
  const double mu = 0.1, eps = 0.5, alpha = 1.0, lambda = 1.0, T = 1.0, dt = 1e-3;
  const int M = 20000;

  SimConfig sim;
  sim.eig = explicit_eigens((Eigen::VectorXd(1) << alpha).finished());
  sim.noise = NoiseSpec::explicit_list((Eigen::VectorXd(1) << lambda).finished());
  sim.u0 = SpectralField::zero(1);
  sim.v0 = SpectralField::zero(1);
  const SimGrid grid{T, dt, 1, 0, 2.0};
  const int steps = grid.steps();

  // oracle: iterated per-step exact covariance
  const Eigen::Matrix4d A = second_order_propagator(mu, eps, alpha, dt).real_matrix();
  const Eigen::Matrix4d C = step_covariance(mu, eps, alpha, lambda, dt).cov;
  Eigen::Matrix4d sigma = Eigen::Matrix4d::Zero();
  for (int i = 0; i < steps; ++i) sigma = A * sigma * A.transpose() + C;

  Eigen::Matrix4d sample = Eigen::Matrix4d::Zero();
  std::vector<std::vector<double>> coords(4, std::vector<double>(M));
  CoupledSimulator simr({SystemSpec{SystemKind::SecondOrder, mu, eps}}, sim, grid);
  for (int m = 0; m < M; ++m) {
    simr.run(PathSeed{kSeed, std::uint32_t(m + 1)}, nullptr);
    Eigen::Vector4d x;
    x << simr.position(0)[0].real(), simr.position(0)[0].imag(), simr.velocity(0)[0].real(),
        simr.velocity(0)[0].imag();
    sample += x * x.transpose();
    for (int c = 0; c < 4; ++c) coords[c][m] = x[c];
  }
  sample /= (M - 1);

  bool cov_ok = true;
  double worst_z = 0.0;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      const double se =
          std::sqrt((sigma(r, r) * sigma(c, c) + sigma(r, c) * sigma(r, c)) / (M - 1));
      const double z = std::abs(sample(r, c) - sigma(r, c)) / se;
      worst_z = std::max(worst_z, z);
      cov_ok = cov_ok && z <= 3.0;
    }

  bool ks_ok = true;
  double min_p = 1.0;
  for (int c = 0; c < 4; ++c) {
    const double p = ks_p_value(coords[c], std::sqrt(sigma(c, c)));
    min_p = std::min(min_p, p);
    ks_ok = ks_ok && p > 1e-3;
  }

  const double secs = now_seconds() - t_start;
  Criterion out;
  out.name = "11 exact-gaussian-oracle";
  out.pass = cov_ok && ks_ok;
  out.detail = "worst z=" + fmt(worst_z) + " min KS p=" + fmt(min_p);
  out.seconds = secs;
  return out;
}

// ---------------------------------------------------------------------------
// criterion 12: trace formula of the frictionless limit
// ---------------------------------------------------------------------------

Criterion criterion_trace_formula() {
  const double t_start = now_seconds();
  const int n = 16, M = 20000;
  const double T = 1.0;
  ExperimentConfig cfg = desk_config(n, T, 1.0 / 512.0, 1.0);

  double expected = 0.0;  // both planar components of each mode carry lambda_k
  for (int k = 1; k <= n; ++k) expected += 2.0 * T / double(k * k);

  const SpectralField drifted = apply_T_eps(0.0, T, cfg.sim.u0, cfg.sim.eig);
  double mean = 0.0, m2 = 0.0;
  CoupledSimulator sim({SystemSpec{SystemKind::FirstOrder, 0.0, 0.0}}, cfg.sim, cfg.grid);
  for (int m = 0; m < M; ++m) {
    sim.run(PathSeed{kSeed, std::uint32_t(m + 1)}, nullptr);
    const double x = (sim.position(0) - drifted.coeffs).squaredNorm();
    const double delta = x - mean;
    mean += delta / (m + 1);
    m2 += delta * (x - mean);
  }
  const double se = std::sqrt(m2 / (M - 1)) / std::sqrt(double(M));

  const double secs = now_seconds() - t_start;
  Criterion out;
  out.name = "12 trace-formula";
  out.pass = std::abs(mean - expected) <= 3.0 * se;
  out.detail = "mean=" + fmt(mean) + " expected=" + fmt(expected) + " se=" + fmt(se);
  out.seconds = secs;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string filter = argc > 1 ? argv[1] : "";
  std::vector<Criterion> results;

  auto timed_check = [&](const char* name, CheckResult (*fn)(std::uint64_t), double budget) {
    const double t0 = now_seconds();
    const CheckResult c = fn(kSeed);
    results.push_back(from_check(name, c, budget, now_seconds() - t0));
  };

  auto want = [&](const char* name) {
    return filter.empty() || std::string(name).find(filter) != std::string::npos;
  };

  if (want("01")) timed_check("01 energy-identities", check_energy_identities, 5.0);
  if (want("02")) timed_check("02 limit-group-isometry", check_t0_isometry, 0.0);
  if (want("03")) timed_check("03 friction-decay-envelope", check_friction_decay, 0.0);
  if (want("04")) timed_check("04 damped-component-envelope", check_damped_component, 0.0);
  if (want("05")) timed_check("05 small-mass-gap-rate", check_small_mass_gap, 10.0);
  if (want("06")) timed_check("06 friction-gap-envelope", check_friction_gap, 0.0);
  if (want("07")) results.push_back(criterion_counterexample());
  if (want("08")) results.push_back(criterion_additive_limit());
  if (want("09")) results.push_back(criterion_multiplicative_limit());
  if (want("10")) results.push_back(criterion_friction_removal());
  if (want("11")) results.push_back(criterion_gaussian_oracle());
  if (want("12")) results.push_back(criterion_trace_formula());

  int failures = 0;
  for (const auto& r : results) {
    std::printf("[%s] %-36s %7.1f s  %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.seconds,
                r.detail.c_str());
    if (!r.pass) ++failures;
  }
  std::printf("RESULT: %zu/%zu criteria passed\n", results.size() - failures, results.size());
  return failures;
}

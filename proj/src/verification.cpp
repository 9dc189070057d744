#include "skm/verification.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "skm/invariants.hpp"
#include "skm/noise.hpp"
#include "skm/propagators.hpp"
#include "skm/simulate.hpp"

namespace skm {

namespace {

SpectralField random_field(std::uint64_t seed, std::uint32_t id, int n) {
  NoiseStream stream(PathSeed{seed, id}, 0);
  Eigen::VectorXcd c(n);
  double lanes[2];
  for (int k = 0; k < n; ++k) {
    stream.fill(std::uint32_t(k), 2, lanes);
    c[k] = Complex(lanes[0], lanes[1]);
  }
  return SpectralField(c);
}

struct SlopeFit {
  double slope;
  double r_squared;
};

SlopeFit loglog_slope(const std::vector<double>& params, const std::vector<double>& values) {
  const int n = static_cast<int>(params.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double x = std::log(params[i]);
    const double y = std::log(values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / n;
  double ss_res = 0, ss_tot = 0;
  const double ybar = sy / n;
  for (int i = 0; i < n; ++i) {
    const double x = std::log(params[i]);
    const double y = std::log(values[i]);
    ss_res += (y - intercept - slope * x) * (y - intercept - slope * x);
    ss_tot += (y - ybar) * (y - ybar);
  }
  return {slope, ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0};
}

std::string format(double x) {
  std::ostringstream ss;
  ss.precision(3);
  ss << std::scientific << x;
  return ss.str();
}

}  // namespace

CheckResult check_energy_identities(std::uint64_t /*seed*/) {
  CheckResult r{"energy-identities", false, 0.0, 1e-8, ""};
  const double mus[] = {1.0, 0.1, 0.01};
  const double epss[] = {0.0, 0.1, 1.0};
  const double alphas[] = {1.0, 4.0, 25.0};
  const double ts[] = {0.0, 0.1, 1.0, 5.0};
  const ModeState z0{Complex(1.0, 0.3), Complex(-0.2, 0.5)};
  for (double mu : mus)
    for (double eps : epss)
      for (double alpha : alphas)
        for (double t : ts) {
          // resolve the fastest of oscillation sqrt(alpha/mu) and relaxation eps/mu
          const double rate = std::max({std::sqrt(alpha / mu), eps / mu, 1.0});
          const int quad = std::max(8192, 2 * static_cast<int>(std::ceil(1000.0 * t * rate)));
          const double d1 = std::abs(energy_identity_defect(mu, eps, alpha, z0, t, quad));
          const double d2 = std::abs(energy_identity2_defect(mu, eps, alpha, z0, t, quad));
          r.worst = std::max({r.worst, d1, d2});
        }
  r.pass = r.worst <= r.tolerance;
  r.detail = "108 grid cells, both identities";
  return r;
}

CheckResult check_t0_isometry(std::uint64_t seed) {
  CheckResult r{"isometry-of-the-limit-group", false, 0.0, 1e-12, "100 random fields"};
  const EigenSequence eig = dirichlet_eigens(std::numbers::pi, 16);
  const double ts[] = {0.1, 1.0, 10.0};
  const double thetas[] = {-1.0, 0.0, 1.0};
  for (std::uint32_t i = 0; i < 100; ++i) {
    const SpectralField u = random_field(seed, i + 1, 16);
    for (double t : ts)
      for (double theta : thetas) {
        const double ref = sobolev_norm(u, SobolevIndex{theta}, eig);
        const double defect = std::abs(t0_isometry_defect(u, theta, t, eig));
        r.worst = std::max(r.worst, defect / ref);
      }
  }
  r.pass = r.worst <= r.tolerance;
  return r;
}

CheckResult check_friction_decay(std::uint64_t seed) {
  CheckResult r{"friction-decay-envelope", false, -1.0, 1e-12, "512-point t-grid"};
  const EigenSequence eig = dirichlet_eigens(std::numbers::pi, 16);
  const double epss[] = {0.1, 1.0, 10.0};
  for (std::uint32_t i = 0; i < 100; ++i) {
    const SpectralField u = random_field(seed ^ 0x51a7, i + 1, 16);
    const double nu = sobolev_norm(u, SobolevIndex{0.0}, eig);
    for (double eps : epss)
      for (int g = 0; g < 512; ++g) {
        const double t = 5.0 * g / 511.0;
        const double measured = sobolev_norm(apply_T_eps(eps, t, u, eig), SobolevIndex{0.0}, eig);
        const double bound = std::exp(-eps * eig[0] * t / (1.0 + eps * eps)) * nu;
        r.worst = std::max(r.worst, measured - bound);
      }
  }
  r.pass = r.worst <= r.tolerance;
  return r;
}

CheckResult check_damped_component(std::uint64_t /*seed*/) {
  CheckResult r{"damped-component-envelope", false, -1.0, 1e-10, ""};
  const double gammas[] = {0.0, 0.5, 1.0};
  const double thetas[] = {-1.0, 0.0};
  const double mus[] = {1e-1, 1e-2, 1e-3};
  const double epss[] = {0.0, 0.5};
  const double alphas[] = {1.0, 4.0, 25.0};
  const Complex y(0.8, -0.6);  // |y| = 1
  for (double gamma : gammas)
    for (double theta : thetas)
      for (double mu : mus)
        for (double eps : epss)
          for (double alpha : alphas)
            for (int g = 0; g <= 256; ++g) {
              const double t = 5.0 * g / 256.0;
              r.worst = std::max(
                  r.worst, damped_component_defect(mu, eps, theta, gamma, alpha, y, t));
            }
  r.pass = r.worst <= r.tolerance;
  r.detail = "gamma x theta x mu x eps x alpha grid, t in [0,5]";
  return r;
}

CheckResult check_small_mass_gap(std::uint64_t /*seed*/) {
  CheckResult r{"small-mass-gap-envelope", false, -1.0, 0.0, ""};
  const double eps = 0.5, alpha = 1.0, T = 1.0;
  const Complex x(1.0, 0.0);
  std::vector<double> mus, sups;
  bool monotone = true;
  double prev = -1.0;
  for (int e = 3; e <= 12; ++e) {
    const double mu = std::pow(2.0, -e);
    const GapResult gap = semigroup_gap_mu(mu, eps, alpha, x, T);
    mus.push_back(mu);
    sups.push_back(gap.measured);
    r.worst = std::max(r.worst, gap.measured - gap.bound);
    if (prev >= 0.0 && gap.measured > prev) monotone = false;
    prev = gap.measured;
  }
  const SlopeFit fit = loglog_slope(mus, sups);
  const bool slope_ok = fit.slope >= 0.8 && fit.slope <= 1.2;
  r.pass = r.worst <= 0.0 && slope_ok && monotone;
  r.detail = "slope=" + format(fit.slope) + " monotone=" + (monotone ? "yes" : "no");
  return r;
}

CheckResult check_small_mass_gap_velocity(std::uint64_t /*seed*/) {
  // velocity-impulse variant, checked away from the t = 0 boundary layer only
  CheckResult r{"small-mass-gap-velocity-envelope", false, -1.0, 0.0, ""};
  const double eps = 1.0, alpha = 1.0, t0 = 0.1, T = 1.0;
  const Complex y(1.0, 0.0);
  double prev = 1e9;
  bool monotone = true;
  for (double mu : {1e-2, 1e-3, 1e-4}) {
    const GapResult gap = semigroup_gap_mu_velocity(mu, eps, alpha, y, t0, T);
    r.worst = std::max(r.worst, gap.measured - gap.bound);
    if (gap.measured > prev) monotone = false;
    prev = gap.measured;
  }
  r.pass = r.worst <= 0.0 && monotone;
  r.detail = monotone ? "decreasing in mu" : "NOT decreasing";
  return r;
}

CheckResult check_friction_gap(std::uint64_t seed) {
  CheckResult r{"friction-gap-envelope", false, -1.0, 0.0, ""};
  const EigenSequence eig = dirichlet_eigens(std::numbers::pi, 16);
  const PhasePoint z{random_field(seed ^ 0xf00d, 1, 16), random_field(seed ^ 0xf00d, 2, 16)};
  const double mus[] = {0.5, 0.1};
  const double ts[] = {0.5, 1.0};
  double min_slope = 10.0;
  for (double mu : mus)
    for (double t : ts) {
      std::vector<double> epss, gaps;
      for (int e = 1; e <= 4; ++e) {
        const double eps = std::pow(10.0, -e);
        const GapResult gap = semigroup_gap_eps(mu, eps, z, t, eig);
        r.worst = std::max(r.worst, gap.measured - gap.bound * (1.0 + 1e-10));
        epss.push_back(eps);
        gaps.push_back(gap.measured);
      }
      min_slope = std::min(min_slope, loglog_slope(epss, gaps).slope);
    }
  r.pass = r.worst <= 0.0 && min_slope >= 0.9;
  r.detail = "min slope=" + format(min_slope);
  return r;
}

CheckResult check_group_law(std::uint64_t seed) {
  CheckResult r{"group-law-and-code-paths", false, 0.0, 1e-10, ""};
  const double mus[] = {1.0, 0.1, 0.01};
  const double epss[] = {0.0, 0.1, 1.0};
  const double alphas[] = {1.0, 4.0, 25.0};
  NoiseStream stream(PathSeed{seed ^ 0x6a0, 1}, 0);
  double lanes[4];
  int id = 0;
  double worst4 = 0.0;
  for (double mu : mus)
    for (double eps : epss)
      for (double alpha : alphas) {
        stream.fill(std::uint32_t(id), 4, lanes);
        ++id;
        const ModeState z{Complex(lanes[0], lanes[1]), Complex(lanes[2], lanes[3])};
        // group law at t+s = 1.0
        const ModeState a = apply(second_order_propagator(mu, eps, alpha, 0.7),
                                  apply(second_order_propagator(mu, eps, alpha, 0.3), z));
        const ModeState b = apply(second_order_propagator(mu, eps, alpha, 1.0), z);
        const double scale = std::max(1.0, std::hypot(std::abs(b.u), std::abs(b.v)));
        r.worst = std::max(r.worst, std::hypot(std::abs(a.u - b.u), std::abs(a.v - b.v)) / scale);
        // identity at t = 0
        const ModeState c = apply(second_order_propagator(mu, eps, alpha, 0.0), z);
        r.worst = std::max(r.worst, std::hypot(std::abs(c.u - z.u), std::abs(c.v - z.v)));
        // closed form against the series exponential (confluent-fallback path);
        // relative, since repeated squaring amplifies rounding at stiff cells
        const Eigen::Matrix2cd closed = second_order_propagator(mu, eps, alpha, 0.37).matrix;
        const Eigen::Matrix2cd series = second_order_exponential_taylor(mu, eps, alpha, 0.37);
        const double rel = (closed - series).cwiseAbs().maxCoeff() /
                           std::max(1.0, closed.cwiseAbs().maxCoeff());
        worst4 = std::max(worst4, rel);
      }
  r.pass = r.worst <= r.tolerance && worst4 <= 1e-10;
  r.detail = "fallback agreement " + format(worst4);
  return r;
}

CheckResult check_integral_bounds(std::uint64_t /*seed*/) {
  CheckResult r{"weighted-integral-bounds", false, -1.0, 0.0, ""};
  const double delta = 0.5, eps = 0.5, lambda = 1.0;
  const double alphas[] = {1.0, 4.0, 25.0};
  double worst_ratio = 0.0;
  for (double alpha : alphas) {
    // mu-uniformity of the second-order weighted integral
    for (double mu : {1.0, 0.1, 0.01}) {
      const IntegralBound b = weighted_integral_bound(mu, eps, delta, alpha, lambda, 50.0);
      worst_ratio = std::max(worst_ratio, b.integral_value / b.reference);
    }
    // first-order variant against its exact lambda-flat bound
    const IntegralBound f = weighted_integral_bound_first_order(eps, delta, alpha, lambda, 2.0);
    r.worst = std::max(r.worst, f.integral_value - f.reference);
  }
  r.pass = r.worst <= 0.0 && worst_ratio < 20.0;
  r.detail = "sup integral/reference = " + format(worst_ratio);
  return r;
}

CheckResult check_j_inverse_limit(std::uint64_t /*seed*/) {
  CheckResult r{"friction-inverse-limit", false, 0.0, 1e-14, ""};
  for (double eps : {1.0, 0.5, 0.1, 1e-2, 1e-3}) {
    const Eigen::Matrix2d diff =
        FrictionMatrix{eps}.inverse() - FrictionMatrix{0.0}.inverse();
    const double norm = std::sqrt(diff.squaredNorm() / 2.0);  // aI + bJ has norm sqrt(a^2+b^2)
    r.worst = std::max(r.worst, std::abs(norm - j_inverse_gap(eps)));
    // envelope c * eps/(1+eps^2) with c = sqrt(2)
    if (norm > std::sqrt(2.0) * eps / (1.0 + eps * eps)) r.worst = std::max(r.worst, 1.0);
    // exp_j_scaled(t) exp_j_scaled(-t) = identity
    const Eigen::Matrix2d prod = exp_j_scaled(eps, 1.3) * exp_j_scaled(eps, -1.3);
    r.worst = std::max(r.worst, (prod - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff());
  }
  r.pass = r.worst <= r.tolerance;
  return r;
}

CheckResult check_interpolation(std::uint64_t seed) {
  CheckResult r{"interpolation-inequality", false, -1.0, 1e-12, "random fields"};
  const EigenSequence eig = dirichlet_eigens(std::numbers::pi, 16);
  for (std::uint32_t i = 0; i < 50; ++i) {
    const SpectralField u = random_field(seed ^ 0x1e44, i + 1, 16);
    for (double theta : {-1.0, 0.0, 0.5})
      for (double gamma : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        const double lhs = sobolev_norm(u, SobolevIndex{theta}, eig);
        const double a = sobolev_norm(u, SobolevIndex{theta + gamma - 1.0}, eig);
        const double b = sobolev_norm(u, SobolevIndex{theta + gamma}, eig);
        r.worst = std::max(r.worst, lhs - std::pow(a, gamma) * std::pow(b, 1.0 - gamma));
      }
  }
  r.pass = r.worst <= r.tolerance;
  return r;
}

std::vector<CheckResult> run_deterministic_checks(std::uint64_t seed) {
  return {
      check_energy_identities(seed),      check_t0_isometry(seed),
      check_friction_decay(seed),         check_damped_component(seed),
      check_small_mass_gap(seed),         check_small_mass_gap_velocity(seed),
      check_friction_gap(seed),           check_group_law(seed),
      check_integral_bounds(seed),        check_j_inverse_limit(seed),
      check_interpolation(seed),
  };
}

}  // namespace skm

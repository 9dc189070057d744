#include <doctest.h>

#include <cmath>
#include <numbers>

#include "skm/noise.hpp"
#include "skm/spectral.hpp"

using namespace skm;

TEST_CASE("brownian increments are a pure function of their keys") {
  const PathSeed seed{1234, 7};
  const auto a = brownian_increments(seed, 3, 1, 64, 0.01);
  const auto b = brownian_increments(seed, 3, 1, 64, 0.01);
  CHECK(a == b);  // bitwise

  const auto other_comp = brownian_increments(seed, 3, 2, 64, 0.01);
  const auto other_mode = brownian_increments(seed, 4, 1, 64, 0.01);
  const auto other_path = brownian_increments(PathSeed{1234, 8}, 3, 1, 64, 0.01);
  CHECK(a != other_comp);
  CHECK(a != other_mode);
  CHECK(a != other_path);

  CHECK_THROWS_AS(brownian_increments(seed, 0, 3, 8, 0.01), std::invalid_argument);
  CHECK_THROWS_AS(brownian_increments(seed, 0, 1, 8, -1.0), std::invalid_argument);
}

TEST_CASE("brownian increments match the N(0, dt) law") {
  const double dt = 0.02;
  const int n = 100000;
  const auto draws = brownian_increments(PathSeed{99, 1}, 0, 1, n, dt);
  double mean = 0.0;
  for (double x : draws) mean += x;
  mean /= n;
  double var = 0.0;
  for (double x : draws) var += (x - mean) * (x - mean);
  var /= (n - 1);

  CHECK(std::abs(mean) <= 4.0 * std::sqrt(dt / n));
  CHECK(var == doctest::Approx(dt).epsilon(0.05));
}

TEST_CASE("lane pairs are uncorrelated in practice") {
  NoiseStream stream(PathSeed{17, 1}, 0);
  double lanes[4];
  const int n = 50000;
  double c01 = 0.0, c02 = 0.0, c23 = 0.0;
  for (int i = 0; i < n; ++i) {
    stream.fill(std::uint32_t(i), 4, lanes);
    c01 += lanes[0] * lanes[1];
    c02 += lanes[0] * lanes[2];
    c23 += lanes[2] * lanes[3];
  }
  CHECK(std::abs(c01 / n) < 0.03);
  CHECK(std::abs(c02 / n) < 0.03);
  CHECK(std::abs(c23 / n) < 0.03);
}

TEST_CASE("coarsened lanes sum fine increments") {
  CounterLanes fine(PathSeed{41, 2}, 1);
  CoarsenedLanes coarse(fine, 4);
  double cl[2], fl[2];
  for (std::uint32_t step : {0u, 1u, 5u}) {
    coarse.fill(0, step, 2, cl);
    double acc0 = 0.0, acc1 = 0.0;
    for (std::uint32_t i = 0; i < 4; ++i) {
      fine.fill(0, step * 4 + i, 2, fl);
      acc0 += fl[0];
      acc1 += fl[1];
    }
    // coarse lane = sum of fine increments / sqrt(factor)
    CHECK(cl[0] == doctest::Approx(acc0 / 2.0).epsilon(1e-15));
    CHECK(cl[1] == doctest::Approx(acc1 / 2.0).epsilon(1e-15));
  }
  double big[4];
  CHECK_THROWS_AS(coarse.fill(0, 0, 4, big), std::invalid_argument);
}

TEST_CASE("noise class flags") {
  const EigenSequence eig = dirichlet_eigens(std::numbers::pi, 32);

  const NoiseSpec fast = NoiseSpec::power(1.0, 32);
  CHECK(fast.h6_trace_class);
  CHECK(fast.h7_bounded);
  CHECK(fast.h5_delta.has_value());
  CHECK(validate_noise(fast, eig).all_ok());

  const NoiseSpec slow = NoiseSpec::power(0.4, 32);
  CHECK_FALSE(slow.h6_trace_class);
  CHECK(slow.h7_bounded);
  CHECK(validate_noise(slow, eig).all_ok());

  NoiseSpec lying = NoiseSpec::power(0.4, 32);
  lying.h6_trace_class = true;  // declared but false
  CHECK_FALSE(validate_noise(lying, eig).h6_ok);

  NoiseSpec unbounded = NoiseSpec::power(-0.5, 32);
  CHECK_FALSE(unbounded.h7_bounded);
  unbounded.h7_bounded = true;
  CHECK_FALSE(validate_noise(unbounded, eig).h7_ok);

  const NoiseSpec z = NoiseSpec::zero(8);
  CHECK(z.is_zero());
  CHECK(validate_noise(z, eig).all_ok());

  CHECK_THROWS_AS(NoiseSpec::explicit_list((Eigen::VectorXd(2) << 1.0, -0.5).finished()),
                  std::invalid_argument);
}

TEST_CASE("time-dependent custom coefficient tables") {
  DriftSpec drift = DriftSpec::zero();
  drift.kind = DriftSpec::Kind::Custom;
  drift.custom = [](Complex u, double xi, double t) { return (xi + t) * u; };
  CHECK(drift_pointwise(drift, Complex(1.0, 2.0), 0.5, 0.25) == Complex(0.75, 1.5));

  DiffusionSpec g = DiffusionSpec::additive();
  g.kind = DiffusionSpec::Kind::Custom;
  g.custom = [](Complex, Complex z, double, double t) { return (1.0 + t) * z; };
  CHECK(g.multiplicative());
  CHECK(diffusion_pointwise(g, Complex(0.0), Complex(2.0, -2.0), 0.1, 1.0) ==
        Complex(4.0, -4.0));
}

TEST_CASE("declared Lipschitz bounds hold on sampled pairs") {
  const double L = std::numbers::pi;
  const int n = 8, m = 16;
  const CollocationTransform t(n, m, L);
  NoiseStream stream(PathSeed{55, 1}, 0);
  double lanes[2];
  auto draw_field = [&](std::uint32_t base) {
    Eigen::VectorXcd c(n);
    for (int k = 0; k < n; ++k) {
      stream.fill(base + k, 2, lanes);
      c[k] = Complex(lanes[0], lanes[1]);
    }
    return c;
  };

  const DriftSpec drift = DriftSpec::sine(1.0);
  const DiffusionSpec diffusion = DiffusionSpec::nemytskii_sine(0.5);

  for (std::uint32_t trial = 0; trial < 10000; ++trial) {
    const Eigen::VectorXcd x = draw_field(trial * 97 + 1);
    const Eigen::VectorXcd y = draw_field(trial * 97 + 48);
    const Eigen::VectorXcd xg = t.synthesize(x);
    const Eigen::VectorXcd yg = t.synthesize(y);

    Eigen::VectorXcd bx(m), by(m);
    for (int g = 0; g < m; ++g) {
      bx[g] = drift_pointwise(drift, xg[g], t.points()[g], 0.0);
      by[g] = drift_pointwise(drift, yg[g], t.points()[g], 0.0);
    }
    const double ratio_num = (t.analyze(bx) - t.analyze(by)).norm();
    const double dist = (x - y).norm();
    if (dist > 1e-9) CHECK(ratio_num <= drift.kappa_B * dist * (1.0 + 1e-9));

    // diffusion: |[G(x)-G(y)] z|_H <= kappa_G |x-y|_H |z|_inf
    const Eigen::VectorXcd z = draw_field(trial * 97 + 90);
    const Eigen::VectorXcd zg = t.synthesize(z);
    double z_inf = 0.0;
    for (int g = 0; g < m; ++g)
      z_inf = std::max({z_inf, std::abs(zg[g].real()), std::abs(zg[g].imag())});
    Eigen::VectorXcd gx(m), gy(m);
    for (int g = 0; g < m; ++g) {
      gx[g] = diffusion_pointwise(diffusion, xg[g], zg[g], t.points()[g], 0.0);
      gy[g] = diffusion_pointwise(diffusion, yg[g], zg[g], t.points()[g], 0.0);
    }
    const double gdist = (t.analyze(gx) - t.analyze(gy)).norm();
    if (dist > 1e-9) CHECK(gdist <= diffusion.kappa_G * dist * z_inf * (1.0 + 1e-9));
  }
}

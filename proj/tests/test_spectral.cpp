#include <doctest.h>

#include <numbers>

#include "skm/noise.hpp"
#include "skm/spectral.hpp"

using namespace skm;

namespace {

SpectralField random_field(std::uint64_t seed, int n) {
  NoiseStream stream(PathSeed{seed, 1}, 0);
  Eigen::VectorXcd c(n);
  double lanes[2];
  for (int k = 0; k < n; ++k) {
    stream.fill(std::uint32_t(k), 2, lanes);
    c[k] = Complex(lanes[0], lanes[1]);
  }
  return SpectralField(c);
}

}  // namespace

TEST_CASE("dirichlet eigenvalues on an interval") {
  const EigenSequence eig = dirichlet_eigens(std::numbers::pi, 3);
  CHECK(eig.size() == 3);
  CHECK(eig[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(eig[1] == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(eig[2] == doctest::Approx(9.0).epsilon(1e-15));

  CHECK(dirichlet_eigens(std::numbers::pi, 1)[0] == doctest::Approx(1.0));
  CHECK(dirichlet_eigens(2.0 * std::numbers::pi, 1)[0] == doctest::Approx(0.25));

  CHECK_THROWS_AS(dirichlet_eigens(-1.0, 3), std::invalid_argument);
  CHECK_THROWS_AS(dirichlet_eigens(1.0, 0), std::invalid_argument);
}

TEST_CASE("explicit and power-law eigenvalue sequences") {
  Eigen::VectorXd vals(3);
  vals << 1.0, 2.0, 2.0;
  CHECK(explicit_eigens(vals).size() == 3);

  Eigen::VectorXd bad(2);
  bad << 2.0, 1.0;
  CHECK_THROWS_AS(explicit_eigens(bad), std::invalid_argument);
  Eigen::VectorXd nonpos(1);
  nonpos << 0.0;
  CHECK_THROWS_AS(explicit_eigens(nonpos), std::invalid_argument);

  const EigenSequence pl = power_law_eigens(2.0, 2.0, 3);
  CHECK(pl[2] == doctest::Approx(18.0));
}

TEST_CASE("sobolev norm examples") {
  const EigenSequence eig = explicit_eigens((Eigen::VectorXd(2) << 1.0, 4.0).finished());

  SpectralField single = SpectralField::zero(1);
  single.coeffs[0] = Complex(1.0, 0.0);
  for (double theta : {-1.0, 0.0, 2.5})
    CHECK(sobolev_norm(single, SobolevIndex{theta}, eig) == doctest::Approx(1.0));

  SpectralField second = SpectralField::zero(2);
  second.coeffs[1] = Complex(3.0, 4.0);  // |c|=5, alpha_2=4, theta=1 -> 2*5
  CHECK(sobolev_norm(second, SobolevIndex{1.0}, eig) == doctest::Approx(10.0));

  CHECK(sobolev_norm(SpectralField::zero(2), SobolevIndex{0.7}, eig) == 0.0);

  SpectralField three = SpectralField::zero(3);
  CHECK_THROWS_AS(sobolev_norm(three, SobolevIndex{0.0}, eig), std::invalid_argument);
}

TEST_CASE("phase norm examples") {
  const EigenSequence eig = explicit_eigens((Eigen::VectorXd(1) << 4.0).finished());
  SpectralField x = SpectralField::zero(1);
  x.coeffs[0] = Complex(1.0, 0.0);
  const SpectralField zero = SpectralField::zero(1);

  CHECK(phase_norm({x, zero}, SobolevIndex{0.3}, eig) ==
        doctest::Approx(sobolev_norm(x, SobolevIndex{0.3}, eig)));
  CHECK(phase_norm({zero, x}, SobolevIndex{0.3}, eig) ==
        doctest::Approx(sobolev_norm(x, SobolevIndex{-0.7}, eig)));
  // u: c1=(1,0), v: c1=(1,0), theta=0, alpha=4 -> sqrt(1 + 1/4)
  CHECK(phase_norm({x, x}, SobolevIndex{0.0}, eig) == doctest::Approx(std::sqrt(1.25)));

  CHECK_THROWS_AS(PhasePoint(x, SpectralField::zero(2)), std::invalid_argument);
}

TEST_CASE("weighted phase norm") {
  const EigenSequence eig = explicit_eigens((Eigen::VectorXd(1) << 1.0).finished());
  SpectralField x = SpectralField::zero(1);
  x.coeffs[0] = Complex(0.6, 0.8);
  const SpectralField zero = SpectralField::zero(1);

  for (double mu : {0.1, 1.0, 7.0})
    CHECK(weighted_phase_norm({x, zero}, mu, eig) == doctest::Approx(1.0));
  CHECK(weighted_phase_norm({zero, x}, 4.0, eig) == doctest::Approx(2.0));
  CHECK(weighted_phase_norm(PhasePoint::zero(1), 0.5, eig) == 0.0);
  CHECK_THROWS_AS(weighted_phase_norm({x, zero}, 0.0, eig), std::invalid_argument);
}

TEST_CASE("projection: identity, zero, idempotence, contraction") {
  const EigenSequence eig = dirichlet_eigens(std::numbers::pi, 8);
  const SpectralField f = random_field(11, 8);

  CHECK((project(f, 8).coeffs - f.coeffs).norm() == 0.0);
  CHECK(project(f, 0).coeffs.norm() == 0.0);
  const SpectralField p2 = project(f, 2);
  CHECK((project(p2, 2).coeffs - p2.coeffs).norm() == 0.0);
  CHECK_THROWS_AS(project(f, 9), std::invalid_argument);
  CHECK_THROWS_AS(project(f, -1), std::invalid_argument);

  for (double theta : {-1.0, 0.0, 1.0, 2.0})
    for (int m : {1, 3, 5, 8})
      CHECK(sobolev_norm(project(f, m), SobolevIndex{theta}, eig) <=
            sobolev_norm(f, SobolevIndex{theta}, eig) + 1e-14);
}

TEST_CASE("norm monotonicity in theta when alpha_1 >= 1") {
  const EigenSequence eig = dirichlet_eigens(std::numbers::pi, 12);  // alpha_1 = 1
  for (std::uint64_t s = 1; s <= 20; ++s) {
    const SpectralField f = random_field(s, 12);
    double prev = sobolev_norm(f, SobolevIndex{-1.5}, eig);
    for (double theta : {-1.0, -0.5, 0.0, 0.5, 1.0, 2.0}) {
      const double cur = sobolev_norm(f, SobolevIndex{theta}, eig);
      CHECK(prev <= cur * (1.0 + 1e-13));
      prev = cur;
    }
  }
}

TEST_CASE("interpolation inequality on random fields") {
  const EigenSequence eig = dirichlet_eigens(std::numbers::pi, 10);
  for (std::uint64_t s = 1; s <= 30; ++s) {
    const SpectralField f = random_field(s ^ 0xabc, 10);
    for (double theta : {-0.5, 0.0, 1.0})
      for (double gamma : {0.0, 0.3, 0.5, 0.8, 1.0}) {
        const double lhs = sobolev_norm(f, SobolevIndex{theta}, eig);
        const double a = sobolev_norm(f, SobolevIndex{theta + gamma - 1.0}, eig);
        const double b = sobolev_norm(f, SobolevIndex{theta + gamma}, eig);
        CHECK(lhs <= std::pow(a, gamma) * std::pow(b, 1.0 - gamma) * (1.0 + 1e-13));
      }
  }
}

TEST_CASE("collocation transform round trip and point values") {
  const double L = std::numbers::pi;

  // basis mode 1 evaluated at xi = pi/2 (grid point j=8 of 15)
  SpectralField e1 = SpectralField::zero(1);
  e1.coeffs[0] = Complex(1.0, 0.0);
  const Eigen::VectorXcd vals = synthesize(e1, 15, L);
  CHECK(vals[7].real() == doctest::Approx(std::sqrt(2.0 / L)).epsilon(1e-14));
  CHECK(vals[7].imag() == doctest::Approx(0.0));

  CHECK(synthesize(SpectralField::zero(3), 8, L).norm() == 0.0);
  CHECK_THROWS_AS(synthesize(random_field(3, 8), 4, L), std::invalid_argument);

  // analyze(synthesize(f)) = f to 1e-12 relative
  for (std::uint64_t s = 1; s <= 10; ++s) {
    const SpectralField f = random_field(s ^ 0x77, 12);
    const CollocationTransform t(12, 24, L);
    const Eigen::VectorXcd round = t.analyze(t.synthesize(f.coeffs));
    CHECK((round - f.coeffs).norm() <= 1e-12 * f.coeffs.norm());
  }

  // analyze on a native grid is a full left inverse
  const SpectralField g = random_field(99, 9);
  const Eigen::VectorXcd grid_vals = synthesize(g, 9, L);
  const SpectralField back = analyze(grid_vals, L);
  CHECK((back.coeffs - g.coeffs).norm() <= 1e-12 * g.coeffs.norm());
}

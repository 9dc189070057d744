#include "skm/simulate.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "skm/numerics.hpp"

namespace skm {

int SimGrid::steps() const {
  if (T <= 0.0 || dt <= 0.0) throw std::invalid_argument("SimGrid: T and dt must be positive");
  const double raw = T / dt;
  const int n = static_cast<int>(std::lround(raw));
  if (n < 1 || std::abs(n * dt - T) > 1e-9 * T)
    throw std::invalid_argument("SimGrid: dt must divide T into an integral number of steps");
  return n;
}

void SimGrid::validate_second_order(double mu) const {
  if (dt > mu / 10.0 * (1.0 + 1e-12))
    throw std::invalid_argument("SimGrid: second-order runs require dt <= mu/10");
}

namespace {

/// Real 4x4 form (state order u1, u2, v1, v2) of the circular complex
/// covariance with diagonal entries huu, hvv and cross term huv.
Eigen::Matrix4d hermitian_to_real(double huu, double hvv, Complex huv) {
  Eigen::Matrix4d m;
  m << huu, 0.0, huv.real(), -huv.imag(),
       0.0, huu, huv.imag(), huv.real(),
       huv.real(), huv.imag(), hvv, 0.0,
       -huv.imag(), huv.real(), 0.0, hvv;
  return m;
}

}  // namespace

StepCovariance step_covariance(double mu, double eps, double alpha, double lambda, double dt) {
  if (mu <= 0.0 || alpha <= 0.0 || dt <= 0.0)
    throw std::invalid_argument("step_covariance: mu, alpha, dt must be positive");
  StepCovariance out;
  if (lambda == 0.0) {
    out.cov.setZero();
    out.factor.setZero();
    return out;
  }
  const double intensity = lambda / mu;
  // Hermitian complex form of the convolution covariance: entries
  // (H_uu, H_vv, Re H_uv, Im H_uv) with K(s) = M(s) (0, lambda/mu).
  auto integrand = [&](double s) {
    const ModePropagator p = second_order_propagator(mu, eps, alpha, s);
    const Complex ku = p.matrix(0, 1) * intensity;
    const Complex kv = p.matrix(1, 1) * intensity;
    Eigen::VectorXd v(4);
    const Complex huv = ku * std::conj(kv);
    v << std::norm(ku), std::norm(kv), huv.real(), huv.imag();
    return v;
  };
  const Eigen::VectorXd h = adaptive_simpson(integrand, 0.0, dt, 1e-12);
  out.cov = hermitian_to_real(h[0], h[1], Complex(h[2], h[3]));
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(out.cov);
  const double floor = -1e-12 * std::max(out.cov.trace(), 1e-300);
  if (es.eigenvalues().minCoeff() < floor)
    throw RefinementRequired("step_covariance: factorization found an indefinite covariance");
  out.factor = es.eigenvectors() *
               es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
               es.eigenvectors().transpose();
  return out;
}

namespace {

constexpr int kKernelQuadrature = 32;

struct KernelTable {
  std::array<Complex, kNoiseExpansionOrder> u{};
  std::array<Complex, kNoiseExpansionOrder> v{};
};

/// Projects the within-step convolution kernels of one mode onto the
/// orthonormal Legendre basis; throws if the basis does not resolve them.
KernelTable project_kernel(const SystemSpec& sys, double alpha, double lambda, double dt) {
  KernelTable table;
  if (lambda == 0.0) return table;
  const GaussLegendre gl = gauss_legendre(kKernelQuadrature, 0.0, dt);
  double norm_u = 0.0, norm_v = 0.0;
  for (int i = 0; i < kKernelQuadrature; ++i) {
    const double s = gl.nodes[i];
    const double w = gl.weights[i];
    Complex ku, kv;
    if (sys.kind == SystemKind::SecondOrder) {
      const ModePropagator p = second_order_propagator(sys.mu, sys.eps, alpha, dt - s);
      ku = p.matrix(0, 1) * (lambda / sys.mu);
      kv = p.matrix(1, 1) * (lambda / sys.mu);
    } else {
      const Complex jinv = Complex(sys.eps, 1.0) / (1.0 + sys.eps * sys.eps);
      ku = exp_j_scaled_complex(sys.eps, -alpha * (dt - s)) * jinv * lambda;
      kv = 0.0;
    }
    const Eigen::VectorXd phi = orthonormal_legendre(kNoiseExpansionOrder, dt, s);
    for (int j = 0; j < kNoiseExpansionOrder; ++j) {
      table.u[j] += w * phi[j] * ku;
      table.v[j] += w * phi[j] * kv;
    }
    norm_u += w * std::norm(ku);
    norm_v += w * std::norm(kv);
  }
  double cap_u = 0.0, cap_v = 0.0;
  for (int j = 0; j < kNoiseExpansionOrder; ++j) {
    cap_u += std::norm(table.u[j]);
    cap_v += std::norm(table.v[j]);
  }
  const double res_u = norm_u > 0.0 ? 1.0 - cap_u / norm_u : 0.0;
  const double res_v = norm_v > 0.0 ? 1.0 - cap_v / norm_v : 0.0;
  if (std::max(res_u, res_v) > kNoiseResidualTol)
    throw RefinementRequired("noise kernel not resolved by the within-step basis; decrease dt");
  return table;
}

}  // namespace

Eigen::Matrix4d expansion_step_covariance(const SystemSpec& sys, double alpha, double lambda,
                                          double dt) {
  const KernelTable table = project_kernel(sys, alpha, lambda, dt);
  double huu = 0.0, hvv = 0.0;
  Complex huv(0.0, 0.0);
  for (int j = 0; j < kNoiseExpansionOrder; ++j) {
    huu += std::norm(table.u[j]);
    hvv += std::norm(table.v[j]);
    huv += table.u[j] * std::conj(table.v[j]);
  }
  return hermitian_to_real(huu, hvv, huv);
}

CoupledSimulator::CoupledSimulator(std::vector<SystemSpec> systems, const SimConfig& cfg,
                                   const SimGrid& grid)
    : specs_(std::move(systems)), cfg_(&cfg), grid_(grid) {
  if (specs_.empty()) throw std::invalid_argument("CoupledSimulator: no systems");
  if (cfg.eig.size() < grid.n_modes)
    throw std::invalid_argument("CoupledSimulator: eigenvalue sequence shorter than n_modes");
  if (cfg.noise.modes() < grid.n_modes && !cfg.noise.is_zero())
    throw std::invalid_argument("CoupledSimulator: noise sequence shorter than n_modes");
  if (cfg.u0.modes() != grid.n_modes || cfg.v0.modes() != grid.n_modes)
    throw std::invalid_argument("CoupledSimulator: initial data truncation mismatch");
  for (const auto& s : specs_) {
    if (s.kind == SystemKind::SecondOrder) {
      if (s.mu <= 0.0) throw std::invalid_argument("CoupledSimulator: mu must be positive");
      grid_.validate_second_order(s.mu);
    }
    if (s.eps < 0.0) throw std::invalid_argument("CoupledSimulator: eps must be nonnegative");
    if (s.kind == SystemKind::FirstOrder && s.eps == 0.0 && !cfg.noise.h6_trace_class &&
        !cfg.noise.is_zero())
      throw std::invalid_argument(
          "CoupledSimulator: the frictionless first-order system requires trace-class noise");
  }
  const bool needs_colloc = cfg.drift.needs_collocation() || cfg.diffusion.multiplicative();
  if (needs_colloc) {
    if (cfg.eig.source != EigenSequence::Source::DirichletInterval)
      throw std::invalid_argument(
          "CoupledSimulator: Nemytskii coefficients need the Dirichlet interval geometry");
    if (grid_.colloc() < grid_.n_modes)
      throw std::invalid_argument("CoupledSimulator: collocation grid smaller than truncation");
  }
  precompute();
}

void CoupledSimulator::precompute() {
  const int n = grid_.n_modes;
  const int ns = systems();
  const double dt = grid_.dt;
  const bool additive = !cfg_->diffusion.multiplicative() && !cfg_->noise.is_zero();

  prop_.assign(size_t(ns) * n, Eigen::Matrix2cd::Identity());
  rot_.assign(size_t(ns) * n, Complex(1.0, 0.0));
  noise_u_.assign(size_t(ns) * n * kNoiseExpansionOrder, Complex(0.0));
  noise_v_.assign(size_t(ns) * n * kNoiseExpansionOrder, Complex(0.0));
  state_u_.assign(ns, Eigen::VectorXcd());
  state_v_.assign(ns, Eigen::VectorXcd());

  for (int i = 0; i < ns; ++i) {
    const SystemSpec& sys = specs_[i];
    for (int k = 0; k < n; ++k) {
      const double alpha = cfg_->eig[k];
      if (sys.kind == SystemKind::SecondOrder)
        prop_[size_t(i) * n + k] = second_order_propagator(sys.mu, sys.eps, alpha, dt).matrix;
      else
        rot_[size_t(i) * n + k] = exp_j_scaled_complex(sys.eps, -alpha * dt);
      if (additive) {
        const KernelTable table = project_kernel(sys, alpha, cfg_->noise.lambda[k], dt);
        for (int j = 0; j < kNoiseExpansionOrder; ++j) {
          noise_u_[(size_t(i) * n + k) * kNoiseExpansionOrder + j] = table.u[j];
          noise_v_[(size_t(i) * n + k) * kNoiseExpansionOrder + j] = table.v[j];
        }
      }
    }
  }
  needed_lanes_ = cfg_->noise.is_zero() ? 0 : (additive ? 2 * kNoiseExpansionOrder : 2);
  if (cfg_->drift.needs_collocation() || cfg_->diffusion.multiplicative())
    colloc_ = std::make_unique<CollocationTransform>(n, grid_.colloc(), cfg_->eig.length);
}

const Eigen::VectorXcd& CoupledSimulator::velocity(int sys) const {
  if (specs_[sys].kind != SystemKind::SecondOrder)
    throw std::invalid_argument("CoupledSimulator: first-order systems carry no velocity");
  return state_v_[sys];
}

void CoupledSimulator::check_stability(int sys, int step, double t) const {
  const Eigen::VectorXcd& u = state_u_[sys];
  double norm2 = u.squaredNorm();
  if (specs_[sys].kind == SystemKind::SecondOrder) {
    const Eigen::VectorXcd& v = state_v_[sys];
    norm2 += (v.array().abs2() / cfg_->eig.values.head(v.size()).array()).sum();
  }
  const double norm = std::sqrt(norm2);
  if (!std::isfinite(norm) || norm > 1e8)
    throw InstabilityError("simulation unstable (non-finite state or phase norm above 1e8)", step,
                           t, norm);
}

void CoupledSimulator::run(PathSeed seed, const Observer& observe) {
  CounterLanes lanes(seed, grid_.n_modes);
  run(lanes, observe);
}

void CoupledSimulator::run(const WienerLanes& lanes, const Observer& observe) {
  const int n = grid_.n_modes;
  const int ns = systems();
  const int steps = grid_.steps();
  const double dt = grid_.dt;
  const double root_dt = std::sqrt(dt);
  const int J = kNoiseExpansionOrder;
  const bool additive = !cfg_->diffusion.multiplicative() && !cfg_->noise.is_zero();
  const bool multiplicative = cfg_->diffusion.multiplicative() && !cfg_->noise.is_zero();
  const bool drift_colloc = cfg_->drift.needs_collocation();

  for (int i = 0; i < ns; ++i) {
    state_u_[i] = cfg_->u0.coeffs;
    state_v_[i] =
        specs_[i].kind == SystemKind::SecondOrder ? cfg_->v0.coeffs : Eigen::VectorXcd();
  }
  if (observe) observe(0, 0.0, *this);

  Eigen::MatrixXd xi(std::max(needed_lanes_, 1), n);
  Eigen::VectorXcd drift_k(n);
  Eigen::VectorXcd noise_field(n);
  Eigen::VectorXcd noise_phys;
  Eigen::VectorXcd state_phys;
  Eigen::VectorXcd work_phys;
  Eigen::VectorXcd gamma_k(n);

  for (int step = 0; step < steps; ++step) {
    const double t = step * dt;
    if (needed_lanes_ > 0)
      for (int k = 0; k < n; ++k)
        lanes.fill(k, std::uint32_t(step), needed_lanes_, xi.col(k).data());

    if (multiplicative) {
      for (int k = 0; k < n; ++k)
        noise_field[k] = cfg_->noise.lambda[k] * root_dt * Complex(xi(0, k), xi(1, k));
      noise_phys = colloc_->synthesize(noise_field);
    }

    for (int i = 0; i < ns; ++i) {
      const SystemSpec& sys = specs_[i];
      Eigen::VectorXcd& u = state_u_[i];

      if (drift_colloc || multiplicative) state_phys = colloc_->synthesize(u);

      switch (cfg_->drift.kind) {
        case DriftSpec::Kind::Zero:
          drift_k.setZero();
          break;
        case DriftSpec::Kind::Linear:
          drift_k = cfg_->drift.amplitude * u;
          break;
        default: {
          work_phys.resize(state_phys.size());
          for (int g = 0; g < state_phys.size(); ++g)
            work_phys[g] = drift_pointwise(cfg_->drift, state_phys[g], colloc_->points()[g], t);
          drift_k = colloc_->analyze(work_phys);
          break;
        }
      }

      if (multiplicative) {
        work_phys.resize(state_phys.size());
        for (int g = 0; g < state_phys.size(); ++g)
          work_phys[g] = diffusion_pointwise(cfg_->diffusion, state_phys[g], noise_phys[g],
                                             colloc_->points()[g], t);
        gamma_k = colloc_->analyze(work_phys);
      }

      if (sys.kind == SystemKind::SecondOrder) {
        Eigen::VectorXcd& v = state_v_[i];
        for (int k = 0; k < n; ++k) {
          const Eigen::Matrix2cd& m = prop_[size_t(i) * n + k];
          Complex impulse = drift_k[k] * dt / sys.mu;
          if (multiplicative) impulse += gamma_k[k] / sys.mu;
          const Complex u1 = u[k];
          const Complex v1 = v[k] + impulse;
          Complex nu = m(0, 0) * u1 + m(0, 1) * v1;
          Complex nv = m(1, 0) * u1 + m(1, 1) * v1;
          if (additive) {
            const Complex* au = &noise_u_[(size_t(i) * n + k) * J];
            const Complex* av = &noise_v_[(size_t(i) * n + k) * J];
            for (int j = 0; j < J; ++j) {
              const Complex z(xi(2 * j, k), xi(2 * j + 1, k));
              nu += au[j] * z;
              nv += av[j] * z;
            }
          }
          u[k] = nu;
          v[k] = nv;
        }
      } else {
        const Complex jinv = Complex(sys.eps, 1.0) / (1.0 + sys.eps * sys.eps);
        for (int k = 0; k < n; ++k) {
          Complex impulse = jinv * drift_k[k] * dt;
          if (multiplicative) impulse += jinv * gamma_k[k];
          Complex nu = rot_[size_t(i) * n + k] * (u[k] + impulse);
          if (additive) {
            const Complex* au = &noise_u_[(size_t(i) * n + k) * J];
            for (int j = 0; j < J; ++j) nu += au[j] * Complex(xi(2 * j, k), xi(2 * j + 1, k));
          }
          u[k] = nu;
        }
      }
      check_stability(i, step + 1, t + dt);
    }
    if (observe) observe(step + 1, t + dt, *this);
  }
}

SecondOrderTrajectory simulate_second_order(double mu, double eps, const SimConfig& cfg,
                                            const SimGrid& grid, PathSeed seed) {
  CoupledSimulator sim({SystemSpec{SystemKind::SecondOrder, mu, eps}}, cfg, grid);
  SecondOrderTrajectory out;
  out.times.reserve(grid.steps() + 1);
  out.states.reserve(grid.steps() + 1);
  sim.run(seed, [&](int, double t, const CoupledSimulator& s) {
    out.times.push_back(t);
    out.states.push_back({SpectralField(s.position(0)), SpectralField(s.velocity(0))});
  });
  return out;
}

FirstOrderTrajectory simulate_first_order(double eps, const SimConfig& cfg, const SimGrid& grid,
                                          PathSeed seed) {
  CoupledSimulator sim({SystemSpec{SystemKind::FirstOrder, 0.0, eps}}, cfg, grid);
  FirstOrderTrajectory out;
  out.times.reserve(grid.steps() + 1);
  out.states.reserve(grid.steps() + 1);
  sim.run(seed, [&](int, double t, const CoupledSimulator& s) {
    out.times.push_back(t);
    out.states.push_back(SpectralField(s.position(0)));
  });
  return out;
}

double coupled_sup_error(double mu, double eps, const SimConfig& cfg, const SimGrid& grid,
                         PathSeed seed, double p) {
  CoupledSimulator sim(
      {SystemSpec{SystemKind::SecondOrder, mu, eps}, SystemSpec{SystemKind::FirstOrder, 0.0, eps}},
      cfg, grid);
  double sup = 0.0;
  sim.run(seed, [&](int, double, const CoupledSimulator& s) {
    sup = std::max(sup, (s.position(0) - s.position(1)).norm());
  });
  return std::pow(sup, p);
}

}  // namespace skm

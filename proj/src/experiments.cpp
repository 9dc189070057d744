#include "skm/experiments.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <exception>
#include <ostream>
#include <sstream>
#include <mutex>
#include <thread>

namespace skm {

namespace {

enum class Metric { PositionH, WeightedPhase };

struct PathOutcome {
  double value = 0.0;   // sup^p over the full grid
  double guard = 0.0;   // (sup - sup_stride2) / sup
  bool failed = false;
};

struct RowStats {
  double estimate = 0.0;
  double std_error = 0.0;
  double guard = 0.0;
  int failed = 0;
  long used = 0;
};

double metric_value(const CoupledSimulator& s, Metric metric, double mu,
                    const EigenSequence& eig) {
  if (metric == Metric::PositionH) return (s.position(0) - s.position(1)).norm();
  const Eigen::VectorXcd du = s.position(0) - s.position(1);
  const Eigen::VectorXcd dv = s.velocity(0) - s.velocity(1);
  const double nv2 = (dv.array().abs2() / eig.values.head(dv.size()).array()).sum();
  return std::sqrt(du.squaredNorm() + mu * nv2);
}

/// Runs M coupled paths (path_id 1..M), path-parallel with per-slot storage so
/// the reduction is independent of scheduling.
RowStats run_row(const std::vector<SystemSpec>& systems, Metric metric, double mu_weight,
                 const ExperimentConfig& cfg, const SimGrid& grid, int M, double p) {
  std::vector<PathOutcome> outcomes(M);
  int n_threads = cfg.threads > 0 ? cfg.threads
                                  : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min<int>(n_threads, M);

  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&](int t0) {
    try {
      CoupledSimulator sim(systems, cfg.sim, grid);
      for (int m = t0; m < M; m += n_threads) {
        double sup = 0.0, sup_even = 0.0;
        try {
          sim.run(PathSeed{cfg.master_seed, std::uint32_t(m + 1)},
                  [&](int step, double, const CoupledSimulator& s) {
                    const double val = metric_value(s, metric, mu_weight, cfg.sim.eig);
                    sup = std::max(sup, val);
                    if (step % 2 == 0) sup_even = std::max(sup_even, val);
                  });
          outcomes[m].value = std::pow(sup, p);
          outcomes[m].guard = sup > 0.0 ? (sup - sup_even) / sup : 0.0;
        } catch (const InstabilityError&) {
          outcomes[m].failed = true;
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  };

  if (n_threads <= 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  RowStats stats;
  double sum = 0.0, guard_sum = 0.0;
  for (const auto& o : outcomes) {
    if (o.failed) {
      ++stats.failed;
      continue;
    }
    sum += o.value;
    guard_sum += o.guard;
    ++stats.used;
  }
  if (stats.used > 0) {
    stats.estimate = sum / stats.used;
    stats.guard = guard_sum / stats.used;
    double ss = 0.0;
    for (const auto& o : outcomes)
      if (!o.failed) ss += (o.value - stats.estimate) * (o.value - stats.estimate);
    if (stats.used > 1) stats.std_error = std::sqrt(ss / (stats.used - 1)) / std::sqrt(double(stats.used));
  }
  return stats;
}

SweepRow make_row(double parameter, const RowStats& stats, double p) {
  SweepRow row;
  row.parameter = parameter;
  row.estimate = stats.estimate;
  row.std_error = stats.std_error;
  row.lower95 = stats.estimate - 1.645 * stats.std_error;
  row.paths = stats.used;
  row.p = p;
  row.flagged = stats.failed > 0;
  row.failed_paths = stats.failed;
  row.grid_guard = stats.guard;
  return row;
}

void sort_descending(std::vector<double>& v) {
  std::sort(v.begin(), v.end(), std::greater<double>());
}

}  // namespace

RateFit rate_fit(const SweepTable& table) {
  std::vector<double> xs, ys;
  for (const auto& row : table.rows)
    if (row.estimate > 0.0) {
      xs.push_back(std::log(row.parameter));
      ys.push_back(std::log(row.estimate));
    }
  if (xs.size() < 3) throw std::domain_error("rate_fit: need >= 3 rows with positive estimates");
  const double n = double(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
    syy += ys[i] * ys[i];
  }
  RateFit fit;
  const double denom = n * sxx - sx * sx;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss_res = 0.0, ss_tot = 0.0;
  const double ybar = sy / n;
  for (size_t i = 0; i < xs.size(); ++i) {
    const double pred = fit.intercept + fit.slope * xs[i];
    ss_res += (ys[i] - pred) * (ys[i] - pred);
    ss_tot += (ys[i] - ybar) * (ys[i] - ybar);
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

SweepTable mu_sweep(double eps, std::vector<double> mu_list, const ExperimentConfig& cfg, int M) {
  if (eps <= 0.0) throw std::invalid_argument("mu_sweep: eps must be positive");
  if (mu_list.empty()) throw std::invalid_argument("mu_sweep: empty mu list");
  if (M < 1) throw std::invalid_argument("mu_sweep: need at least one path");
  if (!cfg.sim.noise.is_zero()) {
    if (cfg.sim.diffusion.multiplicative()) {
      if (!cfg.sim.noise.h7_bounded)
        throw std::invalid_argument("mu_sweep: multiplicative runs require bounded noise (H7)");
    } else if (!cfg.sim.noise.h5_delta && !cfg.sim.noise.h6_trace_class) {
      throw std::invalid_argument("mu_sweep: additive runs require H5-class noise");
    }
  }
  sort_descending(mu_list);
  const double mu_min = mu_list.back();
  SimGrid grid = cfg.grid;
  grid.validate_second_order(mu_min);  // one shared grid -> common random numbers

  SweepTable table;
  for (double mu : mu_list) {
    const RowStats stats =
        run_row({SystemSpec{SystemKind::SecondOrder, mu, eps},
                 SystemSpec{SystemKind::FirstOrder, 0.0, eps}},
                Metric::PositionH, 0.0, cfg, grid, M, grid.p);
    table.rows.push_back(make_row(mu, stats, grid.p));
  }
  return table;
}

SweepTable eps_sweep_first_order(std::vector<double> eps_list, const ExperimentConfig& cfg,
                                 int M) {
  if (eps_list.empty()) throw std::invalid_argument("eps_sweep_first_order: empty eps list");
  if (!cfg.sim.noise.is_zero() && !cfg.sim.noise.h6_trace_class)
    throw std::invalid_argument("eps_sweep_first_order: requires trace-class noise (H6)");
  sort_descending(eps_list);
  SweepTable table;
  for (double eps : eps_list) {
    const RowStats stats = run_row({SystemSpec{SystemKind::FirstOrder, 0.0, eps},
                                    SystemSpec{SystemKind::FirstOrder, 0.0, 0.0}},
                                   Metric::PositionH, 0.0, cfg, cfg.grid, M, cfg.grid.p);
    table.rows.push_back(make_row(eps, stats, cfg.grid.p));
  }
  return table;
}

SweepTable eps_sweep_second_order(double mu, std::vector<double> eps_list,
                                  const ExperimentConfig& cfg, int M) {
  if (mu <= 0.0) throw std::invalid_argument("eps_sweep_second_order: mu must be positive");
  if (eps_list.empty()) throw std::invalid_argument("eps_sweep_second_order: empty eps list");
  if (!cfg.sim.noise.is_zero() && !cfg.sim.noise.h6_trace_class)
    throw std::invalid_argument("eps_sweep_second_order: requires trace-class noise (H6)");
  sort_descending(eps_list);
  SimGrid grid = cfg.grid;
  grid.validate_second_order(mu);
  SweepTable table;
  for (double eps : eps_list) {
    const RowStats stats = run_row({SystemSpec{SystemKind::SecondOrder, mu, eps},
                                    SystemSpec{SystemKind::SecondOrder, mu, 0.0}},
                                   Metric::WeightedPhase, mu, cfg, grid, M, grid.p);
    table.rows.push_back(make_row(eps, stats, grid.p));
  }
  return table;
}

VarianceCheck counterexample_variance(double mu, double t, int steps, int M,
                                      std::uint64_t master_seed) {
  if (steps < 1 || t <= 0.0) throw std::invalid_argument("counterexample_variance: bad grid");
  const double dt = t / steps;
  if (dt > mu / 20.0 * (1.0 + 1e-12))
    throw std::invalid_argument("counterexample_variance: requires dt <= mu/20");
  if (M < 2) throw std::invalid_argument("counterexample_variance: sample variance needs M >= 2");

  std::vector<double> sums(M, 0.0);
  for (int m = 0; m < M; ++m) {
    const std::vector<double> db =
        brownian_increments(PathSeed{master_seed, std::uint32_t(m + 1)}, 0, 1, steps, dt);
    double acc = 0.0;
    for (int i = 0; i < steps; ++i) acc += std::sin(i * dt / mu) * db[i];
    sums[m] = acc;
  }
  double mean = 0.0;
  for (double x : sums) mean += x;
  mean /= M;
  double var = 0.0;
  for (double x : sums) var += (x - mean) * (x - mean);
  var /= (M - 1);

  VarianceCheck out;
  out.empirical_var = var;
  out.closed_form = t / 2.0 - (mu / 4.0) * std::sin(2.0 * t / mu);
  out.std_error = var * std::sqrt(2.0 / (M - 1));
  out.paths = M;
  return out;
}

SweepTable failure_floor(std::vector<double> mu_list, const ExperimentConfig& cfg, int M) {
  if (mu_list.empty()) throw std::invalid_argument("failure_floor: empty mu list");
  if (!cfg.sim.noise.is_zero() && !cfg.sim.noise.h6_trace_class)
    throw std::invalid_argument("failure_floor: requires trace-class noise (H6)");
  sort_descending(mu_list);
  SweepTable table;
  for (double mu : mu_list) {
    SimGrid grid = cfg.grid;
    if (grid.dt > mu / 10.0) {
      const int steps = static_cast<int>(std::ceil(grid.T / (mu / 10.0) - 1e-12));
      grid.dt = grid.T / steps;
    }
    const RowStats stats = run_row({SystemSpec{SystemKind::SecondOrder, mu, 0.0},
                                    SystemSpec{SystemKind::FirstOrder, 0.0, 0.0}},
                                   Metric::PositionH, 0.0, cfg, grid, M, 2.0);
    table.rows.push_back(make_row(mu, stats, 2.0));
  }
  return table;
}

void write_csv(const SweepTable& table, std::ostream& os) {
  os << "param,estimate,stderr,paths,p\n";
  char buf[128];
  for (const auto& row : table.rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%ld,%.17g\n", row.parameter, row.estimate,
                  row.std_error, row.paths, row.p);
    os << buf;
  }
}

std::string csv_string(const SweepTable& table) {
  std::ostringstream ss;
  write_csv(table, ss);
  return ss.str();
}

}  // namespace skm

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "skm/simulate.hpp"

namespace skm {

struct ExperimentConfig {
  SimConfig sim;
  SimGrid grid;
  std::uint64_t master_seed = 1;
  int threads = 0;  // 0 -> hardware concurrency
};

struct SweepRow {
  double parameter = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;
  double lower95 = 0.0;  // one-sided: estimate - 1.645 * std_error
  long paths = 0;
  double p = 2.0;
  bool flagged = false;      // instability on some path; estimate over survivors
  int failed_paths = 0;
  double grid_guard = 0.0;   // mean relative sup change against the stride-2 subgrid
};

struct SweepTable {
  std::vector<SweepRow> rows;  // sorted by parameter, descending
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Log-log least squares over rows with positive estimates; needs >= 3 rows.
RateFit rate_fit(const SweepTable& table);

/// E sup_t |u_mu^eps - u_eps|_H^p over M coupled paths per mu, common master
/// seed across rows (common random numbers on one shared grid).
SweepTable mu_sweep(double eps, std::vector<double> mu_list, const ExperimentConfig& cfg, int M);

/// E sup_t |u_eps - u|_H^p, the friction-removal limit of the first-order
/// system (requires trace-class noise).
SweepTable eps_sweep_first_order(std::vector<double> eps_list, const ExperimentConfig& cfg, int M);

/// E sup_t |z_mu^eps - z_mu|_{H(mu)}^p at fixed mu.
SweepTable eps_sweep_second_order(double mu, std::vector<double> eps_list,
                                  const ExperimentConfig& cfg, int M);

/// Sample variance of sum_i sin(s_i/mu) dB_i against the closed form
/// t/2 - (mu/4) sin(2t/mu); the variance that refuses to vanish as mu -> 0.
struct VarianceCheck {
  double empirical_var = 0.0;
  double closed_form = 0.0;
  double std_error = 0.0;  // of the variance estimate
  long paths = 0;
};

VarianceCheck counterexample_variance(double mu, double t, int steps, int M,
                                      std::uint64_t master_seed);

/// E sup_t |u_mu - u|_H^2 with eps = 0 on both sides: the failed limit. Rows
/// carry one-sided 95% lower confidence bounds; dt is refined per row to mu/10.
SweepTable failure_floor(std::vector<double> mu_list, const ExperimentConfig& cfg, int M);

void write_csv(const SweepTable& table, std::ostream& os);
std::string csv_string(const SweepTable& table);

}  // namespace skm

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "skm/experiments.hpp"

namespace skm {

/// Flat-key run configuration (see README for the schema). Values come from a
/// `key = value` config file plus repeatable --set overrides; unknown keys are
/// rejected with a line diagnostic.
struct RunConfig {
  // geometry
  double L = 3.14159265358979323846;
  int n_modes = 16;
  int collocation_size = 0;  // 0 -> 2 * n_modes

  // physics
  std::vector<double> mu_list{0.1};
  std::vector<double> eps_list{0.5};
  std::string drift = "zero";           // zero | linear:a | sine:a
  std::string diffusion = "additive";   // additive | nemytskii_sine:a
  std::string noise = "power:1";        // zero | power:r | explicit:l1,l2,...
  std::string u0 = "decay:1";           // zero | decay:q | basis:k | list:re,im,...
  std::string v0 = "zero";

  // simulation
  double T = 1.0;
  double dt = 1e-2;
  double p = 2.0;
  int paths = 100;
  std::uint64_t master_seed = 1;
  int threads = 0;
  int output_stride = 1;  // trajectory dump decimation
  std::string system = "second_order";  // trajectory dumps: second_order | first_order

  // output
  std::string out_dir = "out";
};

RunConfig parse_config_file(const std::string& path);

/// Applies one "key=value" override; throws ConfigError on unknown keys.
void apply_override(RunConfig& cfg, const std::string& assignment);

/// Materializes spectrum, coefficients, initial data and grid; validates the
/// spec preconditions (positive geometry, integral step count, noise classes).
ExperimentConfig build_experiment(const RunConfig& cfg);

}  // namespace skm

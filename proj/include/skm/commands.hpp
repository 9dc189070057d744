#pragma once

#include "skm/config.hpp"

namespace skm {

/// Command entry points behind the CLI. Return value is the process exit code
/// for pass (0) or limit/runtime failure (1); configuration problems throw
/// ConfigError / std::invalid_argument, which the CLI maps to exit code 2.
int cmd_verify(const RunConfig& cfg);
int cmd_skm(const RunConfig& cfg);
int cmd_friction(const RunConfig& cfg);
int cmd_counterexample(const RunConfig& cfg);
int cmd_simulate(const RunConfig& cfg);

/// Shared pass-flag helpers for sweep tables (rows sorted by parameter
/// descending; the first row is the largest parameter).
bool monotone_within_2se(const SweepTable& table);
bool final_fraction_of_initial(const SweepTable& table, double fraction);

}  // namespace skm

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace skm {

/// One deterministic verification check: pass iff worst <= tolerance.
struct CheckResult {
  std::string name;
  bool pass = false;
  double worst = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

/// The deterministic verification grid: exact identities, isometries, decay
/// and gap envelopes of the linear theory, evaluated at pinned tolerances.
/// `seed` drives the random test fields.
std::vector<CheckResult> run_deterministic_checks(std::uint64_t seed);

// Individual checks (also used by the acceptance suite).
CheckResult check_energy_identities(std::uint64_t seed);
CheckResult check_t0_isometry(std::uint64_t seed);
CheckResult check_friction_decay(std::uint64_t seed);
CheckResult check_damped_component(std::uint64_t seed);
CheckResult check_small_mass_gap(std::uint64_t seed);
CheckResult check_small_mass_gap_velocity(std::uint64_t seed);
CheckResult check_friction_gap(std::uint64_t seed);
CheckResult check_group_law(std::uint64_t seed);
CheckResult check_integral_bounds(std::uint64_t seed);
CheckResult check_j_inverse_limit(std::uint64_t seed);
CheckResult check_interpolation(std::uint64_t seed);

}  // namespace skm

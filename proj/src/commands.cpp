#include "skm/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <cstdio>

#include <json.hpp>

#include "skm/verification.hpp"

namespace skm {

namespace {

using nlohmann::json;

constexpr const char* kSchemaVersion = "1";

std::filesystem::path ensure_outdir(const RunConfig& cfg) {
  std::filesystem::path dir(cfg.out_dir);
  std::filesystem::create_directories(dir);
  return dir;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

json table_json(const SweepTable& table) {
  json rows = json::array();
  for (const auto& r : table.rows) {
    rows.push_back({{"param", r.parameter},
                    {"estimate", r.estimate},
                    {"stderr", r.std_error},
                    {"lower95", r.lower95},
                    {"paths", r.paths},
                    {"p", r.p},
                    {"flagged", r.flagged},
                    {"failed_paths", r.failed_paths},
                    {"grid_guard", r.grid_guard}});
  }
  return rows;
}

json base_summary(const RunConfig& cfg, const std::string& command) {
  return json{{"schema_version", kSchemaVersion},
              {"command", command},
              {"master_seed", cfg.master_seed},
              {"paths", cfg.paths},
              {"p", cfg.p},
              {"T", cfg.T},
              {"dt", cfg.dt},
              {"n_modes", cfg.n_modes}};
}

bool grid_guard_ok(const SweepTable& table) {
  for (const auto& r : table.rows)
    if (r.grid_guard > 0.05 || r.flagged) return false;
  return true;
}

}  // namespace

bool monotone_within_2se(const SweepTable& table) {
  for (size_t i = 1; i < table.rows.size(); ++i) {
    const auto& prev = table.rows[i - 1];
    const auto& cur = table.rows[i];
    const double slack = 2.0 * std::hypot(prev.std_error, cur.std_error);
    if (cur.estimate > prev.estimate + slack) return false;
  }
  return true;
}

bool final_fraction_of_initial(const SweepTable& table, double fraction) {
  if (table.rows.size() < 2) return false;
  return table.rows.back().estimate <= fraction * table.rows.front().estimate;
}

int cmd_verify(const RunConfig& cfg) {
  const auto dir = ensure_outdir(cfg);
  // validate the configuration up front (exit 2 path on inconsistency)
  const ExperimentConfig exp = build_experiment(cfg);
  for (double mu : cfg.mu_list) exp.grid.validate_second_order(mu);
  const std::vector<CheckResult> checks = run_deterministic_checks(cfg.master_seed);
  json report = base_summary(cfg, "verify");
  json items = json::array();
  bool all_pass = true;
  for (const auto& c : checks) {
    items.push_back({{"name", c.name},
                     {"pass", c.pass},
                     {"worst", c.worst},
                     {"tolerance", c.tolerance},
                     {"detail", c.detail}});
    all_pass = all_pass && c.pass;
    std::cerr << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << "  worst=" << c.worst
              << "  tol=" << c.tolerance << (c.detail.empty() ? "" : "  " + c.detail) << "\n";
  }
  report["checks"] = items;
  report["pass"] = all_pass;
  write_text(dir / "verify_report.json", report.dump(2) + "\n");
  return all_pass ? 0 : 1;
}

int cmd_skm(const RunConfig& cfg) {
  const auto dir = ensure_outdir(cfg);
  const ExperimentConfig exp = build_experiment(cfg);
  if (cfg.eps_list.empty() || cfg.eps_list.front() <= 0.0)
    throw ConfigError("skm: physics.eps must be positive (the regularized limit)");
  const double eps = cfg.eps_list.front();
  const SweepTable table = mu_sweep(eps, cfg.mu_list, exp, cfg.paths);
  write_text(dir / "skm_sweep.csv", csv_string(table));

  json summary = base_summary(cfg, "skm");
  summary["eps"] = eps;
  summary["rows"] = table_json(table);
  bool fit_ok = false;
  try {
    const RateFit fit = rate_fit(table);
    summary["fit"] = {{"slope", fit.slope}, {"intercept", fit.intercept}, {"r_squared", fit.r_squared}};
    fit_ok = true;
  } catch (const std::domain_error&) {
    summary["fit"] = nullptr;
  }
  const bool guards = grid_guard_ok(table);
  bool pass = guards;
  if (table.rows.size() >= 3) {
    // limit flags need an actual sweep; short tables only report their rows
    const bool monotone = monotone_within_2se(table);
    const bool final_tenth = final_fraction_of_initial(table, 0.1);
    summary["flags"] = {{"monotone_decrease_within_2se", monotone},
                        {"final_leq_tenth_of_initial", final_tenth},
                        {"grid_guard_ok", guards},
                        {"fit_defined", fit_ok}};
    pass = pass && monotone && final_tenth;
  } else {
    summary["flags"] = {{"grid_guard_ok", guards}};
  }
  summary["pass"] = pass;
  write_text(dir / "skm_summary.json", summary.dump(2) + "\n");
  return pass ? 0 : 1;
}

int cmd_friction(const RunConfig& cfg) {
  const auto dir = ensure_outdir(cfg);
  const ExperimentConfig exp = build_experiment(cfg);
  json summary = base_summary(cfg, "friction");
  bool pass = true;

  const bool real_sweep = cfg.eps_list.size() >= 3;
  const SweepTable first = eps_sweep_first_order(cfg.eps_list, exp, cfg.paths);
  write_text(dir / "friction_first.csv", csv_string(first));
  summary["first_order"] = {{"rows", table_json(first)},
                            {"grid_guard_ok", grid_guard_ok(first)}};
  pass = pass && grid_guard_ok(first);
  if (real_sweep) {
    const bool first_monotone = monotone_within_2se(first);
    const bool first_quarter = final_fraction_of_initial(first, 0.25);
    summary["first_order"]["monotone_decrease_within_2se"] = first_monotone;
    summary["first_order"]["final_leq_quarter_of_initial"] = first_quarter;
    pass = pass && first_monotone && first_quarter;
  }

  if (!cfg.mu_list.empty()) {
    const double mu = cfg.mu_list.front();
    const SweepTable second = eps_sweep_second_order(mu, cfg.eps_list, exp, cfg.paths);
    write_text(dir / "friction_second.csv", csv_string(second));
    summary["second_order"] = {{"mu", mu},
                               {"rows", table_json(second)},
                               {"grid_guard_ok", grid_guard_ok(second)}};
    pass = pass && grid_guard_ok(second);
    if (real_sweep) {
      const bool second_monotone = monotone_within_2se(second);
      summary["second_order"]["monotone_decrease_within_2se"] = second_monotone;
      pass = pass && second_monotone;
    }
  }
  summary["pass"] = pass;
  write_text(dir / "friction_summary.json", summary.dump(2) + "\n");
  return pass ? 0 : 1;
}

int cmd_counterexample(const RunConfig& cfg) {
  const auto dir = ensure_outdir(cfg);
  const ExperimentConfig exp = build_experiment(cfg);
  const double mu = cfg.mu_list.front();
  const int steps = exp.grid.steps();
  if (cfg.T / steps > mu / 20.0)
    throw ConfigError("counterexample: sim.dt must be at most mu/20");

  const VarianceCheck vc =
      counterexample_variance(mu, cfg.T, steps, cfg.paths, cfg.master_seed);
  const bool variance_ok = std::abs(vc.empirical_var - vc.closed_form) <= 3.0 * vc.std_error;

  const SweepTable floor = failure_floor(cfg.mu_list, exp, cfg.paths);
  bool bounds_positive = true;
  for (const auto& r : floor.rows) bounds_positive = bounds_positive && r.lower95 > 0.0;
  const bool no_decay =
      !floor.rows.empty() && floor.rows.back().lower95 >= 0.5 * floor.rows.front().lower95;

  write_text(dir / "failure_floor.csv", csv_string(floor));
  json summary = base_summary(cfg, "counterexample");
  summary["variance"] = {{"mu", mu},
                         {"empirical", vc.empirical_var},
                         {"closed_form", vc.closed_form},
                         {"stderr", vc.std_error},
                         {"paths", vc.paths},
                         {"within_3se", variance_ok}};
  summary["failure_floor"] = {{"rows", table_json(floor)},
                              {"lower_bounds_positive", bounds_positive},
                              {"no_decreasing_trend", no_decay}};
  const bool pass = variance_ok && bounds_positive && no_decay;
  summary["pass"] = pass;
  write_text(dir / "counterexample_summary.json", summary.dump(2) + "\n");
  return pass ? 0 : 1;
}

int cmd_simulate(const RunConfig& cfg) {
  const auto dir = ensure_outdir(cfg);
  const ExperimentConfig exp = build_experiment(cfg);
  const PathSeed seed{cfg.master_seed, 1};
  const int stride = std::max(1, cfg.output_stride);

  std::ostringstream csv;
  csv << "t,mode,u1,u2,v1,v2\n";
  char buf[192];
  auto emit = [&](double t, int mode, Complex u, Complex v) {
    std::snprintf(buf, sizeof buf, "%.17g,%d,%.17g,%.17g,%.17g,%.17g\n", t, mode + 1, u.real(),
                  u.imag(), v.real(), v.imag());
    csv << buf;
  };

  if (cfg.system == "second_order") {
    const double mu = cfg.mu_list.front();
    const double eps = cfg.eps_list.front();
    const SecondOrderTrajectory traj = simulate_second_order(mu, eps, exp.sim, exp.grid, seed);
    for (size_t i = 0; i < traj.times.size(); i += stride)
      for (int k = 0; k < exp.grid.n_modes; ++k)
        emit(traj.times[i], k, traj.states[i].u.coeffs[k], traj.states[i].v.coeffs[k]);
  } else {
    const double eps = cfg.eps_list.front();
    const FirstOrderTrajectory traj = simulate_first_order(eps, exp.sim, exp.grid, seed);
    for (size_t i = 0; i < traj.times.size(); i += stride)
      for (int k = 0; k < exp.grid.n_modes; ++k)
        emit(traj.times[i], k, traj.states[i].coeffs[k], Complex(0.0, 0.0));
  }
  write_text(dir / "trajectory.csv", csv.str());

  json summary = base_summary(cfg, "simulate");
  summary["system"] = cfg.system;
  summary["pass"] = true;
  write_text(dir / "simulate_summary.json", summary.dump(2) + "\n");
  return 0;
}

}  // namespace skm

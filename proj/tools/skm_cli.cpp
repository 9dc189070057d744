#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "skm/commands.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::optional<int> paths;
  std::optional<std::string> out;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "path to a key = value config file");
  cmd->add_option("--set", args.sets, "override one key (repeatable), e.g. --set sim.dt=1e-3");
  cmd->add_option("--seed", args.seed, "master seed recorded in every output");
  cmd->add_option("--paths", args.paths, "Monte Carlo path count");
  cmd->add_option("--out", args.out, "output directory");
}

skm::RunConfig materialize(const CommonArgs& args) {
  skm::RunConfig cfg;
  if (!args.config_path.empty()) cfg = skm::parse_config_file(args.config_path);
  for (const auto& s : args.sets) skm::apply_override(cfg, s);
  if (args.seed) cfg.master_seed = *args.seed;
  if (args.paths) cfg.paths = *args.paths;
  if (args.out) cfg.out_dir = *args.out;
  return cfg;
}

int dispatch(const std::function<int(const skm::RunConfig&)>& cmd, const CommonArgs& args) {
  try {
    return cmd(materialize(args));
  } catch (const skm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const skm::RefinementRequired& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Spectral simulator and verification toolkit for the small-mass limit of a damped "
      "stochastic wave system under a constant magnetic field"};
  app.require_subcommand(1);

  CommonArgs verify_args, skm_args, friction_args, counter_args, simulate_args;
  add_common(app.add_subcommand("verify", "run the deterministic invariant grid"), verify_args);
  add_common(app.add_subcommand("skm", "small-mass sweep: mu -> 0 at fixed friction"), skm_args);
  add_common(app.add_subcommand("friction", "friction-removal sweeps: eps -> 0"), friction_args);
  add_common(app.add_subcommand("counterexample",
                                "oscillatory-variance counterexample and the frictionless floor"),
             counter_args);
  add_common(app.add_subcommand("simulate", "single trajectory dump"), simulate_args);

  CLI11_PARSE(app, argc, argv);

  if (app.got_subcommand("verify")) return dispatch(skm::cmd_verify, verify_args);
  if (app.got_subcommand("skm")) return dispatch(skm::cmd_skm, skm_args);
  if (app.got_subcommand("friction")) return dispatch(skm::cmd_friction, friction_args);
  if (app.got_subcommand("counterexample")) return dispatch(skm::cmd_counterexample, counter_args);
  if (app.got_subcommand("simulate")) return dispatch(skm::cmd_simulate, simulate_args);
  return 2;
}

#include "skm/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace skm {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, const std::string& key) {
  try {
    size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' expects a real number, got '" + v + "'");
  }
}

int parse_int(const std::string& v, const std::string& key) {
  try {
    size_t pos = 0;
    const long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return static_cast<int>(x);
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' expects an integer, got '" + v + "'");
  }
}

std::uint64_t parse_u64(const std::string& v, const std::string& key) {
  try {
    size_t pos = 0;
    const unsigned long long x = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' expects an unsigned integer, got '" + v + "'");
  }
}

std::vector<double> parse_list(const std::string& v, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_double(item, key));
  }
  if (out.empty()) throw ConfigError("config: key '" + key + "' expects a list of reals");
  return out;
}

void assign(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "geometry.L")
    cfg.L = parse_double(value, key);
  else if (key == "geometry.n_modes")
    cfg.n_modes = parse_int(value, key);
  else if (key == "geometry.collocation_size")
    cfg.collocation_size = parse_int(value, key);
  else if (key == "physics.mu")
    cfg.mu_list = {parse_double(value, key)};
  else if (key == "physics.mu_list")
    cfg.mu_list = parse_list(value, key);
  else if (key == "physics.eps")
    cfg.eps_list = {parse_double(value, key)};
  else if (key == "physics.eps_list")
    cfg.eps_list = parse_list(value, key);
  else if (key == "physics.drift")
    cfg.drift = value;
  else if (key == "physics.diffusion")
    cfg.diffusion = value;
  else if (key == "physics.noise")
    cfg.noise = value;
  else if (key == "init.u0")
    cfg.u0 = value;
  else if (key == "init.v0")
    cfg.v0 = value;
  else if (key == "sim.T")
    cfg.T = parse_double(value, key);
  else if (key == "sim.dt")
    cfg.dt = parse_double(value, key);
  else if (key == "sim.p")
    cfg.p = parse_double(value, key);
  else if (key == "sim.paths")
    cfg.paths = parse_int(value, key);
  else if (key == "sim.seed")
    cfg.master_seed = parse_u64(value, key);
  else if (key == "sim.threads")
    cfg.threads = parse_int(value, key);
  else if (key == "sim.output_stride")
    cfg.output_stride = parse_int(value, key);
  else if (key == "sim.system") {
    if (value != "second_order" && value != "first_order")
      throw ConfigError("config: sim.system must be second_order or first_order");
    cfg.system = value;
  }
  else if (key == "output.dir")
    cfg.out_dir = value;
  else
    throw ConfigError("config: unknown key '" + key + "'");
}

/// "name" or "name:args" -> {name, args}
std::pair<std::string, std::string> split_tag(const std::string& s) {
  const auto pos = s.find(':');
  if (pos == std::string::npos) return {trim(s), ""};
  return {trim(s.substr(0, pos)), trim(s.substr(pos + 1))};
}

SpectralField parse_profile(const std::string& text, int n, const std::string& key) {
  const auto [name, args] = split_tag(text);
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(n);
  if (name == "zero") {
    // keep zeros
  } else if (name == "decay") {
    const double q = args.empty() ? 1.0 : parse_double(args, key);
    for (int k = 0; k < n; ++k) c[k] = Complex(std::pow(double(k + 1), -q), 0.0);
  } else if (name == "basis") {
    const int k = parse_int(args, key);
    if (k < 1 || k > n) throw ConfigError("config: key '" + key + "' basis index out of range");
    c[k - 1] = Complex(1.0, 0.0);
  } else if (name == "list") {
    const std::vector<double> vals = parse_list(args, key);
    if (static_cast<int>(vals.size()) != 2 * n)
      throw ConfigError("config: key '" + key + "' list needs 2*n_modes entries (re,im pairs)");
    for (int k = 0; k < n; ++k) c[k] = Complex(vals[2 * k], vals[2 * k + 1]);
  } else {
    throw ConfigError("config: key '" + key + "' has unknown profile '" + name + "'");
  }
  return SpectralField(c);
}

}  // namespace

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      assign(cfg, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigError("config: --set expects key=value, got '" + assignment + "'");
  assign(cfg, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

ExperimentConfig build_experiment(const RunConfig& cfg) {
  if (cfg.L <= 0.0) throw ConfigError("config: geometry.L must be positive");
  if (cfg.n_modes < 1) throw ConfigError("config: geometry.n_modes must be >= 1");
  if (cfg.T <= 0.0 || cfg.dt <= 0.0) throw ConfigError("config: sim.T and sim.dt must be positive");
  if (cfg.p < 1.0) throw ConfigError("config: sim.p must be >= 1");
  if (cfg.paths < 1) throw ConfigError("config: sim.paths must be >= 1");
  for (double mu : cfg.mu_list)
    if (mu <= 0.0) throw ConfigError("config: physics.mu values must be positive");
  for (double eps : cfg.eps_list)
    if (eps < 0.0) throw ConfigError("config: physics.eps values must be nonnegative");

  ExperimentConfig out;
  out.master_seed = cfg.master_seed;
  out.threads = cfg.threads;
  out.sim.eig = dirichlet_eigens(cfg.L, cfg.n_modes);

  const auto [noise_name, noise_args] = [&] {
    const auto pos = cfg.noise.find(':');
    if (pos == std::string::npos) return std::make_pair(cfg.noise, std::string());
    return std::make_pair(cfg.noise.substr(0, pos), cfg.noise.substr(pos + 1));
  }();
  if (noise_name == "zero")
    out.sim.noise = NoiseSpec::zero(cfg.n_modes);
  else if (noise_name == "power")
    out.sim.noise = NoiseSpec::power(parse_double(noise_args, "physics.noise"), cfg.n_modes);
  else if (noise_name == "explicit") {
    const std::vector<double> vals = parse_list(noise_args, "physics.noise");
    if (static_cast<int>(vals.size()) != cfg.n_modes)
      throw ConfigError("config: physics.noise explicit list needs n_modes entries");
    out.sim.noise = NoiseSpec::explicit_list(
        Eigen::Map<const Eigen::VectorXd>(vals.data(), vals.size()));
  } else {
    throw ConfigError("config: unknown noise law '" + noise_name + "'");
  }

  const auto [drift_name, drift_args] = [&] {
    const auto pos = cfg.drift.find(':');
    if (pos == std::string::npos) return std::make_pair(cfg.drift, std::string());
    return std::make_pair(cfg.drift.substr(0, pos), cfg.drift.substr(pos + 1));
  }();
  if (drift_name == "zero")
    out.sim.drift = DriftSpec::zero();
  else if (drift_name == "linear")
    out.sim.drift = DriftSpec::linear(parse_double(drift_args, "physics.drift"));
  else if (drift_name == "sine")
    out.sim.drift = DriftSpec::sine(parse_double(drift_args, "physics.drift"));
  else
    throw ConfigError("config: unknown drift kind '" + drift_name + "'");

  const auto [diff_name, diff_args] = [&] {
    const auto pos = cfg.diffusion.find(':');
    if (pos == std::string::npos) return std::make_pair(cfg.diffusion, std::string());
    return std::make_pair(cfg.diffusion.substr(0, pos), cfg.diffusion.substr(pos + 1));
  }();
  if (diff_name == "additive")
    out.sim.diffusion = DiffusionSpec::additive();
  else if (diff_name == "nemytskii_sine")
    out.sim.diffusion = DiffusionSpec::nemytskii_sine(parse_double(diff_args, "physics.diffusion"));
  else
    throw ConfigError("config: unknown diffusion kind '" + diff_name + "'");

  out.sim.u0 = parse_profile(cfg.u0, cfg.n_modes, "init.u0");
  out.sim.v0 = parse_profile(cfg.v0, cfg.n_modes, "init.v0");

  out.grid.T = cfg.T;
  out.grid.dt = cfg.dt;
  out.grid.n_modes = cfg.n_modes;
  out.grid.collocation_size = cfg.collocation_size;
  out.grid.p = cfg.p;
  try {
    out.grid.steps();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  const NoiseValidation nv = validate_noise(out.sim.noise, out.sim.eig);
  if (!nv.all_ok()) throw ConfigError("config: noise class flags inconsistent: " + nv.notes);
  return out;
}

}  // namespace skm

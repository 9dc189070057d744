#pragma once

#include <stdexcept>
#include <string>

namespace skm {

/// Quadrature or sampling grid too coarse for the requested tolerance.
class RefinementRequired : public std::runtime_error {
 public:
  explicit RefinementRequired(const std::string& what) : std::runtime_error(what) {}
};

/// A simulated trajectory left the numerically meaningful range.
class InstabilityError : public std::runtime_error {
 public:
  InstabilityError(const std::string& what, int step, double time, double norm)
      : std::runtime_error(what), step(step), time(time), norm(norm) {}
  int step;
  double time;
  double norm;
};

/// Malformed or inconsistent run configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace skm

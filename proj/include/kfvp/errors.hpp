#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace kfvp {

// Process exit codes used by the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitDivergence = 3,
  kExitIo = 4,
  kExitNonConvergence = 5,
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const { return kExitConfig; }
};

/// Invalid run configuration or basis/grid specification.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Axis index outside the configured dimension.
class DimensionError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Operands built on different grids or bases.
class ShapeError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Derivative order above the configured cap.
class OrderError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Initial-data preset could not be built (e.g. positivity lost at the requested amplitude).
class PresetError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// State violates an invariant (vacuum 1 + rho <= threshold).
class StateError : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return kExitDivergence; }
};

/// Nonfinite values produced by a time step.
class DivergenceError : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return kExitDivergence; }
};

/// Argument outside the domain of a diagnostic (log of a nonpositive value, F <= 0 in F ln F).
class DomainError : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return kExitDivergence; }
};

/// Picard iteration failed to reach tolerance; carries the residual history.
class IterationError : public Error {
 public:
  IterationError(const std::string& what, std::vector<double> residuals)
      : Error(what), residuals_(std::move(residuals)) {}
  int exit_code() const override { return kExitNonConvergence; }
  const std::vector<double>& residuals() const { return residuals_; }

 private:
  std::vector<double> residuals_;
};

class IoError : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return kExitIo; }
};

}  // namespace kfvp

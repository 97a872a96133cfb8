#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace lsl {

/// Invalid user-facing configuration (grid sizes, config files, CLI options).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
  explicit ConfigError(std::vector<std::string> diagnostics);

  const std::vector<std::string>& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::vector<std::string> diagnostics_;
};

/// A caller broke an operation's precondition (mismatched grids, wrong lengths).
class ContractError : public std::invalid_argument {
 public:
  explicit ContractError(const std::string& what) : std::invalid_argument(what) {}
};

/// Numerical breakdown: negative spectrum, CFL violation, failed factorization.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Cholesky hit a non-positive pivot. The pivot index points at the first
/// time sample whose snapshot is not independent of the earlier ones.
class CholeskyError : public NumericalError {
 public:
  CholeskyError(int pivot, double value);

  int pivot() const noexcept { return pivot_; }
  double value() const noexcept { return value_; }

 private:
  int pivot_;
  double value_;
};

/// Measured data contradicts a structural property (e.g. MIMO reciprocity).
class DataInconsistency : public NumericalError {
 public:
  explicit DataInconsistency(const std::string& what) : NumericalError(what) {}
};

}  // namespace lsl

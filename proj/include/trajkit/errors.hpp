#pragma once

#include <stdexcept>
#include <string>

namespace trajkit {

/// Malformed or inconsistent input data (bad files, invalid trajectories,
/// mismatched grids). Mapped to exit code 2 by the CLI.
class DataError : public std::runtime_error {
public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure (diverged integration, non-finite gradients).
/// Mapped to exit code 3 by the CLI.
class NumericError : public std::runtime_error {
public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace trajkit

#pragma once

#include <stdexcept>

namespace wgm {

// Invalid user-supplied parameters or malformed input files. CLI exit code 2.
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A computation that cannot proceed numerically (singular drive, insufficient
// grid resolution, non-convergence). CLI exit code 3.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace wgm

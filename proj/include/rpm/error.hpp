#pragma once

#include <stdexcept>
#include <string>

namespace rpm {

// Exception hierarchy. The CLI maps these onto exit codes:
// UsageError -> 2, VerificationError -> 1, ResourceError/NumericalError -> 3.

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct VerificationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace rpm

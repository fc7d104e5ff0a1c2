#pragma once

#include <stdexcept>
#include <string>

namespace svdmds {

// Precondition violations throw std::invalid_argument. Failures of the
// numerical kernels themselves (non-convergence, non-finite output) throw
// NumericError so callers can tell bad input from bad luck.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

}  // namespace svdmds

#pragma once

#include <stdexcept>
#include <string>

namespace sarrs {

// Invalid caller input: bad dimensions, out-of-range parameters, malformed files.
// The CLI maps this to exit code 2.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure while computing: divergence, non-finite intermediates,
// degenerate problems detected mid-solve. The CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sarrs

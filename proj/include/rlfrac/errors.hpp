#pragma once

#include <stdexcept>
#include <string>

namespace rlfrac {

// Base of everything the library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precondition or validation failure (bad parameter, bad grid, bad domain).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Exponent pair outside the admissible window of the regularity estimates.
class InadmissibleExponent : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// A numerical method did not reach its tolerance (non-convergence, blow-up).
class NumericalFailure : public Error {
 public:
  NumericalFailure(std::string operation, const std::string& what)
      : Error(operation + ": " + what), operation_(std::move(operation)) {}

  const std::string& operation() const noexcept { return operation_; }

 private:
  std::string operation_;
};

}  // namespace rlfrac

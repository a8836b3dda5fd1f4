#pragma once

#include <stdexcept>
#include <string>

namespace loopzeta {

/// An input violates the documented precondition of an operation.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation cannot deliver a value at the requested accuracy
/// (non-transient walk, enumeration budget exceeded, singular system, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace loopzeta

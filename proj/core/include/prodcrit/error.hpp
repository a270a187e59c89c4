#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace prodcrit {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Matrix or vector shapes do not fit the requested operation.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Non-finite input, solver non-convergence, or a numerically unusable result.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A caller violated a documented precondition (e.g. unsorted singular values).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// A matrix or vector is not a valid quantum state.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Subsystem index sets that do not form a valid partition or selection.
class PartitionError : public Error {
 public:
  using Error::Error;
};

/// Malformed partition text. `position()` is the 0-based character offset.
class ParseError : public PartitionError {
 public:
  ParseError(const std::string& what, std::size_t position)
      : PartitionError(what + " (at position " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// The rank test accepted a split, but the extracted factor has (near) zero trace.
class DegenerateFactorError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Two routes that must agree (semiproduct test vs. factor peeling) disagreed.
class InconsistencyError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace prodcrit

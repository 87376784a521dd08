#pragma once

#include <stdexcept>
#include <string>

namespace qauth {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes are incompatible (the message names both shapes).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A value violates a domain invariant: a non-Hermitian input to the
/// eigensolver, a density operator with trace != 1, a non-unitary encoding.
class InvariantError : public Error {
 public:
  using Error::Error;
};

/// An attack construction was refused because its precondition does not
/// hold (a singular block, mismatched artifacts).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A numeric post-condition failed during a computation that should have
/// succeeded for valid input.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Invalid experiment configuration or command-line usage.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace qauth

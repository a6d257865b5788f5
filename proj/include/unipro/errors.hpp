#pragma once

#include <stdexcept>
#include <string>

namespace unipro {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands built over different (p, N) contexts were combined.
class ContextMismatch : public Error {
 public:
  using Error::Error;
};

/// Inverse of zero (or of a non-unit where a unit is required).
class UndefinedInverse : public Error {
 public:
  using Error::Error;
};

/// A mathematical precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Shape mismatch between vectors, matrices or algebras.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Not enough p-adic digits left to produce a meaningful answer.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

/// An iteration that must converge p-adically did not. Always a bug.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Two independent computations disagree beyond certified precision.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// Finite enumeration would exceed its element budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace unipro

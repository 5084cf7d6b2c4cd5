// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace anwt {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A configuration or plan violates a documented invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// An input violates an operation's precondition (shape, symmetry, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// The requested shape is outside what an algorithm supports.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Floating-point or convergence failure inside a numerical kernel.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class DegeneracyError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class RankAnomalyError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace anwt

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace gstable {

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad arguments, invalid members, violated preconditions.  Maps to CLI exit code 2.
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

/// Numerical failures at runtime (quadrature accuracy, bracketing, overflow).
/// Maps to CLI exit code 1.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// gamma == 0: the shape exponent is ill-defined there.
class IllDefinedShapeError : public InvalidInputError {
 public:
  IllDefinedShapeError() : InvalidInputError("gamma = 0 is ill-defined for this family") {}
};

/// theta at or beyond the boundary 1/c of the natural domain.
class SingularTiltError : public InvalidInputError {
 public:
  using InvalidInputError::InvalidInputError;
};

/// Complex argument outside the analyticity strip Re(1 - izc) > 0.
class StripViolationError : public InvalidInputError {
 public:
  using InvalidInputError::InvalidInputError;
};

/// Operation on a member that is not a valid characteristic function.
/// Carries the offending report formatted into the message; the caller can
/// re-run validate() for structured access.
class ValidityError : public InvalidInputError {
 public:
  using InvalidInputError::InvalidInputError;
};

/// Wrong regime for an operation (e.g. geometric gamma series outside case a).
class RegimeError : public InvalidInputError {
 public:
  using InvalidInputError::InvalidInputError;
};

/// Data incompatible with the support of the requested member.
class SupportError : public InvalidInputError {
 public:
  using InvalidInputError::InvalidInputError;
};

/// Degenerate member where a density or tilt table is requested.
class DegenerateError : public InvalidInputError {
 public:
  using InvalidInputError::InvalidInputError;
};

/// Text ingestion failure; remembers the 1-based row.
class ParseError : public InvalidInputError {
 public:
  ParseError(const std::string& what, long row)
      : InvalidInputError(what + " (row " + std::to_string(row) + ")"), row_(row) {}
  long row() const { return row_; }

 private:
  long row_;
};

class InsufficientDataError : public InvalidInputError {
 public:
  using InvalidInputError::InvalidInputError;
};

/// Quadrature could not reach the requested tolerance; carries the bound it did reach.
class AccuracyError : public NumericError {
 public:
  AccuracyError(const std::string& what, double achieved)
      : NumericError(what + " (achieved bound " + std::to_string(achieved) + ")"),
        achieved_(achieved) {}
  double achieved() const { return achieved_; }

 private:
  double achieved_;
};

class OverflowError : public NumericError {
 public:
  using NumericError::NumericError;
};

class BracketingError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Rejection sampler acceptance rate below the configured floor.
class EfficiencyError : public NumericError {
 public:
  using NumericError::NumericError;
};

class ConvergenceError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace gstable

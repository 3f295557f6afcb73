#pragma once

#include <stdexcept>
#include <string>

namespace selinf {

// Two families: bad input (CLI exit code 2) and numerical failure (exit code 3).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DimensionMismatch : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ZeroContrast : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NotEstimable : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ConstantColumn : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class RankDeficient : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class EventViolated : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateInterval : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class BracketFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SolverStalled : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class AcceptanceTooLow : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace selinf

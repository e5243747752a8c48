#pragma once

#include <stdexcept>
#include <string>

namespace nmrdiscord {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input: a violated precondition or a malformed file. CLI exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// The computation itself could not produce a meaningful number. CLI exit code 3.
class NumericError : public Error {
 public:
  using Error::Error;
};

class NotHermitian : public ValidationError {
 public:
  using ValidationError::ValidationError;
};
class TraceNotOne : public ValidationError {
 public:
  using ValidationError::ValidationError;
};
class NotPositive : public ValidationError {
 public:
  using ValidationError::ValidationError;
};
class DimMismatch : public ValidationError {
 public:
  using ValidationError::ValidationError;
};
class PurityOutOfRange : public ValidationError {
 public:
  using ValidationError::ValidationError;
};
class InvalidBdVector : public ValidationError {
 public:
  using ValidationError::ValidationError;
};
class ScheduleOverrun : public ValidationError {
 public:
  using ValidationError::ValidationError;
};
class PreconditionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};
class ParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ZeroDeviation : public NumericError {
 public:
  using NumericError::NumericError;
};
class FitDivergence : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace nmrdiscord

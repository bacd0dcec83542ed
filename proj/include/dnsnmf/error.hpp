#pragma once

#include <stdexcept>
#include <string>

namespace dnsnmf {

/// Base class of all errors thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Incompatible or invalid matrix shapes.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Invalid parameter or configuration value.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Input data outside the mathematical domain of an operation
/// (e.g. negative entries where nonnegativity is required).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed file content (CSV, PGM, label files, checkpoints).
class DataFormatError : public Error {
 public:
  using Error::Error;
};

/// Numerical breakdown inside a solver. Carries the iteration at which
/// the failure was detected (-1 if not applicable).
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what, long iteration = -1)
      : Error(what), iteration_(iteration) {}

  long iteration() const noexcept { return iteration_; }

 private:
  long iteration_;
};

}  // namespace dnsnmf

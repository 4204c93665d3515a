#pragma once

#include <stdexcept>
#include <string>

namespace incentives {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input: bad dimensions, non-finite entries,
/// kernels that are not row stochastic, unknown JSON keys.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A modelling assumption required by the operation does not hold for the
/// given cost or target (e.g. boundary posteriors under an infinite-slope cost).
class AssumptionError : public Error {
 public:
  using Error::Error;
};

/// The experiment carries no usable information for the requested operation.
class DegenerateExperimentError : public Error {
 public:
  using Error::Error;
};

/// The target cannot be implemented; raised by operations that need a
/// contract to exist.
class NotImplementableError : public Error {
 public:
  using Error::Error;
};

/// Shape or size outside what the operation supports.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// The LP kernel failed to reach a trustworthy answer.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace incentives

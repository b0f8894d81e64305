#pragma once

#include <stdexcept>
#include <string>

namespace bvpgreen {

/// Base for every failure raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// LU pivot fell below the relative singularity threshold.
struct Singular : Error {
  using Error::Error;
};

/// Adaptive integrator needed a step below 1e-14 (b - a).
struct StepUnderflow : Error {
  using Error::Error;
};

/// Homogeneous BVP has a nontrivial kernel at this parameter value.
struct NonUnique : Error {
  using Error::Error;
};

/// det H_Y(b) vanishes, so no Green matrix exists.
struct SingularBoundary : Error {
  using Error::Error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

/// A post-condition check on a computed result failed.
struct NumericalFailure : Error {
  using Error::Error;
};

/// Malformed input (configuration, interval, tolerance).
struct InvalidArgument : Error {
  using Error::Error;
};

}  // namespace bvpgreen

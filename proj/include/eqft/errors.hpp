#pragma once

#include <stdexcept>
#include <string>

namespace eqft {

/// Sampling window too small for the requested object (aliasing/tail mass).
struct GridExtentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Quadrature or time-stepping did not reach the requested accuracy.
struct AccuracyError : std::runtime_error {
  double achieved = 0.0;
  AccuracyError(const std::string& msg, double got) : std::runtime_error(msg), achieved(got) {}
};

/// Constrained construction (e.g. moment-vanishing mollifier) missed tolerance.
struct ConstructionError : std::runtime_error {
  double residual = 0.0;
  ConstructionError(const std::string& msg, double res) : std::runtime_error(msg), residual(res) {}
};

/// Operands live on incompatible grids/bases.
struct IncompatibilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Requested variant is outside the implemented surface.
struct UnsupportedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace eqft

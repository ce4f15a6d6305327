// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hamricc {

using Cx = std::complex<double>;

/// Shared numeric tolerances. A single instance is threaded through every
/// module so one run has one reportable accuracy profile.
struct NumericPolicy {
  double rel_tol = 1e-10;       ///< relative tolerance for exact-algebra identities
  double quad_abs_tol = 1e-10;  ///< absolute tolerance for contour quadratures
  double axis_tol = 1e-9;       ///< |Re l| <= axis_tol*||T0|| counts as "on the axis"
  double residual_tol = 1e-8;   ///< relative Riccati residual bound
  double proj_tol_floor = 1e-8; ///< floor for projection-algebra defect bounds
  double match_tol = 1e-8;      ///< relative tolerance for spectrum matching and oracle agreement
  double pbh_tol = 1e-8;        ///< PBH margin threshold, relative to ||A||+||B||
  double graph_margin_min = 1e-10; ///< smallest admissible top-block singular value
  std::size_t quad_max_evals = 2000000; ///< integrand evaluation budget per contour integral
};

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Input matrices with inconsistent shapes.
struct DimensionError : Error {
  using Error::Error;
};

/// A precondition on parameters (exponent ranges, orderings, ...) is violated.
struct ParameterError : Error {
  using Error::Error;
};

/// A grid point or shift hit the spectrum of the operator it must avoid.
struct SingularityError : Error {
  using Error::Error;
};

/// The operator has spectrum on (or too close to) the imaginary axis, so no
/// spectrum-free strip exists and the dichotomy construction cannot start.
struct NotDichotomousError : Error {
  std::vector<Cx> offending;
  NotDichotomousError(const std::string& msg, std::vector<Cx> eigs)
      : Error(msg), offending(std::move(eigs)) {}
};

/// A quadrature did not reach the requested tolerance within its node budget.
struct AccuracyError : Error {
  double achieved;
  AccuracyError(const std::string& msg, double achieved_estimate)
      : Error(msg), achieved(achieved_estimate) {}
};

/// Internal identities (projection algebra, cross-method agreement) violated
/// beyond what the quadrature error estimates allow.
struct ConsistencyError : Error {
  using Error::Error;
};

/// Random generation exhausted its retry budget.
struct GenerationError : Error {
  using Error::Error;
};

/// Config file malformed or self-contradictory.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace hamricc

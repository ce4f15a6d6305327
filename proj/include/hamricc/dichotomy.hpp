// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "hamricc/hamiltonian.hpp"
#include "hamricc/quadrature.hpp"
#include "hamricc/types.hpp"

namespace hamricc {

/// Contour data for the dichotomy integrals: vertical lines at Re = +-h inside
/// the spectrum-free strip, truncated at |Im| = t_max, with rho the inner
/// radius of the semicircle contours of the S/Q correction identity.
struct ContourSpec {
  double h = 0.0;
  double t_max = 0.0;
  double rho = 0.0;
  double abs_tol = 1e-10;
  QuadRule rule = QuadRule::adaptive_simpson;
};

/// Picks the strip half-width h = min |Re sigma(T0)| / 2, rho = h/2, and a
/// truncation height t_max such that the sampled integrand tail stays below
/// abs_tol/10. Throws NotDichotomousError when sigma(T0) touches the axis.
ContourSpec choose_strip(const Eigen::MatrixXcd& t0, const NumericPolicy& pol = {},
                         const Eigen::VectorXcd* spectrum = nullptr);

struct ContourIntegral {
  Eigen::MatrixXcd value;
  double quad_error = 0.0;
  double tail_bound = 0.0;
  std::size_t evals = 0;
  double error_estimate() const { return quad_error + tail_bound; }
};

/// L_sign = (sign / 2 pi i) Int over the line Re = sign*h of
/// (1/lambda) (T0 - lambda)^{-1} d lambda, with a certified tail bound folded
/// into the error estimate. sign is +1 or -1.
ContourIntegral contour_L(const Eigen::MatrixXcd& t0, const ContourSpec& spec, int sign,
                          const NumericPolicy& pol = {});

struct DichotomyResult {
  Eigen::MatrixXcd Lplus, Lminus;
  Eigen::MatrixXcd Pplus, Pminus;
  Eigen::MatrixXcd basis_plus, basis_minus;  // orthonormal columns
  double tail_bound = 0.0;
  double quadrature_error_estimate = 0.0;
  double tolerance = 0.0;  // defect bound used for the checks
  Eigen::Index stable_count = 0, unstable_count = 0;
  struct Defects {
    double completeness = 0.0;      // ||P+ + P- - I||
    double idempotency_plus = 0.0;  // ||P+^2 - P+||
    double idempotency_minus = 0.0;
    double l_product = 0.0;         // max(||L+ L-||, ||L- L+||)
    double inverse_sum = 0.0;       // ||L+ + L- - T0^{-1}||
    double invariance_minus = 0.0;  // ||(I - P-) T0 P-|| / ||T0||
    double invariance_plus = 0.0;
    double basis_residual_minus = 0.0;  // ||T0 B - B (B^H T0 B)|| / ||T0||
    double basis_residual_plus = 0.0;
    double trace_deviation = 0.0;  // |trace(P-) - stable_count|
  } defects;
};

/// P_+- = T0 L_+-, with the full projection algebra verified against the
/// quadrature error estimates and orthonormal invariant-subspace bases
/// extracted by rank-revealing QR. Throws ConsistencyError when a defect
/// exceeds max(proj_tol_floor, 10 * quadrature estimate).
DichotomyResult projections(const Eigen::MatrixXcd& t0, const ContourIntegral& lplus,
                            const ContourIntegral& lminus, const Eigen::VectorXcd& spectrum,
                            const NumericPolicy& pol = {});

struct OracleProjections {
  Eigen::MatrixXcd Pplus, Pminus;
  double eigen_gap = 0.0;           // min |Re sigma(T0)|
  double eigvec_condition = 0.0;    // condition number of the eigenvector matrix
  bool used_schur_fallback = false; // ordered-triangularization route taken
  double idempotency_defect = 0.0;
};

/// Quadrature-free projections from an eigendecomposition of T0; falls back to
/// an ordered Schur block-triangularization with one Sylvester solve when the
/// eigenbasis is ill-conditioned (condition above 1e6).
OracleProjections oracle_projections(const Eigen::MatrixXcd& t0, const NumericPolicy& pol = {},
                                     const Eigen::ComplexEigenSolver<Eigen::MatrixXcd>* eig =
                                         nullptr);

struct PvReport {
  Eigen::MatrixXcd value;      // the principal-value integral
  double quad_error = 0.0;     // central + tail quadrature estimates
  double tail_coeff = 0.0;     // sampled coefficient C of the 1/t^2 remainder
  double bound = 0.0;          // abs_tol + C / t_max
  double defect = -1.0;        // ||value - (P+ - P-)||, when provided
  bool checked = false;
  bool ok = true;
};

/// (1/pi i) times the principal value at infinity of the axis integral of the
/// resolvent. The symmetric pairing (T0 - it)^{-1} + (T0 + it)^{-1} realizes
/// the principal-value cancellation; the integral is evaluated directly up to
/// t_max and in the substituted variable u = 1/t beyond, so the truncation
/// height only selects the representation switch. When `expected` (= P+ - P-)
/// is given, the identity is asserted within abs_tol + C/t_max.
PvReport principal_value_difference(const Eigen::MatrixXcd& t0, const ContourSpec& spec,
                                    const NumericPolicy& pol = {},
                                    const Eigen::MatrixXcd* expected = nullptr,
                                    const Eigen::VectorXcd* spectrum = nullptr);

struct SqCheckReport {
  double defect_plain = 0.0;     // ||(Q0+ - Q0-) - (PV + K)||
  double defect_weighted = 0.0;  // same in the V0 geometry
  double quad_error = 0.0;       // combined estimate of the three quadratures
  double k_norm = 0.0;           // ||K||
  bool ok = false;
};

/// Verifies Q0+ - Q0- = (1/pi i) PV Int_{gamma1} (S0 - lambda)^{-1} d lambda + K
/// with K = diag(K1, K2) built from the two semicircle integrals at radius
/// spec.rho. Requires sigma(A) in the open left half-plane and
/// spec.rho < min |sigma(A)|.
SqCheckReport sq_correction_check(const HamiltonianMatrices& ham, const ContourSpec& spec,
                                  const NumericPolicy& pol = {});

}  // namespace hamricc

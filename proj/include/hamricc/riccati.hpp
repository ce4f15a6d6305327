// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "hamricc/hamiltonian.hpp"
#include "hamricc/types.hpp"

namespace hamricc {

struct GraphCheck {
  bool is_graph = false;
  bool dimension_mismatch = false;  // basis column count != n
  double margin = 0.0;              // smallest singular value of the pivot block
  Eigen::Index k = 0, n = 0;
};

/// True iff the 2n x k basis has k = n and a uniformly invertible top block;
/// the subspace is then the graph of an operator H_{-r} -> H_{-s}^(*).
GraphCheck graph_check(const Eigen::MatrixXcd& basis, const NumericPolicy& pol = {});
/// Dual test on the bottom block (the subspace is a co-graph, X = Y^{-1}
/// parametrization from the second component).
GraphCheck cograph_check(const Eigen::MatrixXcd& basis, const NumericPolicy& pol = {});

struct AngularExtraction {
  Eigen::MatrixXcd X;      // the angular operator
  double margin = 0.0;     // pivot-block smallest singular value
  double residual = 0.0;   // column-space agreement defect
  bool poorly_angular = false;  // margin in [graph_margin_min, 1e-6]
  double residual_tolerance_scale = 1.0;  // widened by 1/margin when poorly angular
};

/// X = U2 U1^{-1} from the orthonormal graph basis [U1; U2], via a
/// column-pivoted solve. Throws ParameterError when the basis is not a graph.
AngularExtraction angular_operator(const Eigen::MatrixXcd& basis, const NumericPolicy& pol = {});
/// Y = W1 W2^{-1} from a co-graph basis [W1; W2].
AngularExtraction cograph_operator(const Eigen::MatrixXcd& basis, const NumericPolicy& pol = {});

struct AngularDiagnostics {
  Eigen::MatrixXcd F1, F2;  // I - Q0- + P0-,  I - P0- + Q0-
  double cond_F1 = 0.0, cond_F2 = 0.0;          // V0-weighted condition numbers
  double sv_min_F1 = 0.0, sv_min_F2 = 0.0;      // V0-weighted smallest singular values
  double top_block_min_sv = 0.0;                // of the V0- basis
  Eigen::VectorXd pq_diff_svals;                // singular values of P0- - Q0- (V0 geometry)
};

AngularDiagnostics f1f2_diagnostics(const HamiltonianMatrices& ham,
                                    const Eigen::MatrixXcd& p0minus,
                                    const Eigen::MatrixXcd& basis_minus,
                                    const NumericPolicy& pol = {});

struct ResidualReport {
  double weighted = 0.0;      // || L*^{-s} E L*^{-(1-r)} ||, E the Riccati defect
  double plain = 0.0;         // || E ||
  double weighted_rel = 0.0;  // relative to the largest term in the same geometry
  double plain_rel = 0.0;
};

/// Riccati residual E = A^H X + X A - X B B^H X + C^H C, measured both as a
/// map H_{1-r}^(*) -> H_{-s}^(*) (the domain on which the equation holds) and
/// in the plain geometry.
ResidualReport riccati_residual(const SystemData& sys, const HilbertScale& scale,
                                const Eigen::MatrixXcd& x, const NumericPolicy& pol = {});

struct SolutionProperties {
  double herm_defect_minus = 0.0;  // ||X - X^H|| / ||X||
  double min_eig_minus = 0.0;      // smallest eigenvalue of Herm(X0-)
  double herm_defect_plus = 0.0;
  double max_eig_plus = 0.0;       // largest eigenvalue of Herm(X0+)
  bool inverse_checked = false;    // only under PBH controllability + observability
  double inverse_defect = 0.0;     // ||X0+ Y0+ - I||
  double inverse_agreement = 0.0;  // ||X0+^{-1} - Y0+||
  bool ok = false;
};

SolutionProperties solution_properties(const Eigen::MatrixXcd& x0minus,
                                       const std::optional<Eigen::MatrixXcd>& x0plus,
                                       const std::optional<Eigen::MatrixXcd>& y0plus,
                                       bool pbh_controllable, bool pbh_observable,
                                       const NumericPolicy& pol = {});

struct SectorScanPoint {
  Cx lambda;
  double weighted_norm;  // resolvent norm H_{-r} -> H_{-r}
  double decay_norm;     // resolvent norm H_{-r} -> H
};

struct ClosedLoop {
  Eigen::MatrixXcd Acl;  // A - B B^H X0-
  Eigen::VectorXcd spectrum;
  double max_real = 0.0;
  double match_distance = 0.0;  // against sigma(T0) in the left half-plane
  double match_tolerance = 0.0;
  bool spectrum_ok = false;
  std::vector<SectorScanPoint> sector_scan;
  double sector_bound = 0.0;  // max |lambda| * weighted resolvent norm over the scan
};

/// Closed-loop operator with the similarity check sigma(Acl) = sigma(T0) in
/// the open left half-plane, plus an optional sector/axis scan in the
/// H_{-r}-weighted geometry. Throws ConsistencyError on spectrum mismatch.
ClosedLoop closed_loop(const SystemData& sys, const HilbertScale& scale,
                       const Eigen::MatrixXcd& x0minus, const Eigen::VectorXcd& t0_spectrum,
                       const NumericPolicy& pol = {}, bool with_scan = false);

struct ScalarSolution {
  double x_minus = 0.0;
  double x_plus = 0.0;
  std::array<Cx, 2> spectrum{};
  bool lyapunov_branch = false;
};

/// Closed-form 1-d solution for the system (A, B, C) = ([-a], [b], [c]):
/// X0- = (sqrt(a^2 + b^2 c^2) - a)/b^2, X0+ = -(sqrt(a^2 + b^2 c^2) + a)/b^2,
/// spectrum +-sqrt(a^2 + b^2 c^2). For b = 0 the Lyapunov branch
/// X0- = c^2 / (2a) requires a > 0.
ScalarSolution scalar_oracle(double a, double b, double c);

/// Solves A1 X + X A2 = W by complex Schur reduction and triangular
/// back-substitution. Throws SingularityError when the spectra of A1 and -A2
/// overlap.
Eigen::MatrixXcd solve_sylvester(const Eigen::MatrixXcd& a1, const Eigen::MatrixXcd& a2,
                                 const Eigen::MatrixXcd& w);

/// Newton-Kleinman iteration for the stabilizing Riccati solution, started
/// from X = 0. Valid for stable A; each step is one Lyapunov solve. This is
/// the quadrature-free oracle path for X0-.
Eigen::MatrixXcd newton_kleinman(const SystemData& sys, const NumericPolicy& pol = {},
                                 int max_iter = 100);

/// Three recorded geometries of one solution matrix: the finite model
/// collapses X1-, XM- and X- to a single matrix measured in different norms.
struct SolutionNorms {
  double v0 = 0.0;  // H_{-r} -> H_{-s}^(*)
  double h = 0.0;   // plain
  double v1 = 0.0;  // H_s^(*) -> H_r
};

SolutionNorms solution_norms(const HilbertScale& scale, const SystemData& sys,
                             const Eigen::MatrixXcd& x);

}  // namespace hamricc

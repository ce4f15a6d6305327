// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "hamricc/scale.hpp"
#include "hamricc/types.hpp"

namespace hamricc {

/// The Riccati problem statement: the triple (A, B, C) together with the
/// unboundedness exponents (r, s). B is read as a map U -> H_{-r}, C as a map
/// H_s^(*) -> Y; the standing assumption is r + s < 1.
struct SystemData {
  Eigen::MatrixXcd A;  // n x n
  Eigen::MatrixXcd B;  // n x m
  Eigen::MatrixXcd C;  // p x n
  double r = 0.0;
  double s = 0.0;
  std::string label;

  Eigen::Index n() const { return A.rows(); }
  Eigen::Index m() const { return B.cols(); }
  Eigen::Index p() const { return C.rows(); }

  void validate() const;
};

/// Weights of a product space: the top and bottom block each carry one scale
/// space. V0 = H_{-r} x H_{-s}^(*), V1 = H_s^(*) x H_r, V = H x H.
struct BlockWeights {
  SpaceTag top, bottom;
};

/// The assembled Hamiltonian with its split and block geometry. T and T0 are
/// the same matrix at finite dimension; operations therefore take a norm
/// selector instead of a different operator.
struct HamiltonianMatrices {
  SystemData sys;
  HilbertScale scale;
  Eigen::MatrixXcd T0;  // [[A, -B B^H], [-C^H C, -A^H]]
  Eigen::MatrixXcd S0;  // diag(A, -A^H)
  Eigen::MatrixXcd R;   // T0 - S0, zero diagonal blocks
  BlockWeights v0, v1, v;

  Eigen::Index n() const { return sys.n(); }

  /// The 2n x 2n weight matrix of a product space (block-diagonal fractional
  /// powers).
  Eigen::MatrixXcd block_weight(const BlockWeights& w) const;

  /// Operator norm of a 2n x 2n matrix as a map src -> dst in the weighted
  /// geometry.
  double weighted_norm(const Eigen::MatrixXcd& m, const BlockWeights& src,
                       const BlockWeights& dst) const;
};

HamiltonianMatrices assemble(const SystemData& sys, const NumericPolicy& pol = {});

struct PbhMargin {
  Cx eigenvalue;
  double margin;
};

struct PbhReport {
  bool ok = false;
  double threshold = 0.0;
  std::vector<PbhMargin> margins;
};

/// Hautus rank test at every eigenvalue of A: smallest singular value of
/// [A - lambda I, B]. Equivalent at finite dimension to the resolvent-kernel
/// controllability condition (the intersection over resolvent points equals
/// the unreachable subspace).
PbhReport pbh_controllability(const SystemData& sys, const NumericPolicy& pol = {});
/// Dual test with [A - lambda I; C] stacked.
PbhReport pbh_observability(const SystemData& sys, const NumericPolicy& pol = {});

struct AxisKernelTest {
  Cx eigenvalue;
  double margin_observation;  // smallest sv of [A - it; C]
  double margin_control;      // smallest sv of [A^H + it; B^H]
};

struct SpectralGapReport {
  bool condition_holds = true;   // kernel condition at every axis eigenvalue of A
  bool t0_axis_free = true;      // sigma(T0) avoids the imaginary axis
  bool consistent = true;        // the two statements agree
  std::vector<AxisKernelTest> axis_tests;
  std::vector<Cx> t0_axis_eigenvalues;
};

/// Checks the spectral-gap criterion: T0 has no eigenvalues on the imaginary
/// axis iff ker(A - it) cap ker C and ker(A^H + it) cap ker B^H are trivial at
/// every axis eigenvalue it of A. Cross-checks against sigma(T0).
SpectralGapReport spectral_gap_check(const SystemData& sys, const NumericPolicy& pol = {});

/// The two fundamental symmetries on H x H.
struct IndefiniteForm {
  Eigen::MatrixXcd J;       // [[0, -iI], [iI, 0]]
  Eigen::MatrixXcd Jtilde;  // [[0, I], [I, 0]]
  static IndefiniteForm make(Eigen::Index n);
};

struct SymmetryDefects {
  double j_identity_defect = 0.0;       // ||J T0 + T0^H J|| / ||T0||
  double dissipativity_excess = 0.0;    // max over samples of Re<Jt T0 v, v> / (||T0|| ||v||^2)
  bool ok = false;
};

/// Verifies <T0 v, w>_J = -<v, T0 w>_J as a matrix identity and
/// Re<T0 v, v>_~ <= 0 on random samples.
SymmetryDefects j_symmetry_check(const HamiltonianMatrices& ham, const IndefiniteForm& form,
                                 int samples, const NumericPolicy& pol = {},
                                 std::uint64_t seed = 20240601u);

struct SpectrumSymmetryReport {
  double max_match_distance = 0.0;
  double tolerance = 0.0;
  bool ok = false;
  std::vector<Cx> spectrum;
};

/// Matches sigma(T0) against its reflection lambda -> -conj(lambda).
SpectrumSymmetryReport spectrum_symmetry_check(const HamiltonianMatrices& ham,
                                               const NumericPolicy& pol = {});

struct SectorSample {
  Cx lambda;
  double norm;  // ||(A - mu - lambda)^{-1}||
};

/// Sampled certificate of quasi-sectoriality of A with shift mu: the smallest
/// M with ||(A - mu - lambda)^{-1}|| <= M/|lambda| over the sampled sector
/// boundary. The certified region is the sample set only.
struct SectorEstimate {
  double theta = 0.0;
  double M = 0.0;
  double rho = 0.0;
  double mu = 0.0;
  std::vector<SectorSample> certified_grid;
};

/// Samples the boundary rays arg = +-(pi/2 + theta) out to radius 10 ||A|| and
/// the arc at radius rho. Throws SingularityError when sigma(A - mu)
/// intersects the sampled sector region.
SectorEstimate certify_quasi_sectorial(const Eigen::MatrixXcd& a, double theta, double mu,
                                       double rho, int grid_density,
                                       const NumericPolicy& pol = {});

enum class ResolventNorm { v0, v, v0_to_v1, v0_to_v };

/// Norms of (T0 - it)^{-1} in the selected geometry over a grid of axis
/// points. Every grid point is checked against sigma(T0) first. Results are
/// listed in grid order.
std::vector<std::pair<double, double>> axis_resolvent_scan(
    const HamiltonianMatrices& ham, ResolventNorm which, const std::vector<double>& ts,
    const NumericPolicy& pol = {}, const Eigen::VectorXcd* spectrum = nullptr);

/// Same scan applied to the resolvent difference
/// (T0 - it)^{-1} - (S0 - it)^{-1}, measured in the V0 geometry.
std::vector<std::pair<double, double>> axis_resolvent_diff_scan(
    const HamiltonianMatrices& ham, const std::vector<double>& ts,
    const NumericPolicy& pol = {}, const Eigen::VectorXcd* spectrum = nullptr);

/// Smallest |t| >= t_from at which ||R (S0 - it)^{-1}||_{V0} drops below 1/2;
/// the practical inner radius for the perturbation estimates.
double rho1_estimate(const HamiltonianMatrices& ham, double t_from = 1e-2);

}  // namespace hamricc

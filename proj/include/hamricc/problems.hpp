// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>

#include "hamricc/hamiltonian.hpp"
#include "hamricc/types.hpp"

namespace hamricc {

enum class ProblemKind {
  scalar,
  random_stable,
  random_shifted,
  heat1d,
  axis_eigen_detect,
  custom,
};

/// Deterministic description of a desk-scale test system. Identical specs
/// generate bit-identical systems under one arithmetic profile.
struct ProblemSpec {
  ProblemKind kind = ProblemKind::scalar;
  Eigen::Index n = 1, m = 1, p = 1;
  double r = 0.0, s = 0.0;
  std::uint64_t seed = 1;
  std::string label;

  // scalar
  double a = 1.0, b = 1.0, c = 1.0;
  // random_stable
  double margin = 0.5;
  // random_shifted
  double mu = 1.0;
  Eigen::Index k_unstable = 1;
  // heat1d: near-boundary bump positions as fractions of the interval
  double control_node = 0.05, obs_node = 0.95;
  // axis_eigen_detect
  double omega = 1.0;
  bool axis_zero_obs = false;  // the constructed-failure variant

  // custom systems (CLI matrix input)
  std::optional<Eigen::MatrixXcd> A_custom, B_custom, C_custom;
};

SystemData gen_scalar(double a, double b, double c);
SystemData gen_random_stable(Eigen::Index n, Eigen::Index m, Eigen::Index p,
                             std::uint64_t seed, double margin, double r, double s,
                             const NumericPolicy& pol = {});
SystemData gen_random_shifted(Eigen::Index n, Eigen::Index m, Eigen::Index p,
                              std::uint64_t seed, double mu, Eigen::Index k_unstable,
                              double r, double s, const NumericPolicy& pol = {});
/// Discrete Dirichlet Laplacian A = (n+1)^2 tridiag(1, -2, 1) with single-node
/// control/observation bumps lifted by Lambda^r / Lambda^s so the scale norms
/// are mesh-uniform while the plain norms grow with n.
SystemData gen_heat1d(Eigen::Index n, double r, double s, double control_node,
                      double obs_node);
/// A with one purely imaginary eigenvalue i*omega whose eigenvector is seen by
/// C and whose adjoint eigenvector is seen by B^H, so the Hamiltonian is
/// dichotomous despite sigma(A) meeting the axis. zero_obs constructs the
/// failing variant.
SystemData gen_axis_eigen_detect(Eigen::Index base_n, double r, double s, double omega,
                                 bool zero_obs);

SystemData generate(const ProblemSpec& spec, const NumericPolicy& pol = {});

}  // namespace hamricc

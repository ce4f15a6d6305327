// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <functional>
#include <vector>

#include "hamricc/types.hpp"

namespace hamricc {

enum class QuadRule { adaptive_simpson, gauss_legendre_panels };

using MatrixFn = std::function<Eigen::MatrixXcd(double)>;

struct QuadResult {
  Eigen::MatrixXcd value;
  double error_estimate = 0.0;  // sum of accepted per-panel estimates (Frobenius)
  std::size_t evals = 0;
  bool converged = false;
};

struct QuadOptions {
  double abs_tol = 1e-10;
  QuadRule rule = QuadRule::adaptive_simpson;
  std::size_t max_evals = 2000000;
  int max_depth = 48;
};

/// Integrates a smooth matrix-valued function over the union of the panels
/// defined by consecutive breakpoints. Each top-level panel receives an equal
/// share of the absolute tolerance and is subdivided until its local estimate
/// meets it. Panel sums are accumulated in breakpoint order, so the result is
/// deterministic regardless of evaluation order.
QuadResult integrate_adaptive(const MatrixFn& f, const std::vector<double>& breakpoints,
                              const QuadOptions& opt);

/// Geometric breakpoint ladder for line integrals whose integrand has features
/// of width ~inner near the origin and decays towards |t| = outer:
/// {0, inner, 2*inner, 4*inner, ..., outer} (one-sided, ascending).
std::vector<double> geometric_ladder(double inner, double outer);

/// Two-sided version, symmetric about 0, ascending.
std::vector<double> symmetric_ladder(double inner, double outer);

/// Gauss-Legendre nodes/weights on [-1, 1], computed once per order by Newton
/// iteration on the Legendre recurrence.
const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int order);

}  // namespace hamricc

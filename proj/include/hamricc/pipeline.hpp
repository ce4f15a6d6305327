// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hamricc/dichotomy.hpp"
#include "hamricc/problems.hpp"
#include "hamricc/riccati.hpp"
#include "hamricc/types.hpp"

namespace hamricc {

struct PipelineFlags {
  bool symmetry = true;
  bool sq_identity = false;
  bool decay_scan = false;
  bool f1f2 = true;
  bool closed_loop_scan = false;
};

enum class ReportFormat { text, json };

struct RunConfig {
  ProblemSpec problem;
  NumericPolicy policy;
  PipelineFlags flags;
  std::string report_path;  // empty: stdout only
  std::string csv_dir;      // empty: no csv side outputs
  ReportFormat format = ReportFormat::text;
};

enum class ScanKind { axis_decay, sector, sv_probe };

struct ScanSpec {
  ScanKind kind = ScanKind::axis_decay;
  ResolventNorm which = ResolventNorm::v0;
  std::vector<double> t_values;  // explicit grid; empty = log grid below
  double t_min = 1.0, t_max = 100.0;
  int t_count = 0;
  bool slope_row = false;
};

/// One named invariant with its measured value and allowed bound.
struct CheckOutcome {
  std::string name;
  bool pass = true;
  double value = 0.0;
  double bound = 0.0;
};

struct F1f2Summary {
  double cond_f1 = 0.0, cond_f2 = 0.0;
  double sv_min_f1 = 0.0, sv_min_f2 = 0.0;
  double pq_top_sv = 0.0;
};

struct DichotomyBlock {
  double h = 0.0, t_max = 0.0, rho = 0.0;
  double quad_error = 0.0, tail_bound = 0.0, tolerance = 0.0;
  std::size_t evals = 0;
  DichotomyResult::Defects defects;
  Eigen::Index stable_count = 0, unstable_count = 0;
  double oracle_agreement_minus = 0.0, oracle_agreement_plus = 0.0;
  double eigvec_condition = 0.0;
  bool used_schur_fallback = false;
  double l_j_symmetry_defect = 0.0;  // ||J L0+ + L0-^H J||
  double l_norm_v0_minus = 0.0, l_norm_v0_plus = 0.0;
  double l_norm_v0_to_v1_minus = 0.0, l_norm_v0_to_v1_plus = 0.0;
  double range_agreement_minus = 0.0, range_agreement_plus = 0.0;
};

struct RiccatiBlock {
  bool graph_minus = false;
  double graph_margin_minus = 0.0;
  bool graph_plus = false, cograph_plus = false;
  double graph_margin_plus = 0.0, cograph_margin_plus = 0.0;
  bool poorly_angular = false;
  SolutionNorms x_minus_norms;
  std::optional<SolutionNorms> x_plus_norms;
  double herm_defect_minus = 0.0, min_eig_minus = 0.0;
  double herm_defect_plus = 0.0, max_eig_plus = 0.0;
  ResidualReport residual_minus;
  std::optional<ResidualReport> residual_plus;
  bool inverse_checked = false;
  double inverse_defect = 0.0, inverse_agreement = 0.0;
  double closed_loop_max_real = 0.0, closed_loop_match = 0.0;
  std::vector<Cx> closed_loop_spectrum;
  double sector_bound = 0.0;
};

struct RunReport {
  std::string label;
  Eigen::Index n = 0, m = 0, p = 0;
  double r = 0.0, s = 0.0;
  std::vector<Cx> spectrum_a, spectrum_t0;
  bool pbh_controllable = false, pbh_observable = false;
  bool gap_condition = false, gap_consistent = false;
  std::optional<SymmetryDefects> symmetry;
  SpectrumSymmetryReport spectrum_symmetry;
  DichotomyBlock dichotomy;
  RiccatiBlock riccati;
  std::optional<F1f2Summary> f1f2;
  std::optional<SqCheckReport> sq;
  std::vector<std::pair<double, double>> decay_scan;  // (t, V0 resolvent norm)
  std::vector<CheckOutcome> checks;
  bool all_pass = false;
  double wall_ms = 0.0;
  std::string timestamp;

  // solution matrices, kept for cross-method comparison and bindings
  Eigen::MatrixXcd x0minus;
  std::optional<Eigen::MatrixXcd> x0plus, y0plus;
};

/// Full pipeline: generate, assemble, certify the strip, contour projections,
/// oracle cross-check, angular extraction, Riccati verification, closed loop.
RunReport run_solve(const RunConfig& config);

struct CompareReport {
  std::string label;
  double dp_minus = 0.0, dp_plus = 0.0;  // ||P - P_oracle||
  double dx_rel = 0.0;                   // relative ||X_contour - X_oracle||
  double tolerance = 0.0;
  bool pass = false;
};

/// Contour path and eigendecomposition-oracle path side by side.
CompareReport run_compare(const RunConfig& config);

struct ScanRow {
  std::string parameter, value, metadata;
  bool error = false;
};

struct ScanResult {
  std::vector<std::string> header;  // column names
  std::vector<ScanRow> rows;
  bool hit_spectrum = false;
};

ScanResult run_scan(const RunConfig& config, const ScanSpec& scan);

}  // namespace hamricc

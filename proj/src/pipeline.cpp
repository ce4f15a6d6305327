// SPDX-License-Identifier: Apache-2.0
#include "hamricc/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <sstream>

#include "hamricc/linalg.hpp"

namespace hamricc {

namespace {

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[64];
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

/// sin of the largest principal angle between the ranges of two orthonormal
/// bases, computed as the norm of the orthoprojector difference.
double subspace_angle(const Eigen::MatrixXcd& b1, const Eigen::MatrixXcd& b2) {
  if (b1.cols() != b2.cols()) return 1.0;
  if (b1.cols() == 0) return 0.0;
  return spectral_norm(b1 * b1.adjoint() - b2 * b2.adjoint());
}

Eigen::MatrixXcd orthonormal_range(const Eigen::MatrixXcd& m, Eigen::Index k) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(m);
  return qr.householderQ() * Eigen::MatrixXcd::Identity(m.rows(), k);
}

struct CheckList {
  std::vector<CheckOutcome>& sink;
  void leq(const std::string& name, double value, double bound) {
    sink.push_back({name, value <= bound, value, bound});
  }
  void geq(const std::string& name, double value, double bound) {
    sink.push_back({name, value >= bound, value, bound});
  }
  void flag(const std::string& name, bool pass, double value = 0.0, double bound = 0.0) {
    sink.push_back({name, pass, value, bound});
  }
};

}  // namespace

RunReport run_solve(const RunConfig& config) {
  const auto t_start = std::chrono::steady_clock::now();
  const NumericPolicy& pol = config.policy;

  RunReport rep;
  rep.timestamp = iso_timestamp();

  const SystemData sys = generate(config.problem, pol);
  rep.label = sys.label;
  rep.n = sys.n();
  rep.m = sys.m();
  rep.p = sys.p();
  rep.r = sys.r;
  rep.s = sys.s;

  const HamiltonianMatrices ham = assemble(sys, pol);
  const Eigen::Index nn = 2 * sys.n();
  const double t0_norm = spectral_norm(ham.T0);

  {
    const Eigen::VectorXcd ae =
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd>(sys.A, false).eigenvalues();
    rep.spectrum_a.assign(ae.data(), ae.data() + ae.size());
  }

  CheckList checks{rep.checks};

  const PbhReport pbh_c = pbh_controllability(sys, pol);
  const PbhReport pbh_o = pbh_observability(sys, pol);
  rep.pbh_controllable = pbh_c.ok;
  rep.pbh_observable = pbh_o.ok;

  const SpectralGapReport gap = spectral_gap_check(sys, pol);
  rep.gap_condition = gap.condition_holds;
  rep.gap_consistent = gap.consistent;
  checks.flag("gap.kernel_condition_matches_spectrum", gap.consistent);

  if (config.flags.symmetry) {
    const IndefiniteForm form = IndefiniteForm::make(sys.n());
    rep.symmetry = j_symmetry_check(ham, form, 32, pol);
    checks.leq("symmetry.j_identity", rep.symmetry->j_identity_defect, 1e-12);
    checks.leq("symmetry.dissipativity", rep.symmetry->dissipativity_excess, 1e-12);
  }

  rep.spectrum_symmetry = spectrum_symmetry_check(ham, pol);
  rep.spectrum_t0 = rep.spectrum_symmetry.spectrum;
  checks.leq("spectrum.axis_symmetry", rep.spectrum_symmetry.max_match_distance,
             rep.spectrum_symmetry.tolerance);

  Eigen::VectorXcd t0_eigs(rep.spectrum_t0.size());
  for (std::size_t i = 0; i < rep.spectrum_t0.size(); ++i) t0_eigs(i) = rep.spectrum_t0[i];

  // contour path
  const ContourSpec strip = choose_strip(ham.T0, pol, &t0_eigs);
  const ContourIntegral lp = contour_L(ham.T0, strip, +1, pol);
  const ContourIntegral lm = contour_L(ham.T0, strip, -1, pol);
  const DichotomyResult dich = projections(ham.T0, lp, lm, t0_eigs, pol);

  auto& db = rep.dichotomy;
  db.h = strip.h;
  db.t_max = strip.t_max;
  db.rho = strip.rho;
  db.quad_error = dich.quadrature_error_estimate;
  db.tail_bound = dich.tail_bound;
  db.tolerance = dich.tolerance;
  db.evals = lp.evals + lm.evals;
  db.defects = dich.defects;
  db.stable_count = dich.stable_count;
  db.unstable_count = dich.unstable_count;

  checks.leq("projection.completeness", dich.defects.completeness, dich.tolerance);
  checks.leq("projection.idempotency",
             std::max(dich.defects.idempotency_plus, dich.defects.idempotency_minus),
             dich.tolerance);
  checks.leq("projection.l_product", dich.defects.l_product, dich.tolerance);
  checks.leq("projection.inverse_sum", dich.defects.inverse_sum, dich.tolerance);
  checks.leq("projection.invariance",
             std::max(dich.defects.invariance_minus, dich.defects.invariance_plus),
             dich.tolerance);
  checks.leq("projection.trace_round", dich.defects.trace_deviation, 1e-6);

  // oracle cross-check
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(ham.T0, true);
  const OracleProjections oracle = oracle_projections(ham.T0, pol, &eig);
  db.eigvec_condition = oracle.eigvec_condition;
  db.used_schur_fallback = oracle.used_schur_fallback;
  db.oracle_agreement_minus = spectral_norm(dich.Pminus - oracle.Pminus);
  db.oracle_agreement_plus = spectral_norm(dich.Pplus - oracle.Pplus);
  const double agree_tol = std::max(pol.match_tol, 10.0 * dich.quadrature_error_estimate);
  checks.leq("oracle.agreement",
             std::max(db.oracle_agreement_minus, db.oracle_agreement_plus), agree_tol);

  // symmetry of the contour operators and their scale norms
  {
    const IndefiniteForm form = IndefiniteForm::make(sys.n());
    db.l_j_symmetry_defect =
        spectral_norm(form.J * dich.Lplus + dich.Lminus.adjoint() * form.J);
    checks.leq("dichotomy.l_j_symmetry", db.l_j_symmetry_defect, dich.tolerance);
    db.l_norm_v0_minus = ham.weighted_norm(dich.Lminus, ham.v0, ham.v0);
    db.l_norm_v0_plus = ham.weighted_norm(dich.Lplus, ham.v0, ham.v0);
    db.l_norm_v0_to_v1_minus = ham.weighted_norm(dich.Lminus, ham.v0, ham.v1);
    db.l_norm_v0_to_v1_plus = ham.weighted_norm(dich.Lplus, ham.v0, ham.v1);
    checks.flag("dichotomy.l_norms_finite",
                std::isfinite(db.l_norm_v0_to_v1_minus) &&
                    std::isfinite(db.l_norm_v0_to_v1_plus));
  }

  // range(L+-) agrees with range(P+-) at finite dimension
  db.range_agreement_minus = subspace_angle(
      orthonormal_range(dich.Lminus, dich.stable_count), dich.basis_minus);
  db.range_agreement_plus = subspace_angle(
      orthonormal_range(dich.Lplus, dich.unstable_count), dich.basis_plus);
  checks.leq("dichotomy.range_agreement",
             std::max(db.range_agreement_minus, db.range_agreement_plus),
             std::max(1e-8, 10.0 * dich.quadrature_error_estimate));

  // angular extraction
  auto& rb = rep.riccati;
  const GraphCheck g_minus = graph_check(dich.basis_minus, pol);
  rb.graph_minus = g_minus.is_graph;
  rb.graph_margin_minus = g_minus.margin;
  checks.flag("graph.minus", g_minus.is_graph, g_minus.margin, pol.graph_margin_min);
  if (!g_minus.is_graph)
    throw ConsistencyError("V0- is not a graph subspace; no angular operator X0-");

  const AngularExtraction ext = angular_operator(dich.basis_minus, pol);
  rep.x0minus = ext.X;
  rb.poorly_angular = ext.poorly_angular;
  rb.x_minus_norms = solution_norms(ham.scale, sys, rep.x0minus);

  const GraphCheck g_plus = graph_check(dich.basis_plus, pol);
  const GraphCheck cg_plus = cograph_check(dich.basis_plus, pol);
  rb.graph_plus = g_plus.is_graph;
  rb.graph_margin_plus = g_plus.margin;
  rb.cograph_plus = cg_plus.is_graph;
  rb.cograph_margin_plus = cg_plus.margin;
  if (g_plus.is_graph) {
    rep.x0plus = angular_operator(dich.basis_plus, pol).X;
    rb.x_plus_norms = solution_norms(ham.scale, sys, *rep.x0plus);
  }
  if (cg_plus.is_graph) rep.y0plus = cograph_operator(dich.basis_plus, pol).X;

  if (config.flags.f1f2) {
    const AngularDiagnostics diag =
        f1f2_diagnostics(ham, dich.Pminus, dich.basis_minus, pol);
    F1f2Summary sum;
    sum.cond_f1 = diag.cond_F1;
    sum.cond_f2 = diag.cond_F2;
    sum.sv_min_f1 = diag.sv_min_F1;
    sum.sv_min_f2 = diag.sv_min_F2;
    sum.pq_top_sv = diag.pq_diff_svals.size() ? diag.pq_diff_svals(0) : 0.0;
    rep.f1f2 = sum;
    if (g_minus.is_graph && cg_plus.is_graph)
      checks.geq("angular.f1f2_invertible", std::min(sum.sv_min_f1, sum.sv_min_f2),
                 1e-10);
  }

  // Riccati residual and solution properties
  const double residual_scale = ext.residual_tolerance_scale;
  rb.residual_minus = riccati_residual(sys, ham.scale, rep.x0minus, pol);
  const double residual_bound =
      std::max(pol.residual_tol, 10.0 * dich.quadrature_error_estimate) * residual_scale;
  checks.leq("riccati.residual_weighted", rb.residual_minus.weighted_rel, residual_bound);
  checks.leq("riccati.residual_plain", rb.residual_minus.plain_rel, residual_bound);
  if (rep.x0plus) rb.residual_plus = riccati_residual(sys, ham.scale, *rep.x0plus, pol);

  const SolutionProperties props = solution_properties(
      rep.x0minus, rep.x0plus, rep.y0plus, pbh_c.ok, pbh_o.ok, pol);
  rb.herm_defect_minus = props.herm_defect_minus;
  rb.min_eig_minus = props.min_eig_minus;
  rb.herm_defect_plus = props.herm_defect_plus;
  rb.max_eig_plus = props.max_eig_plus;
  rb.inverse_checked = props.inverse_checked;
  rb.inverse_defect = props.inverse_defect;
  rb.inverse_agreement = props.inverse_agreement;
  checks.leq("solution.hermiticity_minus", props.herm_defect_minus, pol.match_tol);
  checks.geq("solution.sign_minus", props.min_eig_minus,
             -pol.match_tol * std::max(rb.x_minus_norms.h, 1e-300));
  if (rep.x0plus) {
    checks.leq("solution.hermiticity_plus", props.herm_defect_plus, pol.match_tol);
    checks.leq("solution.sign_plus", props.max_eig_plus,
               pol.match_tol * std::max(rb.x_plus_norms->h, 1e-300));
  }
  if (props.inverse_checked) {
    checks.leq("solution.inverse_defect", props.inverse_defect, 1e-7);
    checks.leq("solution.inverse_agreement", props.inverse_agreement, pol.match_tol);
  }

  const ClosedLoop cl = closed_loop(sys, ham.scale, rep.x0minus, t0_eigs, pol,
                                    config.flags.closed_loop_scan);
  rb.closed_loop_max_real = cl.max_real;
  rb.closed_loop_match = cl.match_distance;
  rb.closed_loop_spectrum.assign(cl.spectrum.data(), cl.spectrum.data() + cl.spectrum.size());
  rb.sector_bound = cl.sector_bound;
  checks.leq("closed_loop.spectrum_match", cl.match_distance, cl.match_tolerance);
  checks.flag("closed_loop.stable", cl.max_real < 0.0, cl.max_real, 0.0);

  if (config.flags.sq_identity) {
    ContourSpec sq_spec = strip;
    double min_abs_a = std::numeric_limits<double>::infinity();
    for (const Cx l : rep.spectrum_a) min_abs_a = std::min(min_abs_a, std::abs(l));
    sq_spec.rho = 0.5 * min_abs_a;
    sq_spec.abs_tol = std::max(pol.quad_abs_tol, 1e-8);
    rep.sq = sq_correction_check(ham, sq_spec, pol);
    checks.flag("sq.identity", rep.sq->ok, rep.sq->defect_plain,
                std::max(1e-7, 10.0 * rep.sq->quad_error));
  }

  if (config.flags.decay_scan) {
    const double rho1 = rho1_estimate(ham);
    const double upper = std::max(4.0 * rho1, 0.05 * spectral_norm(sys.A));
    std::vector<double> ts;
    for (int k = 0; k < 16; ++k)
      ts.push_back(2.0 * rho1 * std::pow(upper / (2.0 * rho1), k / 15.0));
    rep.decay_scan = axis_resolvent_scan(ham, ResolventNorm::v0, ts, pol, &t0_eigs);
    bool finite = true;
    for (const auto& [t, norm] : rep.decay_scan) finite = finite && std::isfinite(norm);
    checks.flag("decay.scan_finite", finite);
  }

  rep.all_pass = true;
  for (const CheckOutcome& c : rep.checks) rep.all_pass = rep.all_pass && c.pass;

  rep.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t_start)
                    .count();
  return rep;
}

CompareReport run_compare(const RunConfig& config) {
  const NumericPolicy& pol = config.policy;
  const SystemData sys = generate(config.problem, pol);
  const HamiltonianMatrices ham = assemble(sys, pol);

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(ham.T0, true);
  const Eigen::VectorXcd t0_eigs = eig.eigenvalues();

  const ContourSpec strip = choose_strip(ham.T0, pol, &t0_eigs);
  const ContourIntegral lp = contour_L(ham.T0, strip, +1, pol);
  const ContourIntegral lm = contour_L(ham.T0, strip, -1, pol);
  const DichotomyResult dich = projections(ham.T0, lp, lm, t0_eigs, pol);
  const OracleProjections oracle = oracle_projections(ham.T0, pol, &eig);

  CompareReport rep;
  rep.label = sys.label;
  rep.dp_minus = spectral_norm(dich.Pminus - oracle.Pminus);
  rep.dp_plus = spectral_norm(dich.Pplus - oracle.Pplus);

  const Eigen::MatrixXcd x_contour = angular_operator(dich.basis_minus, pol).X;
  const Eigen::MatrixXcd basis_oracle = orthonormal_range(oracle.Pminus, dich.stable_count);
  const Eigen::MatrixXcd x_oracle = angular_operator(basis_oracle, pol).X;
  rep.dx_rel = spectral_norm(x_contour - x_oracle) /
               std::max(spectral_norm(x_oracle), 1e-300);

  rep.tolerance = pol.match_tol;
  rep.pass = rep.dp_minus <= rep.tolerance && rep.dp_plus <= rep.tolerance &&
             rep.dx_rel <= rep.tolerance;
  return rep;
}

ScanResult run_scan(const RunConfig& config, const ScanSpec& scan) {
  const NumericPolicy& pol = config.policy;
  const SystemData sys = generate(config.problem, pol);
  const HamiltonianMatrices ham = assemble(sys, pol);

  ScanResult out;
  std::vector<double> grid = scan.t_values;
  if (grid.empty() && scan.t_count > 0) {
    for (int k = 0; k < scan.t_count; ++k)
      grid.push_back(scan.t_min *
                     std::pow(scan.t_max / scan.t_min,
                              scan.t_count == 1 ? 0.0 : k / double(scan.t_count - 1)));
  }

  switch (scan.kind) {
    case ScanKind::axis_decay: {
      out.header = {"t", "norm", "selector"};
      const char* sel = scan.which == ResolventNorm::v0         ? "v0"
                        : scan.which == ResolventNorm::v        ? "v"
                        : scan.which == ResolventNorm::v0_to_v1 ? "v0_to_v1"
                                                                : "v0_to_v";
      const Eigen::VectorXcd t0_eigs =
          Eigen::ComplexEigenSolver<Eigen::MatrixXcd>(ham.T0, false).eigenvalues();
      std::vector<std::pair<double, double>> pts;
      for (const double t : grid) {
        try {
          const auto one = axis_resolvent_scan(ham, scan.which, {t}, pol, &t0_eigs);
          pts.emplace_back(t, one[0].second);
          out.rows.push_back({format_full(t), format_full(one[0].second), sel, false});
        } catch (const SingularityError&) {
          out.hit_spectrum = true;
          out.rows.push_back({format_full(t), "error", "spectrum", true});
        }
      }
      if (scan.slope_row && pts.size() >= 3) {
        // log-log least squares slope of the decay
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (const auto& [t, v] : pts) {
          const double lx = std::log(t), ly = std::log(v);
          sx += lx;
          sy += ly;
          sxx += lx * lx;
          sxy += lx * ly;
        }
        const double npts = static_cast<double>(pts.size());
        const double slope = (npts * sxy - sx * sy) / (npts * sxx - sx * sx);
        out.rows.push_back({"slope", format_full(slope), "loglog_fit", false});
      }
      break;
    }
    case ScanKind::sector: {
      out.header = {"radius", "norm", "arg"};
      // closed-loop resolvent in the H_{-r} geometry along right-half-plane rays
      Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(ham.T0, true);
      const Eigen::VectorXcd t0_eigs = eig.eigenvalues();
      const ContourSpec strip = choose_strip(ham.T0, pol, &t0_eigs);
      const ContourIntegral lp = contour_L(ham.T0, strip, +1, pol);
      const ContourIntegral lm = contour_L(ham.T0, strip, -1, pol);
      const DichotomyResult dich = projections(ham.T0, lp, lm, t0_eigs, pol);
      const Eigen::MatrixXcd x = angular_operator(dich.basis_minus, pol).X;
      const ClosedLoop cl = closed_loop(sys, ham.scale, x, t0_eigs, pol, true);
      for (const SectorScanPoint& pt : cl.sector_scan)
        out.rows.push_back({format_full(std::abs(pt.lambda)),
                            format_full(pt.weighted_norm),
                            format_full(std::arg(pt.lambda)), false});
      break;
    }
    case ScanKind::sv_probe: {
      out.header = {"index", "singular_value", "label"};
      Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(ham.T0, true);
      const Eigen::VectorXcd t0_eigs = eig.eigenvalues();
      const ContourSpec strip = choose_strip(ham.T0, pol, &t0_eigs);
      const ContourIntegral lp = contour_L(ham.T0, strip, +1, pol);
      const ContourIntegral lm = contour_L(ham.T0, strip, -1, pol);
      const DichotomyResult dich = projections(ham.T0, lp, lm, t0_eigs, pol);
      const AngularDiagnostics diag =
          f1f2_diagnostics(ham, dich.Pminus, dich.basis_minus, pol);
      for (Eigen::Index i = 0; i < diag.pq_diff_svals.size(); ++i)
        out.rows.push_back({std::to_string(i), format_full(diag.pq_diff_svals(i)),
                            "p_minus_q", false});
      break;
    }
  }
  return out;
}

}  // namespace hamricc

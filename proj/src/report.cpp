// SPDX-License-Identifier: Apache-2.0
#include "hamricc/report.hpp"

#include <sstream>

#include <json.hpp>

#include "hamricc/linalg.hpp"

namespace hamricc {

namespace {

using nlohmann::json;

std::string fmt(double v) { return format_report(v); }

std::string fmt_cx(Cx v) { return format_complex(v, /*full_precision=*/false); }

std::string spectrum_line(const std::vector<Cx>& spec) {
  std::ostringstream os;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    if (i) os << " ";
    os << fmt_cx(spec[i]);
  }
  return os.str();
}

json spectrum_json(const std::vector<Cx>& spec) {
  json arr = json::array();
  for (const Cx l : spec) arr.push_back(fmt_cx(l));
  return arr;
}

}  // namespace

std::string render_text(const RunReport& rep) {
  std::ostringstream os;
  os << "# hamricc run " << rep.timestamp << " wall_ms=" << rep.wall_ms << "\n";
  os << "[system] label=" << rep.label << " n=" << rep.n << " m=" << rep.m
     << " p=" << rep.p << " r=" << fmt(rep.r) << " s=" << fmt(rep.s) << "\n";
  os << "[spectrum.A] " << spectrum_line(rep.spectrum_a) << "\n";
  os << "[spectrum.T0] " << spectrum_line(rep.spectrum_t0) << "\n";
  os << "[structure] pbh_controllable=" << rep.pbh_controllable
     << " pbh_observable=" << rep.pbh_observable
     << " gap_condition=" << rep.gap_condition
     << " gap_consistent=" << rep.gap_consistent << "\n";
  if (rep.symmetry) {
    os << "[symmetry] j_identity=" << fmt(rep.symmetry->j_identity_defect)
       << " dissipativity_excess=" << fmt(rep.symmetry->dissipativity_excess) << "\n";
  }
  os << "[spectrum.symmetry] max_match=" << fmt(rep.spectrum_symmetry.max_match_distance)
     << " tol=" << fmt(rep.spectrum_symmetry.tolerance) << "\n";

  const auto& d = rep.dichotomy;
  os << "[dichotomy] h=" << fmt(d.h) << " t_max=" << fmt(d.t_max) << " rho=" << fmt(d.rho)
     << " quad_error=" << fmt(d.quad_error) << " tail_bound=" << fmt(d.tail_bound)
     << " evals=" << d.evals << " stable=" << d.stable_count
     << " unstable=" << d.unstable_count << "\n";
  os << "[dichotomy.defects] completeness=" << fmt(d.defects.completeness)
     << " idempotency=" << fmt(std::max(d.defects.idempotency_plus, d.defects.idempotency_minus))
     << " l_product=" << fmt(d.defects.l_product)
     << " inverse_sum=" << fmt(d.defects.inverse_sum)
     << " invariance=" << fmt(std::max(d.defects.invariance_minus, d.defects.invariance_plus))
     << " trace_dev=" << fmt(d.defects.trace_deviation) << "\n";
  os << "[dichotomy.oracle] agreement_minus=" << fmt(d.oracle_agreement_minus)
     << " agreement_plus=" << fmt(d.oracle_agreement_plus)
     << " eigvec_condition=" << fmt(d.eigvec_condition)
     << " schur_fallback=" << d.used_schur_fallback << "\n";
  os << "[dichotomy.l] j_symmetry=" << fmt(d.l_j_symmetry_defect)
     << " norm_v0_minus=" << fmt(d.l_norm_v0_minus)
     << " norm_v0_plus=" << fmt(d.l_norm_v0_plus)
     << " norm_v0_to_v1_minus=" << fmt(d.l_norm_v0_to_v1_minus)
     << " norm_v0_to_v1_plus=" << fmt(d.l_norm_v0_to_v1_plus)
     << " range_agreement=" << fmt(std::max(d.range_agreement_minus, d.range_agreement_plus))
     << "\n";

  const auto& rc = rep.riccati;
  os << "[riccati.graph] minus=" << rc.graph_minus
     << " margin_minus=" << fmt(rc.graph_margin_minus) << " plus=" << rc.graph_plus
     << " cograph_plus=" << rc.cograph_plus
     << " poorly_angular=" << rc.poorly_angular << "\n";
  os << "[riccati.x0minus] norm_v0=" << fmt(rc.x_minus_norms.v0)
     << " norm_h=" << fmt(rc.x_minus_norms.h) << " norm_v1=" << fmt(rc.x_minus_norms.v1)
     << " herm_defect=" << fmt(rc.herm_defect_minus)
     << " min_eig=" << fmt(rc.min_eig_minus)
     << " x0minus=" << (rep.x0minus.size() == 1 ? fmt_cx(rep.x0minus(0, 0)) : "matrix")
     << "\n";
  os << "[riccati.residual] weighted=" << fmt(rc.residual_minus.weighted)
     << " plain=" << fmt(rc.residual_minus.plain)
     << " weighted_rel=" << fmt(rc.residual_minus.weighted_rel)
     << " plain_rel=" << fmt(rc.residual_minus.plain_rel) << "\n";
  if (rep.x0plus) {
    os << "[riccati.x0plus] norm_h=" << fmt(rc.x_plus_norms->h)
       << " herm_defect=" << fmt(rc.herm_defect_plus)
       << " max_eig=" << fmt(rc.max_eig_plus)
       << " x0plus=" << (rep.x0plus->size() == 1 ? fmt_cx((*rep.x0plus)(0, 0)) : "matrix");
    if (rc.inverse_checked)
      os << " inverse_defect=" << fmt(rc.inverse_defect)
         << " inverse_agreement=" << fmt(rc.inverse_agreement);
    os << "\n";
  }
  os << "[closed_loop] max_real=" << fmt(rc.closed_loop_max_real)
     << " match=" << fmt(rc.closed_loop_match)
     << " spectrum=" << spectrum_line(rc.closed_loop_spectrum) << "\n";
  if (rc.sector_bound > 0.0)
    os << "[closed_loop.scan] sector_bound=" << fmt(rc.sector_bound) << "\n";
  if (rep.f1f2) {
    os << "[angular.f1f2] cond_f1=" << fmt(rep.f1f2->cond_f1)
       << " cond_f2=" << fmt(rep.f1f2->cond_f2)
       << " sv_min_f1=" << fmt(rep.f1f2->sv_min_f1)
       << " sv_min_f2=" << fmt(rep.f1f2->sv_min_f2)
       << " pq_top_sv=" << fmt(rep.f1f2->pq_top_sv) << "\n";
  }
  if (rep.sq) {
    os << "[sq.identity] defect_plain=" << fmt(rep.sq->defect_plain)
       << " defect_weighted=" << fmt(rep.sq->defect_weighted)
       << " quad_error=" << fmt(rep.sq->quad_error) << " k_norm=" << fmt(rep.sq->k_norm)
       << "\n";
  }
  for (const auto& [t, norm] : rep.decay_scan)
    os << "[decay] t=" << fmt(t) << " norm_v0=" << fmt(norm) << "\n";

  for (const CheckOutcome& c : rep.checks) {
    os << "[check] " << (c.pass ? "pass" : "FAIL") << " " << c.name
       << " value=" << fmt(c.value) << " bound=" << fmt(c.bound) << "\n";
  }
  os << "[result] all_pass=" << (rep.all_pass ? "true" : "false") << "\n";
  return os.str();
}

std::string render_json(const RunReport& rep) {
  json j;
  j["header"] = "hamricc run " + rep.timestamp + " wall_ms=" + format_full(rep.wall_ms);
  j["system"] = {{"label", rep.label}, {"n", rep.n},         {"m", rep.m},
                 {"p", rep.p},         {"r", fmt(rep.r)},    {"s", fmt(rep.s)}};
  j["spectrum_a"] = spectrum_json(rep.spectrum_a);
  j["spectrum_t0"] = spectrum_json(rep.spectrum_t0);
  j["structure"] = {{"pbh_controllable", rep.pbh_controllable},
                    {"pbh_observable", rep.pbh_observable},
                    {"gap_condition", rep.gap_condition},
                    {"gap_consistent", rep.gap_consistent}};
  if (rep.symmetry)
    j["symmetry"] = {{"j_identity", fmt(rep.symmetry->j_identity_defect)},
                     {"dissipativity_excess", fmt(rep.symmetry->dissipativity_excess)}};
  j["spectrum_symmetry"] = {{"max_match", fmt(rep.spectrum_symmetry.max_match_distance)},
                            {"tol", fmt(rep.spectrum_symmetry.tolerance)}};
  const auto& d = rep.dichotomy;
  j["dichotomy"] = {{"h", fmt(d.h)},
                    {"t_max", fmt(d.t_max)},
                    {"rho", fmt(d.rho)},
                    {"quad_error", fmt(d.quad_error)},
                    {"tail_bound", fmt(d.tail_bound)},
                    {"evals", d.evals},
                    {"stable", d.stable_count},
                    {"unstable", d.unstable_count},
                    {"defects",
                     {{"completeness", fmt(d.defects.completeness)},
                      {"idempotency_plus", fmt(d.defects.idempotency_plus)},
                      {"idempotency_minus", fmt(d.defects.idempotency_minus)},
                      {"l_product", fmt(d.defects.l_product)},
                      {"inverse_sum", fmt(d.defects.inverse_sum)},
                      {"invariance_minus", fmt(d.defects.invariance_minus)},
                      {"invariance_plus", fmt(d.defects.invariance_plus)},
                      {"trace_deviation", fmt(d.defects.trace_deviation)}}},
                    {"oracle_agreement_minus", fmt(d.oracle_agreement_minus)},
                    {"oracle_agreement_plus", fmt(d.oracle_agreement_plus)},
                    {"eigvec_condition", fmt(d.eigvec_condition)},
                    {"schur_fallback", d.used_schur_fallback},
                    {"l_j_symmetry", fmt(d.l_j_symmetry_defect)},
                    {"l_norm_v0_minus", fmt(d.l_norm_v0_minus)},
                    {"l_norm_v0_plus", fmt(d.l_norm_v0_plus)},
                    {"l_norm_v0_to_v1_minus", fmt(d.l_norm_v0_to_v1_minus)},
                    {"l_norm_v0_to_v1_plus", fmt(d.l_norm_v0_to_v1_plus)}};
  const auto& rc = rep.riccati;
  json jr = {{"graph_minus", rc.graph_minus},
             {"graph_margin_minus", fmt(rc.graph_margin_minus)},
             {"graph_plus", rc.graph_plus},
             {"cograph_plus", rc.cograph_plus},
             {"poorly_angular", rc.poorly_angular},
             {"x0minus_norm_v0", fmt(rc.x_minus_norms.v0)},
             {"x0minus_norm_h", fmt(rc.x_minus_norms.h)},
             {"x0minus_norm_v1", fmt(rc.x_minus_norms.v1)},
             {"herm_defect_minus", fmt(rc.herm_defect_minus)},
             {"min_eig_minus", fmt(rc.min_eig_minus)},
             {"residual_weighted", fmt(rc.residual_minus.weighted)},
             {"residual_plain", fmt(rc.residual_minus.plain)},
             {"residual_weighted_rel", fmt(rc.residual_minus.weighted_rel)},
             {"residual_plain_rel", fmt(rc.residual_minus.plain_rel)},
             {"closed_loop_max_real", fmt(rc.closed_loop_max_real)},
             {"closed_loop_match", fmt(rc.closed_loop_match)},
             {"closed_loop_spectrum", spectrum_json(rc.closed_loop_spectrum)}};
  if (rep.x0minus.size() == 1) jr["x0minus"] = fmt_cx(rep.x0minus(0, 0));
  if (rep.x0plus) {
    jr["herm_defect_plus"] = fmt(rc.herm_defect_plus);
    jr["max_eig_plus"] = fmt(rc.max_eig_plus);
    if (rep.x0plus->size() == 1) jr["x0plus"] = fmt_cx((*rep.x0plus)(0, 0));
    if (rc.inverse_checked) {
      jr["inverse_defect"] = fmt(rc.inverse_defect);
      jr["inverse_agreement"] = fmt(rc.inverse_agreement);
    }
  }
  j["riccati"] = jr;
  if (rep.f1f2)
    j["f1f2"] = {{"cond_f1", fmt(rep.f1f2->cond_f1)},
                 {"cond_f2", fmt(rep.f1f2->cond_f2)},
                 {"sv_min_f1", fmt(rep.f1f2->sv_min_f1)},
                 {"sv_min_f2", fmt(rep.f1f2->sv_min_f2)},
                 {"pq_top_sv", fmt(rep.f1f2->pq_top_sv)}};
  if (rep.sq)
    j["sq_identity"] = {{"defect_plain", fmt(rep.sq->defect_plain)},
                        {"defect_weighted", fmt(rep.sq->defect_weighted)},
                        {"quad_error", fmt(rep.sq->quad_error)},
                        {"k_norm", fmt(rep.sq->k_norm)}};
  if (!rep.decay_scan.empty()) {
    json arr = json::array();
    for (const auto& [t, norm] : rep.decay_scan)
      arr.push_back({{"t", fmt(t)}, {"norm_v0", fmt(norm)}});
    j["decay_scan"] = arr;
  }
  json checks = json::array();
  for (const CheckOutcome& c : rep.checks)
    checks.push_back({{"name", c.name},
                      {"pass", c.pass},
                      {"value", fmt(c.value)},
                      {"bound", fmt(c.bound)}});
  j["checks"] = checks;
  j["all_pass"] = rep.all_pass;
  return j.dump(2) + "\n";
}

std::string render_compare_text(const CompareReport& rep) {
  std::ostringstream os;
  os << "[compare] label=" << rep.label << " dp_minus=" << fmt(rep.dp_minus)
     << " dp_plus=" << fmt(rep.dp_plus) << " dx_rel=" << fmt(rep.dx_rel)
     << " tol=" << fmt(rep.tolerance) << " pass=" << (rep.pass ? "true" : "false")
     << "\n";
  return os.str();
}

std::string render_compare_json(const CompareReport& rep) {
  json j = {{"label", rep.label},
            {"dp_minus", fmt(rep.dp_minus)},
            {"dp_plus", fmt(rep.dp_plus)},
            {"dx_rel", fmt(rep.dx_rel)},
            {"tolerance", fmt(rep.tolerance)},
            {"pass", rep.pass}};
  return j.dump(2) + "\n";
}

std::string render_csv(const ScanResult& scan) {
  std::ostringstream os;
  for (std::size_t i = 0; i < scan.header.size(); ++i) {
    if (i) os << ",";
    os << scan.header[i];
  }
  os << "\n";
  for (const ScanRow& row : scan.rows)
    os << row.parameter << "," << row.value << "," << row.metadata << "\n";
  return os.str();
}

}  // namespace hamricc

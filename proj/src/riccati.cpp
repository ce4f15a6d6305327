// SPDX-License-Identifier: Apache-2.0
#include "hamricc/riccati.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hamricc/linalg.hpp"

namespace hamricc {

namespace {

GraphCheck block_check(const Eigen::MatrixXcd& basis, bool top, const NumericPolicy& pol) {
  GraphCheck g;
  if (basis.rows() % 2 != 0) throw DimensionError("basis must have 2n rows");
  g.n = basis.rows() / 2;
  g.k = basis.cols();
  if (g.k != g.n) {
    g.dimension_mismatch = true;
    return g;
  }
  const Eigen::MatrixXcd block =
      top ? basis.topRows(g.n).eval() : basis.bottomRows(g.n).eval();
  g.margin = smallest_singular_value(block);
  g.is_graph = g.margin > pol.graph_margin_min;
  return g;
}

AngularExtraction extract(const Eigen::MatrixXcd& basis, bool graph_orientation,
                          const NumericPolicy& pol) {
  const GraphCheck g = graph_orientation ? graph_check(basis, pol) : cograph_check(basis, pol);
  if (g.dimension_mismatch)
    throw ParameterError("angular extraction: dichotomy imbalance, basis is not square");
  if (!g.is_graph) throw ParameterError("angular extraction: pivot block is singular");

  const Eigen::Index n = g.n;
  const Eigen::MatrixXcd pivot =
      graph_orientation ? basis.topRows(n).eval() : basis.bottomRows(n).eval();
  const Eigen::MatrixXcd other =
      graph_orientation ? basis.bottomRows(n).eval() : basis.topRows(n).eval();

  AngularExtraction out;
  out.margin = g.margin;
  // X pivot = other  =>  pivot^T X^T = other^T, column-pivoted solve
  out.X = pivot.transpose()
              .colPivHouseholderQr()
              .solve(other.transpose())
              .transpose();
  out.poorly_angular = g.margin <= 1e-6;
  if (out.poorly_angular) out.residual_tolerance_scale = 1.0 / std::max(g.margin, 1e-300);

  // column-space agreement of [I; X] (resp. [Y; I]) with the basis
  Eigen::MatrixXcd graph_cols(2 * n, n);
  if (graph_orientation) {
    graph_cols.topRows(n) = Eigen::MatrixXcd::Identity(n, n);
    graph_cols.bottomRows(n) = out.X;
  } else {
    graph_cols.topRows(n) = out.X;
    graph_cols.bottomRows(n) = Eigen::MatrixXcd::Identity(n, n);
  }
  const Eigen::MatrixXcd span = graph_cols * pivot;
  const Eigen::MatrixXcd defect = span - basis * (basis.adjoint() * span);
  out.residual = spectral_norm(defect) / std::max(1.0, spectral_norm(span));
  if (out.residual > 1e-9 * out.residual_tolerance_scale) {
    std::ostringstream os;
    os << "angular extraction column-space residual " << format_report(out.residual)
       << " too large (margin " << format_report(out.margin) << ")";
    throw ConsistencyError(os.str());
  }
  return out;
}

}  // namespace

GraphCheck graph_check(const Eigen::MatrixXcd& basis, const NumericPolicy& pol) {
  return block_check(basis, /*top=*/true, pol);
}

GraphCheck cograph_check(const Eigen::MatrixXcd& basis, const NumericPolicy& pol) {
  return block_check(basis, /*top=*/false, pol);
}

AngularExtraction angular_operator(const Eigen::MatrixXcd& basis, const NumericPolicy& pol) {
  return extract(basis, /*graph_orientation=*/true, pol);
}

AngularExtraction cograph_operator(const Eigen::MatrixXcd& basis, const NumericPolicy& pol) {
  return extract(basis, /*graph_orientation=*/false, pol);
}

AngularDiagnostics f1f2_diagnostics(const HamiltonianMatrices& ham,
                                    const Eigen::MatrixXcd& p0minus,
                                    const Eigen::MatrixXcd& basis_minus,
                                    const NumericPolicy& pol) {
  (void)pol;
  const Eigen::Index n = ham.n();
  const Eigen::Index nn = 2 * n;
  Eigen::MatrixXcd q0minus = Eigen::MatrixXcd::Zero(nn, nn);
  q0minus.topLeftCorner(n, n) = Eigen::MatrixXcd::Identity(n, n);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(nn, nn);

  AngularDiagnostics d;
  d.F1 = id - q0minus + p0minus;
  d.F2 = id - p0minus + q0minus;

  const Eigen::MatrixXcd w = ham.block_weight(ham.v0);
  const BlockWeights v0_inv{{ham.v0.top.side, -ham.v0.top.exponent},
                            {ham.v0.bottom.side, -ham.v0.bottom.exponent}};
  const Eigen::MatrixXcd w_inv = ham.block_weight(v0_inv);

  auto weighted_cond = [&](const Eigen::MatrixXcd& f, double& cond, double& sv_min) {
    const Eigen::BDCSVD<Eigen::MatrixXcd> svd(w * f * w_inv);
    const auto& sv = svd.singularValues();
    sv_min = sv(sv.size() - 1);
    cond = sv_min > 0.0 ? sv(0) / sv_min : std::numeric_limits<double>::infinity();
  };
  weighted_cond(d.F1, d.cond_F1, d.sv_min_F1);
  weighted_cond(d.F2, d.cond_F2, d.sv_min_F2);

  d.pq_diff_svals =
      Eigen::BDCSVD<Eigen::MatrixXcd>(w * (p0minus - q0minus) * w_inv).singularValues();
  if (basis_minus.cols() > 0 && basis_minus.rows() == nn)
    d.top_block_min_sv = smallest_singular_value(basis_minus.topRows(n));
  return d;
}

ResidualReport riccati_residual(const SystemData& sys, const HilbertScale& scale,
                                const Eigen::MatrixXcd& x, const NumericPolicy& pol) {
  (void)pol;
  if (x.rows() != sys.n() || x.cols() != sys.n())
    throw DimensionError("riccati_residual: X must be n x n");
  const Eigen::MatrixXcd term_a = sys.A.adjoint() * x;
  const Eigen::MatrixXcd term_b = x * sys.A;
  const Eigen::MatrixXcd term_q = x * sys.B * sys.B.adjoint() * x;
  const Eigen::MatrixXcd term_c = sys.C.adjoint() * sys.C;
  const Eigen::MatrixXcd e = term_a + term_b - term_q + term_c;

  // the equation lives on H_{1-r}^(*) and lands in H_{-s}^(*)
  const Eigen::MatrixXcd w_dst = scale.lambda_power(star(-sys.s));
  const Eigen::MatrixXcd w_src = scale.lambda_power(star(-(1.0 - sys.r)));

  ResidualReport rep;
  rep.plain = spectral_norm(e);
  rep.weighted = spectral_norm(w_dst * e * w_src);
  double denom_plain = 0.0, denom_weighted = 0.0;
  for (const Eigen::MatrixXcd* term : {&term_a, &term_b, &term_q, &term_c}) {
    denom_plain = std::max(denom_plain, spectral_norm(*term));
    denom_weighted = std::max(denom_weighted, spectral_norm(w_dst * (*term) * w_src));
  }
  rep.plain_rel = denom_plain > 0.0 ? rep.plain / denom_plain : rep.plain;
  rep.weighted_rel = denom_weighted > 0.0 ? rep.weighted / denom_weighted : rep.weighted;
  return rep;
}

SolutionProperties solution_properties(const Eigen::MatrixXcd& x0minus,
                                       const std::optional<Eigen::MatrixXcd>& x0plus,
                                       const std::optional<Eigen::MatrixXcd>& y0plus,
                                       bool pbh_controllable, bool pbh_observable,
                                       const NumericPolicy& pol) {
  SolutionProperties prop;
  const double nx = spectral_norm(x0minus);
  prop.herm_defect_minus =
      nx > 0.0 ? spectral_norm(x0minus - x0minus.adjoint()) / nx : 0.0;
  {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitian_part(x0minus));
    prop.min_eig_minus = es.eigenvalues().minCoeff();
  }
  bool ok = prop.herm_defect_minus <= pol.match_tol &&
            prop.min_eig_minus >= -pol.match_tol * std::max(nx, 1e-300);

  if (x0plus) {
    const double np = spectral_norm(*x0plus);
    prop.herm_defect_plus =
        np > 0.0 ? spectral_norm(*x0plus - x0plus->adjoint()) / np : 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitian_part(*x0plus));
    prop.max_eig_plus = es.eigenvalues().maxCoeff();
    ok = ok && prop.herm_defect_plus <= pol.match_tol &&
         prop.max_eig_plus <= pol.match_tol * std::max(np, 1e-300);
  }

  if (x0plus && y0plus && pbh_controllable && pbh_observable) {
    prop.inverse_checked = true;
    const Eigen::Index n = x0plus->rows();
    prop.inverse_defect = spectral_norm((*x0plus) * (*y0plus) -
                                        Eigen::MatrixXcd::Identity(n, n));
    const Eigen::MatrixXcd x_inv =
        x0plus->partialPivLu().solve(Eigen::MatrixXcd::Identity(n, n));
    prop.inverse_agreement = spectral_norm(x_inv - *y0plus);
    ok = ok && prop.inverse_defect <= 1e-7 && prop.inverse_agreement <= pol.match_tol;
  }
  prop.ok = ok;
  return prop;
}

ClosedLoop closed_loop(const SystemData& sys, const HilbertScale& scale,
                       const Eigen::MatrixXcd& x0minus, const Eigen::VectorXcd& t0_spectrum,
                       const NumericPolicy& pol, bool with_scan) {
  ClosedLoop cl;
  cl.Acl = sys.A - sys.B * sys.B.adjoint() * x0minus;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(cl.Acl, false);
  cl.spectrum = es.eigenvalues();
  cl.max_real = cl.spectrum.real().maxCoeff();

  std::vector<Cx> acl_eigs(cl.spectrum.data(), cl.spectrum.data() + cl.spectrum.size());
  std::vector<Cx> t0_stable;
  for (Eigen::Index i = 0; i < t0_spectrum.size(); ++i)
    if (t0_spectrum(i).real() < 0.0) t0_stable.push_back(t0_spectrum(i));

  double t0_norm = 0.0;
  for (Eigen::Index i = 0; i < t0_spectrum.size(); ++i)
    t0_norm = std::max(t0_norm, std::abs(t0_spectrum(i)));
  cl.match_tolerance = pol.match_tol * std::max(t0_norm, 1.0);

  if (t0_stable.size() != acl_eigs.size()) {
    std::ostringstream os;
    os << "closed loop: " << acl_eigs.size() << " eigenvalues vs " << t0_stable.size()
       << " stable Hamiltonian eigenvalues";
    throw ConsistencyError(os.str());
  }
  cl.match_distance = greedy_match_distance(acl_eigs, t0_stable);
  cl.spectrum_ok = cl.match_distance <= cl.match_tolerance && cl.max_real < 0.0;
  if (cl.match_distance > cl.match_tolerance) {
    std::ostringstream os;
    os << "closed loop spectrum does not match sigma(T0) in the left half-plane "
          "(distance "
       << format_report(cl.match_distance) << ", tolerance "
       << format_report(cl.match_tolerance) << ")";
    throw ConsistencyError(os.str());
  }

  if (with_scan) {
    const Eigen::Index n = sys.n();
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
    const Eigen::MatrixXcd w = scale.lambda_power(plain(-sys.r));
    const Eigen::MatrixXcd w_inv = scale.lambda_power(plain(sys.r));
    const double a_norm = std::max(spectral_norm(cl.Acl), 1.0);
    const double angles[] = {0.0, M_PI / 4, -M_PI / 4, M_PI / 2, -M_PI / 2};
    for (const double phi : angles) {
      for (int k = 0; k < 8; ++k) {
        const double radius = 0.05 * a_norm * std::pow(10.0 * a_norm / (0.05 * a_norm),
                                                       k / 7.0);
        const Cx lambda = std::polar(radius, phi);
        const Eigen::MatrixXcd res = (cl.Acl - lambda * id).partialPivLu().solve(id);
        SectorScanPoint pt;
        pt.lambda = lambda;
        pt.weighted_norm = spectral_norm(w * res * w_inv);
        pt.decay_norm = spectral_norm(res * w_inv);  // H_{-r} -> H
        cl.sector_scan.push_back(pt);
        cl.sector_bound = std::max(cl.sector_bound, radius * pt.weighted_norm);
      }
    }
  }
  return cl;
}

ScalarSolution scalar_oracle(double a, double b, double c) {
  ScalarSolution out;
  if (b == 0.0) {
    // Lyapunov branch: 2 a X = c^2
    if (c != 0.0 && !(a > 0.0))
      throw ParameterError("scalar oracle: Lyapunov branch needs a > 0");
    out.lyapunov_branch = true;
    out.x_minus = (a > 0.0) ? c * c / (2.0 * a) : 0.0;
    out.x_plus = std::numeric_limits<double>::quiet_NaN();
    out.spectrum = {Cx(-a, 0.0), Cx(a, 0.0)};
    return out;
  }
  const double disc = a * a + b * b * c * c;
  if (!(disc > 0.0)) throw ParameterError("scalar oracle: a^2 + b^2 c^2 must be positive");
  const double root = std::sqrt(disc);
  out.x_minus = (root - a) / (b * b);
  out.x_plus = -(root + a) / (b * b);
  out.spectrum = {Cx(-root, 0.0), Cx(root, 0.0)};
  return out;
}

Eigen::MatrixXcd solve_sylvester(const Eigen::MatrixXcd& a1, const Eigen::MatrixXcd& a2,
                                 const Eigen::MatrixXcd& w) {
  if (a1.rows() != a1.cols() || a2.rows() != a2.cols())
    throw DimensionError("sylvester: coefficient matrices must be square");
  if (w.rows() != a1.rows() || w.cols() != a2.rows())
    throw DimensionError("sylvester: right-hand side has wrong shape");

  const Eigen::ComplexSchur<Eigen::MatrixXcd> s1(a1);
  const Eigen::ComplexSchur<Eigen::MatrixXcd> s2(a2);
  const Eigen::MatrixXcd& t1 = s1.matrixT();
  const Eigen::MatrixXcd& t2 = s2.matrixT();
  const Eigen::MatrixXcd f = s1.matrixU().adjoint() * w * s2.matrixU();

  const Eigen::Index n1 = a1.rows(), n2 = a2.rows();
  const double scale = t1.norm() + t2.norm();
  Eigen::MatrixXcd y(n1, n2);
  for (Eigen::Index k = 0; k < n2; ++k) {
    Eigen::VectorXcd rhs = f.col(k);
    for (Eigen::Index j = 0; j < k; ++j) rhs -= y.col(j) * t2(j, k);
    Eigen::MatrixXcd lhs = t1;
    lhs.diagonal().array() += t2(k, k);
    double min_diag = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n1; ++i) min_diag = std::min(min_diag, std::abs(lhs(i, i)));
    if (min_diag <= 1e-14 * std::max(scale, 1.0))
      throw SingularityError("sylvester: spectra of A1 and -A2 overlap");
    y.col(k) = lhs.triangularView<Eigen::Upper>().solve(rhs);
  }
  return s1.matrixU() * y * s2.matrixU().adjoint();
}

Eigen::MatrixXcd newton_kleinman(const SystemData& sys, const NumericPolicy& pol,
                                 int max_iter) {
  sys.validate();
  const Eigen::Index n = sys.n();
  const Eigen::VectorXcd eigs =
      Eigen::ComplexEigenSolver<Eigen::MatrixXcd>(sys.A, false).eigenvalues();
  if (!(eigs.real().maxCoeff() < 0.0))
    throw ParameterError("newton_kleinman: A must be stable for the X = 0 start");

  const Eigen::MatrixXcd bbh = sys.B * sys.B.adjoint();
  const Eigen::MatrixXcd chc = sys.C.adjoint() * sys.C;
  Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(n, n);
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::MatrixXcd acl = sys.A - bbh * x;
    const Eigen::MatrixXcd rhs = -(chc + x * bbh * x);
    Eigen::MatrixXcd next = solve_sylvester(acl.adjoint(), acl, rhs);
    next = 0.5 * (next + next.adjoint()).eval();
    const double delta = spectral_norm(next - x);
    x = next;
    if (delta <= 1e-13 * std::max(1.0, spectral_norm(x))) return x;
  }
  throw AccuracyError("newton_kleinman did not converge", spectral_norm(x));
  (void)pol;
}

SolutionNorms solution_norms(const HilbertScale& scale, const SystemData& sys,
                             const Eigen::MatrixXcd& x) {
  SolutionNorms norms;
  norms.h = spectral_norm(x);
  // V0 geometry: H_{-r} -> H_{-s}^(*)
  norms.v0 = scale.operator_scale_norm(x, plain(-sys.r), star(-sys.s));
  // V1 geometry: H_s^(*) -> H_r
  norms.v1 = scale.operator_scale_norm(x, star(sys.s), plain(sys.r));
  return norms;
}

}  // namespace hamricc

// SPDX-License-Identifier: Apache-2.0
#include "hamricc/dichotomy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hamricc/linalg.hpp"

namespace hamricc {

namespace {

constexpr Cx kI(0.0, 1.0);

Eigen::VectorXcd spectrum_of(const Eigen::MatrixXcd& t0, const Eigen::VectorXcd* pre) {
  if (pre) return *pre;
  return Eigen::ComplexEigenSolver<Eigen::MatrixXcd>(t0, false).eigenvalues();
}

/// Largest sampled |lambda| * ||(T0 - lambda)^{-1}|| on the two vertical
/// lines, from t_from outwards; bounds the 1/|lambda|^2 coefficient of the
/// contour integrand.
double line_decay_constant(const Eigen::MatrixXcd& t0, double h, double t_from) {
  const Eigen::Index nn = t0.rows();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(nn, nn);
  double k = 0.0;
  for (int sign = -1; sign <= 1; sign += 2) {
    double t = t_from;
    for (int j = 0; j < 6; ++j) {
      const Cx lambda(sign * h, t);
      const Eigen::MatrixXcd res = (t0 - lambda * id).partialPivLu().solve(id);
      k = std::max(k, std::abs(lambda) * spectral_norm(res));
      t *= 2.0;
    }
  }
  return k;
}

/// Orthonormal basis of the k-dimensional range of a numerical projection.
Eigen::MatrixXcd range_basis(const Eigen::MatrixXcd& p, Eigen::Index k) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(p);
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(p.rows(), k);
  return q;
}

}  // namespace

ContourSpec choose_strip(const Eigen::MatrixXcd& t0, const NumericPolicy& pol,
                         const Eigen::VectorXcd* spectrum) {
  const Eigen::VectorXcd eigs = spectrum_of(t0, spectrum);
  const double t0_norm = spectral_norm(t0);
  const double axis_band = pol.axis_tol * std::max(t0_norm, 1.0);

  double min_re = std::numeric_limits<double>::infinity();
  std::vector<Cx> axis_eigs;
  for (Eigen::Index i = 0; i < eigs.size(); ++i) {
    min_re = std::min(min_re, std::abs(eigs(i).real()));
    if (std::abs(eigs(i).real()) <= axis_band) axis_eigs.push_back(eigs(i));
  }
  if (!axis_eigs.empty()) {
    std::ostringstream os;
    os << "spectrum touches the imaginary axis:";
    for (const Cx l : axis_eigs) os << " " << format_complex(l, false);
    throw NotDichotomousError(os.str(), axis_eigs);
  }

  ContourSpec spec;
  spec.h = 0.5 * min_re;
  spec.rho = 0.5 * spec.h;
  spec.abs_tol = pol.quad_abs_tol;

  const double t_from = 4.0 * (t0_norm + spec.h);
  const double k = 2.0 * line_decay_constant(t0, spec.h, t_from);
  // tail of the L integrals <= K / (pi t_max); keep it below a tenth of the
  // tolerance budget
  spec.t_max = std::max(10.0 * k / (M_PI * spec.abs_tol), 4.0 * t_from);
  return spec;
}

ContourIntegral contour_L(const Eigen::MatrixXcd& t0, const ContourSpec& spec, int sign,
                          const NumericPolicy& pol) {
  if (sign != 1 && sign != -1) throw ParameterError("sign must be +-1");
  if (!(spec.h > 0.0 && spec.t_max > spec.h)) throw ParameterError("invalid contour spec");
  const Eigen::Index nn = t0.rows();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(nn, nn);
  if (smallest_singular_value(t0) <= 1e-14 * std::max(spectral_norm(t0), 1.0))
    throw SingularityError("T0 is numerically singular");

  const double pref = sign / (2.0 * M_PI);
  const MatrixFn integrand = [&](double t) -> Eigen::MatrixXcd {
    const Cx lambda(sign * spec.h, t);
    return (pref / lambda) * (t0 - lambda * id).partialPivLu().solve(id);
  };

  const double t0_norm = spectral_norm(t0);
  const double inner = std::max(spec.h, 0.02 * t0_norm);
  QuadOptions opt;
  opt.abs_tol = 0.8 * spec.abs_tol;
  opt.rule = spec.rule;
  opt.max_evals = pol.quad_max_evals;
  const QuadResult q = integrate_adaptive(integrand, symmetric_ladder(inner, spec.t_max), opt);

  ContourIntegral out;
  out.value = q.value;
  out.quad_error = q.error_estimate;
  out.evals = q.evals;
  // certified tail: the sampled decay constant at the truncation height
  const double k_tail = 1.5 * line_decay_constant(t0, spec.h, spec.t_max);
  out.tail_bound = k_tail / (M_PI * spec.t_max);

  if (!q.converged || out.error_estimate() > spec.abs_tol) {
    std::ostringstream os;
    os << "contour quadrature missed tolerance " << format_report(spec.abs_tol)
       << " (achieved " << format_report(out.error_estimate()) << " with " << q.evals
       << " evaluations)";
    throw AccuracyError(os.str(), out.error_estimate());
  }
  return out;
}

DichotomyResult projections(const Eigen::MatrixXcd& t0, const ContourIntegral& lplus,
                            const ContourIntegral& lminus, const Eigen::VectorXcd& spectrum,
                            const NumericPolicy& pol) {
  DichotomyResult res;
  res.Lplus = lplus.value;
  res.Lminus = lminus.value;
  res.Pplus = t0 * lplus.value;
  res.Pminus = t0 * lminus.value;
  res.quadrature_error_estimate = lplus.error_estimate() + lminus.error_estimate();
  res.tail_bound = lplus.tail_bound + lminus.tail_bound;
  res.tolerance = std::max(pol.proj_tol_floor, 10.0 * res.quadrature_error_estimate);

  const Eigen::Index nn = t0.rows();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(nn, nn);
  const double t0_norm = std::max(spectral_norm(t0), 1e-300);

  auto& d = res.defects;
  d.completeness = spectral_norm(res.Pplus + res.Pminus - id);
  d.idempotency_plus = spectral_norm(res.Pplus * res.Pplus - res.Pplus);
  d.idempotency_minus = spectral_norm(res.Pminus * res.Pminus - res.Pminus);
  d.l_product = std::max(spectral_norm(res.Lplus * res.Lminus),
                         spectral_norm(res.Lminus * res.Lplus));
  d.inverse_sum =
      spectral_norm(res.Lplus + res.Lminus - t0.partialPivLu().solve(id));
  d.invariance_minus = spectral_norm((id - res.Pminus) * t0 * res.Pminus) / t0_norm;
  d.invariance_plus = spectral_norm((id - res.Pplus) * t0 * res.Pplus) / t0_norm;

  for (Eigen::Index i = 0; i < spectrum.size(); ++i)
    (spectrum(i).real() < 0.0 ? res.stable_count : res.unstable_count) += 1;
  const Cx tr = res.Pminus.trace();
  d.trace_deviation = std::abs(tr - Cx(static_cast<double>(res.stable_count), 0.0));

  res.basis_minus = range_basis(res.Pminus, res.stable_count);
  res.basis_plus = range_basis(res.Pplus, res.unstable_count);
  if (res.basis_minus.cols() > 0) {
    const Eigen::MatrixXcd tb = t0 * res.basis_minus;
    d.basis_residual_minus =
        spectral_norm(tb - res.basis_minus * (res.basis_minus.adjoint() * tb)) / t0_norm;
  }
  if (res.basis_plus.cols() > 0) {
    const Eigen::MatrixXcd tb = t0 * res.basis_plus;
    d.basis_residual_plus =
        spectral_norm(tb - res.basis_plus * (res.basis_plus.adjoint() * tb)) / t0_norm;
  }

  const double tol = res.tolerance;
  auto fail = [&](const char* name, double value) {
    std::ostringstream os;
    os << "projection algebra defect '" << name << "' = " << format_report(value)
       << " exceeds " << format_report(tol);
    throw ConsistencyError(os.str());
  };
  if (d.completeness > tol) fail("completeness", d.completeness);
  if (d.idempotency_plus > tol) fail("idempotency_plus", d.idempotency_plus);
  if (d.idempotency_minus > tol) fail("idempotency_minus", d.idempotency_minus);
  if (d.l_product > tol) fail("l_product", d.l_product);
  if (d.inverse_sum > tol) fail("inverse_sum", d.inverse_sum);
  if (d.invariance_minus > tol) fail("invariance_minus", d.invariance_minus);
  if (d.invariance_plus > tol) fail("invariance_plus", d.invariance_plus);
  if (d.basis_residual_minus > tol) fail("basis_residual_minus", d.basis_residual_minus);
  if (d.basis_residual_plus > tol) fail("basis_residual_plus", d.basis_residual_plus);
  if (d.trace_deviation > 1e-6) fail("trace_deviation", d.trace_deviation);
  return res;
}

OracleProjections oracle_projections(const Eigen::MatrixXcd& t0, const NumericPolicy& pol,
                                     const Eigen::ComplexEigenSolver<Eigen::MatrixXcd>* eig) {
  const Eigen::Index nn = t0.rows();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(nn, nn);
  const double t0_norm = spectral_norm(t0);

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> local;
  if (!eig) {
    local.compute(t0, true);
    eig = &local;
  }
  const Eigen::VectorXcd eigs = eig->eigenvalues();

  OracleProjections out;
  out.eigen_gap = std::numeric_limits<double>::infinity();
  std::vector<Cx> axis_eigs;
  for (Eigen::Index i = 0; i < nn; ++i) {
    out.eigen_gap = std::min(out.eigen_gap, std::abs(eigs(i).real()));
    if (std::abs(eigs(i).real()) <= pol.axis_tol * std::max(t0_norm, 1.0))
      axis_eigs.push_back(eigs(i));
  }
  if (!axis_eigs.empty())
    throw NotDichotomousError("oracle: spectrum touches the imaginary axis", axis_eigs);

  const Eigen::MatrixXcd& v = eig->eigenvectors();
  {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(v);
    const double smin = svd.singularValues()(nn - 1);
    out.eigvec_condition =
        smin > 0.0 ? svd.singularValues()(0) / smin : std::numeric_limits<double>::infinity();
  }

  if (out.eigvec_condition <= 1e6) {
    Eigen::VectorXcd indicator(nn);
    for (Eigen::Index i = 0; i < nn; ++i)
      indicator(i) = eigs(i).real() < 0.0 ? Cx(1.0, 0.0) : Cx(0.0, 0.0);
    out.Pminus = v * indicator.asDiagonal() * v.partialPivLu().solve(id);
  } else {
    // Ordered block triangularization: unitary similarity sorting the Schur
    // diagonal stable-first, then one triangular Sylvester solve for the
    // coupling block.
    out.used_schur_fallback = true;
    Eigen::ComplexSchur<Eigen::MatrixXcd> schur(t0);
    Eigen::MatrixXcd t = schur.matrixT();
    Eigen::MatrixXcd u = schur.matrixU();
    bool swapped = true;
    while (swapped) {
      swapped = false;
      for (Eigen::Index k = 0; k + 1 < nn; ++k) {
        const bool k_stable = t(k, k).real() < 0.0;
        const bool k1_stable = t(k + 1, k + 1).real() < 0.0;
        if (k_stable || !k1_stable) continue;
        // swap the adjacent diagonal entries with a Givens rotation
        const Cx x = t(k, k + 1);
        const Cx y = t(k + 1, k + 1) - t(k, k);
        const double r = std::sqrt(std::norm(x) + std::norm(y));
        if (r == 0.0) continue;
        Eigen::Matrix2cd g;
        g << x / r, -std::conj(y) / r, y / r, std::conj(x) / r;
        t.block(0, k, nn, 2) = (t.block(0, k, nn, 2) * g).eval();
        t.block(k, 0, 2, nn) = (g.adjoint() * t.block(k, 0, 2, nn)).eval();
        u.block(0, k, nn, 2) = (u.block(0, k, nn, 2) * g).eval();
        t(k + 1, k) = Cx(0.0, 0.0);
        swapped = true;
      }
    }
    Eigen::Index ks = 0;
    while (ks < nn && t(ks, ks).real() < 0.0) ++ks;
    const Eigen::MatrixXcd t11 = t.topLeftCorner(ks, ks);
    const Eigen::MatrixXcd t12 = t.topRightCorner(ks, nn - ks);
    const Eigen::MatrixXcd t22 = t.bottomRightCorner(nn - ks, nn - ks);
    // T11 Y - Y T22 = -T12, both factors triangular
    Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(ks, nn - ks);
    for (Eigen::Index j = 0; j < nn - ks; ++j) {
      Eigen::VectorXcd rhs = -t12.col(j);
      for (Eigen::Index i = 0; i < j; ++i) rhs += y.col(i) * t22(i, j);
      const Eigen::MatrixXcd lhs = t11 - t22(j, j) * Eigen::MatrixXcd::Identity(ks, ks);
      y.col(j) = lhs.triangularView<Eigen::Upper>().solve(rhs);
    }
    Eigen::MatrixXcd p_t = Eigen::MatrixXcd::Zero(nn, nn);
    p_t.topLeftCorner(ks, ks) = Eigen::MatrixXcd::Identity(ks, ks);
    p_t.topRightCorner(ks, nn - ks) = -y;
    out.Pminus = u * p_t * u.adjoint();
  }

  out.Pplus = id - out.Pminus;
  out.idempotency_defect = spectral_norm(out.Pminus * out.Pminus - out.Pminus);
  return out;
}

namespace {

/// (1/pi) Int_{t_lo}^{inf} of (M - it)^{-1} + (M + it)^{-1} dt, the symmetric
/// principal-value pairing. The range [t_lo, t_split] is integrated directly;
/// beyond t_split the substitution u = 1/t turns the tail into the bounded
/// integrand (2/pi) M (u^2 M^2 + I)^{-1} on (0, 1/t_split].
struct PairedAxisIntegral {
  Eigen::MatrixXcd value;
  double quad_error = 0.0;
  std::size_t evals = 0;
};

PairedAxisIntegral paired_axis_integral(const Eigen::MatrixXcd& m, double t_lo,
                                        double t_split, double abs_tol, QuadRule rule,
                                        std::size_t max_evals, double feature_scale) {
  const Eigen::Index nn = m.rows();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(nn, nn);
  const Eigen::MatrixXcd m_sq = m * m;

  const MatrixFn central = [&](double t) -> Eigen::MatrixXcd {
    const Cx sh(0.0, t);
    return (1.0 / M_PI) * ((m - sh * id).partialPivLu().solve(id) +
                           (m + sh * id).partialPivLu().solve(id));
  };
  const MatrixFn tail = [&](double u) -> Eigen::MatrixXcd {
    return (2.0 / M_PI) * m * (u * u * m_sq + id).partialPivLu().solve(id);
  };

  QuadOptions opt;
  opt.rule = rule;
  opt.max_evals = max_evals;
  opt.abs_tol = 0.5 * abs_tol;

  std::vector<double> central_pts;
  if (t_lo == 0.0) {
    central_pts = geometric_ladder(std::max(1e-8, 0.02 * feature_scale), t_split);
  } else {
    double t = t_lo;
    while (t < t_split) {
      central_pts.push_back(t);
      t *= 2.0;
    }
    central_pts.push_back(t_split);
  }
  const QuadResult qc = integrate_adaptive(central, central_pts, opt);

  const double u_hi = 1.0 / t_split;
  const double u_feature = std::min(u_hi, 1.0 / std::max(feature_scale, 1e-300));
  const QuadResult qt =
      integrate_adaptive(tail, geometric_ladder(0.25 * u_feature, u_hi), opt);

  PairedAxisIntegral out;
  out.value = qc.value + qt.value;
  out.quad_error = qc.error_estimate + qt.error_estimate;
  out.evals = qc.evals + qt.evals;
  if (!(qc.converged && qt.converged))
    throw AccuracyError("axis principal-value quadrature missed its budget",
                        out.quad_error);
  return out;
}

}  // namespace

PvReport principal_value_difference(const Eigen::MatrixXcd& t0, const ContourSpec& spec,
                                    const NumericPolicy& pol, const Eigen::MatrixXcd* expected,
                                    const Eigen::VectorXcd* spectrum) {
  const Eigen::VectorXcd eigs = spectrum_of(t0, spectrum);
  const double t0_norm = spectral_norm(t0);
  std::vector<Cx> axis_eigs;
  for (Eigen::Index i = 0; i < eigs.size(); ++i)
    if (std::abs(eigs(i).real()) <= pol.axis_tol * std::max(t0_norm, 1.0))
      axis_eigs.push_back(eigs(i));
  if (!axis_eigs.empty())
    throw NotDichotomousError("principal value: spectrum touches the axis", axis_eigs);

  PvReport rep;
  const PairedAxisIntegral pv = paired_axis_integral(
      t0, 0.0, spec.t_max, spec.abs_tol, spec.rule, pol.quad_max_evals, t0_norm);
  rep.value = pv.value;
  rep.quad_error = pv.quad_error;

  // sampled coefficient of the 1/t^2 remainder after symmetric cancellation
  const Eigen::Index nn = t0.rows();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(nn, nn);
  const Eigen::MatrixXcd t0_sq = t0 * t0;
  double c = 0.0;
  double t = spec.t_max;
  for (int j = 0; j < 4; ++j) {
    const double u = 1.0 / t;
    const Eigen::MatrixXcd pair_scaled = 2.0 * t0 * (u * u * t0_sq + id).partialPivLu().solve(id);
    c = std::max(c, spectral_norm(pair_scaled) / M_PI);
    t *= 2.0;
  }
  rep.tail_coeff = c;
  rep.bound = spec.abs_tol + c / spec.t_max;

  if (expected) {
    rep.checked = true;
    rep.defect = spectral_norm(rep.value - *expected);
    rep.ok = rep.defect <= rep.bound;
    if (!rep.ok) {
      std::ostringstream os;
      os << "principal-value identity defect " << format_report(rep.defect)
         << " exceeds bound " << format_report(rep.bound);
      throw ConsistencyError(os.str());
    }
  }
  return rep;
}

SqCheckReport sq_correction_check(const HamiltonianMatrices& ham, const ContourSpec& spec,
                                  const NumericPolicy& pol) {
  const Eigen::MatrixXcd& a = ham.sys.A;
  const Eigen::Index n = a.rows();
  const Eigen::MatrixXcd id_n = Eigen::MatrixXcd::Identity(n, n);

  const Eigen::VectorXcd a_eigs =
      Eigen::ComplexEigenSolver<Eigen::MatrixXcd>(a, false).eigenvalues();
  double min_abs = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(a_eigs(i).real() < 0.0))
      throw ParameterError("sq identity requires sigma(A) in the open left half-plane");
    min_abs = std::min(min_abs, std::abs(a_eigs(i)));
  }
  if (!(spec.rho > 0.0 && spec.rho < min_abs))
    throw ParameterError("sq identity requires 0 < rho < min |sigma(A)|");
  const double rho = spec.rho;

  QuadOptions opt;
  opt.rule = spec.rule;
  opt.abs_tol = 0.5 * spec.abs_tol;
  opt.max_evals = pol.quad_max_evals;

  // semicircle corrections at radius rho
  const MatrixFn k1_integrand = [&](double th) -> Eigen::MatrixXcd {
    const Cx lambda = std::polar(rho, th);
    return (rho / M_PI) * std::exp(kI * th) *
           (a - lambda * id_n).partialPivLu().solve(id_n);
  };
  const MatrixFn k2_integrand = [&](double th) -> Eigen::MatrixXcd {
    const Cx lambda = rho * std::exp(-kI * th);
    return (-rho / M_PI) * std::exp(-kI * th) *
           (-a.adjoint() - lambda * id_n).partialPivLu().solve(id_n);
  };
  const std::vector<double> arc1{-M_PI / 2, -M_PI / 4, 0.0, M_PI / 4, M_PI / 2};
  const std::vector<double> arc2{M_PI / 2, 3 * M_PI / 4, M_PI, 5 * M_PI / 4, 3 * M_PI / 2};
  const QuadResult k1 = integrate_adaptive(k1_integrand, arc1, opt);
  const QuadResult k2 = integrate_adaptive(k2_integrand, arc2, opt);
  if (!(k1.converged && k2.converged))
    throw AccuracyError("semicircle quadrature missed its budget",
                        k1.error_estimate + k2.error_estimate);

  const double s0_norm = spectral_norm(ham.S0);
  const PairedAxisIntegral pv =
      paired_axis_integral(ham.S0, rho, std::max(4.0 * s0_norm, 100.0 * rho), spec.abs_tol,
                           spec.rule, pol.quad_max_evals, s0_norm);

  const Eigen::Index nn = 2 * n;
  Eigen::MatrixXcd k = Eigen::MatrixXcd::Zero(nn, nn);
  k.topLeftCorner(n, n) = k1.value;
  k.bottomRightCorner(n, n) = k2.value;

  Eigen::MatrixXcd lhs = Eigen::MatrixXcd::Zero(nn, nn);
  lhs.topLeftCorner(n, n) = -id_n;
  lhs.bottomRightCorner(n, n) = id_n;

  const Eigen::MatrixXcd diff = lhs - (pv.value + k);

  SqCheckReport rep;
  rep.defect_plain = spectral_norm(diff);
  rep.defect_weighted = ham.weighted_norm(diff, ham.v0, ham.v0);
  rep.quad_error = k1.error_estimate + k2.error_estimate + pv.quad_error;
  rep.k_norm = spectral_norm(k);
  rep.ok = rep.defect_plain <= std::max(1e-7, 10.0 * rep.quad_error);
  return rep;
}

}  // namespace hamricc

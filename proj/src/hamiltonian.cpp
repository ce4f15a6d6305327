// SPDX-License-Identifier: Apache-2.0
#include "hamricc/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hamricc/linalg.hpp"

namespace hamricc {

namespace {

constexpr Cx kI(0.0, 1.0);

/// Distinct eigenvalue representatives, clustering within a relative radius.
std::vector<Cx> cluster_eigenvalues(const Eigen::VectorXcd& eigs, double scale) {
  std::vector<Cx> reps;
  const double radius = 1e-8 * std::max(scale, 1.0);
  for (Eigen::Index i = 0; i < eigs.size(); ++i) {
    bool found = false;
    for (const Cx rep : reps)
      if (std::abs(eigs(i) - rep) <= radius) {
        found = true;
        break;
      }
    if (!found) reps.push_back(eigs(i));
  }
  return reps;
}

}  // namespace

void SystemData::validate() const {
  if (A.rows() != A.cols()) throw DimensionError("A must be square");
  if (B.rows() != A.rows()) throw DimensionError("B row count must match A");
  if (C.cols() != A.cols()) throw DimensionError("C column count must match A");
  if (!A.allFinite() || !B.allFinite() || !C.allFinite())
    throw ParameterError("system matrices must be finite");
  if (r < 0.0 || s < 0.0) throw ParameterError("exponents r, s must be nonnegative");
  if (!(r + s < 1.0)) throw ParameterError("standing assumption r + s < 1 violated");
}

HamiltonianMatrices assemble(const SystemData& sys, const NumericPolicy& pol) {
  sys.validate();
  HamiltonianMatrices h;
  h.sys = sys;
  h.scale = HilbertScale::build(sys.A, pol);

  const Eigen::Index n = sys.n();
  h.S0 = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  h.S0.topLeftCorner(n, n) = sys.A;
  h.S0.bottomRightCorner(n, n) = -sys.A.adjoint();

  h.R = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  h.R.topRightCorner(n, n) = -sys.B * sys.B.adjoint();
  h.R.bottomLeftCorner(n, n) = -sys.C.adjoint() * sys.C;

  h.T0 = h.S0 + h.R;

  h.v0 = {plain(-sys.r), star(-sys.s)};
  h.v1 = {star(sys.s), plain(sys.r)};
  h.v = {plain(0.0), star(0.0)};
  return h;
}

Eigen::MatrixXcd HamiltonianMatrices::block_weight(const BlockWeights& w) const {
  const Eigen::Index nn = n();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(2 * nn, 2 * nn);
  out.topLeftCorner(nn, nn) = scale.lambda_power(w.top);
  out.bottomRightCorner(nn, nn) = scale.lambda_power(w.bottom);
  return out;
}

double HamiltonianMatrices::weighted_norm(const Eigen::MatrixXcd& m, const BlockWeights& src,
                                          const BlockWeights& dst) const {
  Eigen::MatrixXcd weighted = m;
  if (dst.top.exponent != 0.0 || dst.bottom.exponent != 0.0)
    weighted = block_weight(dst) * weighted;
  if (src.top.exponent != 0.0 || src.bottom.exponent != 0.0) {
    const BlockWeights inv{{src.top.side, -src.top.exponent},
                           {src.bottom.side, -src.bottom.exponent}};
    weighted = weighted * block_weight(inv);
  }
  return spectral_norm(weighted);
}

static PbhReport pbh_impl(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& other,
                          bool stack_below, const NumericPolicy& pol) {
  const Eigen::Index n = a.rows();
  PbhReport rep;
  rep.threshold = pol.pbh_tol * (spectral_norm(a) + spectral_norm(other));
  const Eigen::VectorXcd eigs = Eigen::ComplexEigenSolver<Eigen::MatrixXcd>(a, false).eigenvalues();
  rep.ok = true;
  for (const Cx lambda : cluster_eigenvalues(eigs, spectral_norm(a))) {
    Eigen::MatrixXcd compound;
    if (stack_below) {
      compound.resize(n + other.rows(), n);
      compound.topRows(n) = a - lambda * Eigen::MatrixXcd::Identity(n, n);
      compound.bottomRows(other.rows()) = other;
    } else {
      compound.resize(n, n + other.cols());
      compound.leftCols(n) = a - lambda * Eigen::MatrixXcd::Identity(n, n);
      compound.rightCols(other.cols()) = other;
    }
    const double margin = smallest_singular_value(compound);
    rep.margins.push_back({lambda, margin});
    if (!(margin > rep.threshold)) rep.ok = false;
  }
  return rep;
}

PbhReport pbh_controllability(const SystemData& sys, const NumericPolicy& pol) {
  return pbh_impl(sys.A, sys.B, /*stack_below=*/false, pol);
}

PbhReport pbh_observability(const SystemData& sys, const NumericPolicy& pol) {
  return pbh_impl(sys.A, sys.C, /*stack_below=*/true, pol);
}

SpectralGapReport spectral_gap_check(const SystemData& sys, const NumericPolicy& pol) {
  sys.validate();
  const Eigen::Index n = sys.n();
  SpectralGapReport rep;

  const double a_norm = spectral_norm(sys.A);
  const Eigen::VectorXcd a_eigs =
      Eigen::ComplexEigenSolver<Eigen::MatrixXcd>(sys.A, false).eigenvalues();
  const double margin_floor =
      pol.pbh_tol * (a_norm + spectral_norm(sys.B) + spectral_norm(sys.C));

  for (const Cx lambda : cluster_eigenvalues(a_eigs, a_norm)) {
    if (std::abs(lambda.real()) > pol.axis_tol * std::max(a_norm, 1.0)) continue;
    const Cx it(0.0, lambda.imag());
    Eigen::MatrixXcd obs(n + sys.p(), n);
    obs.topRows(n) = sys.A - it * Eigen::MatrixXcd::Identity(n, n);
    obs.bottomRows(sys.p()) = sys.C;
    Eigen::MatrixXcd ctl(n + sys.m(), n);
    ctl.topRows(n) = sys.A.adjoint() + it * Eigen::MatrixXcd::Identity(n, n);
    ctl.bottomRows(sys.m()) = sys.B.adjoint();
    AxisKernelTest t{it, smallest_singular_value(obs), smallest_singular_value(ctl)};
    rep.axis_tests.push_back(t);
    if (!(t.margin_observation > margin_floor && t.margin_control > margin_floor))
      rep.condition_holds = false;
  }

  const HamiltonianMatrices ham = assemble(sys, pol);
  const double t0_norm = spectral_norm(ham.T0);
  const Eigen::VectorXcd t0_eigs =
      Eigen::ComplexEigenSolver<Eigen::MatrixXcd>(ham.T0, false).eigenvalues();
  for (Eigen::Index i = 0; i < t0_eigs.size(); ++i)
    if (std::abs(t0_eigs(i).real()) <= pol.axis_tol * std::max(t0_norm, 1.0))
      rep.t0_axis_eigenvalues.push_back(t0_eigs(i));
  rep.t0_axis_free = rep.t0_axis_eigenvalues.empty();
  rep.consistent = (rep.condition_holds == rep.t0_axis_free);
  return rep;
}

IndefiniteForm IndefiniteForm::make(Eigen::Index n) {
  IndefiniteForm f;
  f.J = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  f.J.topRightCorner(n, n) = -kI * Eigen::MatrixXcd::Identity(n, n);
  f.J.bottomLeftCorner(n, n) = kI * Eigen::MatrixXcd::Identity(n, n);
  f.Jtilde = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  f.Jtilde.topRightCorner(n, n) = Eigen::MatrixXcd::Identity(n, n);
  f.Jtilde.bottomLeftCorner(n, n) = Eigen::MatrixXcd::Identity(n, n);
  return f;
}

SymmetryDefects j_symmetry_check(const HamiltonianMatrices& ham, const IndefiniteForm& form,
                                 int samples, const NumericPolicy& pol, std::uint64_t seed) {
  (void)pol;
  SymmetryDefects d;
  const double t0_norm = std::max(spectral_norm(ham.T0), 1e-300);
  d.j_identity_defect =
      spectral_norm(form.J * ham.T0 + ham.T0.adjoint() * form.J) / t0_norm;

  Rng rng(seed);
  const Eigen::MatrixXcd jt = form.Jtilde * ham.T0;
  double excess = 0.0;
  for (int k = 0; k < samples; ++k) {
    const Eigen::VectorXcd v = rng.vector(ham.T0.rows());
    const double re = inner(jt * v, v).real();
    excess = std::max(excess, re / (t0_norm * v.squaredNorm()));
  }
  d.dissipativity_excess = excess;
  d.ok = d.j_identity_defect <= 1e-12 && d.dissipativity_excess <= 1e-12;
  return d;
}

SpectrumSymmetryReport spectrum_symmetry_check(const HamiltonianMatrices& ham,
                                               const NumericPolicy& pol) {
  SpectrumSymmetryReport rep;
  const Eigen::VectorXcd eigs =
      Eigen::ComplexEigenSolver<Eigen::MatrixXcd>(ham.T0, false).eigenvalues();
  rep.spectrum.assign(eigs.data(), eigs.data() + eigs.size());
  std::vector<Cx> reflected;
  reflected.reserve(rep.spectrum.size());
  for (const Cx l : rep.spectrum) reflected.push_back(-std::conj(l));
  rep.max_match_distance = greedy_match_distance(rep.spectrum, reflected);
  rep.tolerance = pol.match_tol * std::max(spectral_norm(ham.T0), 1.0);
  rep.ok = rep.max_match_distance <= rep.tolerance;
  return rep;
}

SectorEstimate certify_quasi_sectorial(const Eigen::MatrixXcd& a, double theta, double mu,
                                       double rho, int grid_density,
                                       const NumericPolicy& pol) {
  if (a.rows() != a.cols()) throw DimensionError("A must be square");
  if (!(theta > 0.0 && theta < M_PI / 2)) throw ParameterError("theta must be in (0, pi/2)");
  if (!(rho > 0.0)) throw ParameterError("rho must be positive");
  if (grid_density < 2) throw ParameterError("grid density too small");

  const Eigen::Index n = a.rows();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  const Eigen::MatrixXcd shifted = a - mu * id;
  const double a_norm = std::max(spectral_norm(a), 1.0);

  // Reject when the spectrum of A - mu meets the sector region itself.
  const Eigen::VectorXcd eigs =
      Eigen::ComplexEigenSolver<Eigen::MatrixXcd>(shifted, false).eigenvalues();
  std::vector<Cx> violating;
  const double half_angle = M_PI / 2 + theta;
  for (Eigen::Index i = 0; i < eigs.size(); ++i) {
    const Cx l = eigs(i);
    if (std::abs(l) >= rho * (1.0 - 1e-12) && std::abs(std::arg(l)) <= half_angle)
      violating.push_back(l);
  }
  if (!violating.empty()) {
    std::ostringstream os;
    os << "A - mu is not quasi-sectorial at theta=" << theta << ": eigenvalues in the sector:";
    for (const Cx l : violating) os << " " << format_complex(l, false);
    throw SingularityError(os.str());
  }

  SectorEstimate est;
  est.theta = theta;
  est.mu = mu;
  est.rho = rho;

  std::vector<Cx> grid;
  const double r_max = 10.0 * a_norm;
  for (int sign = -1; sign <= 1; sign += 2) {
    for (int k = 0; k < grid_density; ++k) {
      const double frac = static_cast<double>(k) / (grid_density - 1);
      const double radius = rho * std::pow(r_max / rho, frac);
      grid.push_back(std::polar(radius, sign * half_angle));
    }
  }
  for (int k = 0; k < grid_density; ++k) {
    const double phi = -half_angle + 2.0 * half_angle * k / (grid_density - 1);
    grid.push_back(std::polar(rho, phi));
  }

  double big_m = 0.0;
  for (const Cx lambda : grid) {
    const Eigen::MatrixXcd res = (shifted - lambda * id).partialPivLu().solve(id);
    const double norm = spectral_norm(res);
    if (!std::isfinite(norm))
      throw SingularityError("sector sample hit the spectrum of A - mu");
    est.certified_grid.push_back({lambda, norm});
    big_m = std::max(big_m, std::abs(lambda) * norm);
  }
  est.M = big_m;
  (void)pol;
  return est;
}

namespace {

struct ScanWeights {
  Eigen::MatrixXcd dst;      // left factor (empty means identity)
  Eigen::MatrixXcd src_inv;  // right factor (empty means identity)
};

ScanWeights scan_weights(const HamiltonianMatrices& ham, ResolventNorm which) {
  ScanWeights w;
  const BlockWeights v0_inv{{ham.v0.top.side, -ham.v0.top.exponent},
                            {ham.v0.bottom.side, -ham.v0.bottom.exponent}};
  const bool v0_trivial = ham.sys.r == 0.0 && ham.sys.s == 0.0;
  switch (which) {
    case ResolventNorm::v0:
      if (!v0_trivial) {
        w.dst = ham.block_weight(ham.v0);
        w.src_inv = ham.block_weight(v0_inv);
      }
      break;
    case ResolventNorm::v:
      break;
    case ResolventNorm::v0_to_v1:
      w.dst = ham.block_weight(ham.v1);
      if (!v0_trivial) w.src_inv = ham.block_weight(v0_inv);
      break;
    case ResolventNorm::v0_to_v:
      if (!v0_trivial) w.src_inv = ham.block_weight(v0_inv);
      break;
  }
  return w;
}

void check_axis_grid(const Eigen::VectorXcd& spectrum, double t0_norm,
                     const std::vector<double>& ts, const NumericPolicy& pol) {
  for (const double t : ts) {
    for (Eigen::Index i = 0; i < spectrum.size(); ++i) {
      if (std::abs(spectrum(i) - Cx(0.0, t)) <= pol.axis_tol * std::max(t0_norm, 1.0)) {
        std::ostringstream os;
        os << "axis grid point t=" << format_full(t) << " hits the spectrum near "
           << format_complex(spectrum(i), false);
        throw SingularityError(os.str());
      }
    }
  }
}

}  // namespace

std::vector<std::pair<double, double>> axis_resolvent_scan(
    const HamiltonianMatrices& ham, ResolventNorm which, const std::vector<double>& ts,
    const NumericPolicy& pol, const Eigen::VectorXcd* spectrum) {
  const Eigen::Index nn = ham.T0.rows();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(nn, nn);
  Eigen::VectorXcd eigs;
  if (spectrum)
    eigs = *spectrum;
  else
    eigs = Eigen::ComplexEigenSolver<Eigen::MatrixXcd>(ham.T0, false).eigenvalues();
  const double t0_norm = spectral_norm(ham.T0);
  check_axis_grid(eigs, t0_norm, ts, pol);

  const ScanWeights w = scan_weights(ham, which);
  std::vector<std::pair<double, double>> out;
  out.reserve(ts.size());
  for (const double t : ts) {
    Eigen::MatrixXcd res = (ham.T0 - Cx(0.0, t) * id).partialPivLu().solve(id);
    if (w.dst.size()) res = w.dst * res;
    if (w.src_inv.size()) res = res * w.src_inv;
    out.emplace_back(t, spectral_norm(res));
  }
  return out;
}

std::vector<std::pair<double, double>> axis_resolvent_diff_scan(
    const HamiltonianMatrices& ham, const std::vector<double>& ts,
    const NumericPolicy& pol, const Eigen::VectorXcd* spectrum) {
  const Eigen::Index nn = ham.T0.rows();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(nn, nn);
  Eigen::VectorXcd eigs;
  if (spectrum)
    eigs = *spectrum;
  else
    eigs = Eigen::ComplexEigenSolver<Eigen::MatrixXcd>(ham.T0, false).eigenvalues();
  check_axis_grid(eigs, spectral_norm(ham.T0), ts, pol);

  const ScanWeights w = scan_weights(ham, ResolventNorm::v0);
  std::vector<std::pair<double, double>> out;
  out.reserve(ts.size());
  for (const double t : ts) {
    const Cx sh(0.0, t);
    Eigen::MatrixXcd diff = (ham.T0 - sh * id).partialPivLu().solve(id) -
                            (ham.S0 - sh * id).partialPivLu().solve(id);
    if (w.dst.size()) diff = w.dst * diff;
    if (w.src_inv.size()) diff = diff * w.src_inv;
    out.emplace_back(t, spectral_norm(diff));
  }
  return out;
}

double rho1_estimate(const HamiltonianMatrices& ham, double t_from) {
  const Eigen::Index nn = ham.T0.rows();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(nn, nn);
  const ScanWeights w = scan_weights(ham, ResolventNorm::v0);
  double t = std::max(t_from, 1e-6);
  for (int k = 0; k < 200; ++k) {
    Eigen::MatrixXcd m = ham.R * (ham.S0 - Cx(0.0, t) * id).partialPivLu().solve(id);
    if (w.dst.size()) m = w.dst * m;
    if (w.src_inv.size()) m = m * w.src_inv;
    if (spectral_norm(m) <= 0.5) return t;
    t *= 1.5;
  }
  throw ConsistencyError("rho1_estimate: perturbation never fell below 1/2");
}

}  // namespace hamricc

// SPDX-License-Identifier: Apache-2.0
#include "hamricc/problems.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hamricc/linalg.hpp"
#include "hamricc/scale.hpp"

namespace hamricc {

namespace {

/// Normalizes B to unit scale norm U -> H_{-r} and C to unit scale norm
/// H_s^(*) -> Y through the scale of A.
void normalize_through_scale(SystemData& sys) {
  const HilbertScale scale = HilbertScale::build(sys.A);
  const double nb = scale.operator_scale_norm(sys.B, plain(0.0), plain(-sys.r));
  if (nb > 0.0) sys.B /= nb;
  const double nc = scale.operator_scale_norm(sys.C, star(sys.s), plain(0.0));
  if (nc > 0.0) sys.C /= nc;
}

}  // namespace

SystemData gen_scalar(double a, double b, double c) {
  SystemData sys;
  sys.A = Eigen::MatrixXcd::Constant(1, 1, Cx(-a, 0.0));
  sys.B = Eigen::MatrixXcd::Constant(1, 1, Cx(b, 0.0));
  sys.C = Eigen::MatrixXcd::Constant(1, 1, Cx(c, 0.0));
  sys.r = 0.0;
  sys.s = 0.0;
  std::ostringstream os;
  os << "scalar(" << format_full(a) << "," << format_full(b) << "," << format_full(c)
     << ")";
  sys.label = os.str();
  return sys;
}

SystemData gen_random_stable(Eigen::Index n, Eigen::Index m, Eigen::Index p,
                             std::uint64_t seed, double margin, double r, double s,
                             const NumericPolicy& pol) {
  if (!(margin > 0.0)) throw ParameterError("margin must be positive");
  if (n < 1 || m < 1 || p < 1) throw ParameterError("dimensions must be >= 1");
  Rng rng(seed ^ 0xabcdef12345678ULL);

  for (int attempt = 0; attempt < 64; ++attempt) {
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      // log-uniform real parts in [margin, 10 margin], then the extra -margin
      // shift below; imaginary parts stay inside the certifiable sector
      const double re = std::exp(rng.uniform(std::log(margin), std::log(10.0 * margin)));
      const double im_cap = std::min(5.0, 0.9 * (re + margin));
      d(i, i) = Cx(-re, rng.uniform(-im_cap, im_cap));
    }
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j)
        d(i, j) = 0.3 * margin * rng.complex_normal();

    const Eigen::MatrixXcd q = rng.unitary(n);
    SystemData sys;
    sys.A = q * (d - margin * Eigen::MatrixXcd::Identity(n, n)) * q.adjoint();
    sys.B = rng.matrix(n, m);
    sys.C = rng.matrix(p, n);
    sys.r = r;
    sys.s = s;
    normalize_through_scale(sys);
    std::ostringstream os;
    os << "random_stable(n=" << n << ",seed=" << seed << ",attempt=" << attempt << ")";
    sys.label = os.str();

    if (pbh_controllability(sys, pol).ok && pbh_observability(sys, pol).ok) return sys;
  }
  throw GenerationError("gen_random_stable: retry budget exhausted");
}

SystemData gen_random_shifted(Eigen::Index n, Eigen::Index m, Eigen::Index p,
                              std::uint64_t seed, double mu, Eigen::Index k_unstable,
                              double r, double s, const NumericPolicy& pol) {
  if (!(mu > 0.0)) throw ParameterError("mu must be positive");
  if (!(k_unstable > 0 && k_unstable < n))
    throw ParameterError("need 0 < k_unstable < n");
  Rng rng(seed ^ 0x5ca1ab1e0ddba11ULL);
  const double keep_out = 1e-3;  // no eigenvalue real part inside (-keep_out, keep_out)

  for (int attempt = 0; attempt < 64; ++attempt) {
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index i = 0; i < k_unstable; ++i) {
      const double re = rng.uniform(std::max(keep_out * 10.0, 0.05 * mu), 0.9 * mu);
      const double im_cap = 0.5 * (mu - re);
      d(i, i) = Cx(re, rng.uniform(-im_cap, im_cap));
    }
    for (Eigen::Index i = k_unstable; i < n; ++i) {
      const double lo = std::max(keep_out * 10.0, 0.1 * mu);
      const double re = std::exp(rng.uniform(std::log(lo), std::log(10.0 * lo)));
      const double im_cap = std::min(5.0, 0.9 * re);
      d(i, i) = Cx(-re, rng.uniform(-im_cap, im_cap));
    }
    const Eigen::MatrixXcd q = rng.unitary(n);
    SystemData sys;
    sys.A = q * d * q.adjoint();
    sys.B = rng.matrix(n, m);
    sys.C = rng.matrix(p, n);
    sys.r = r;
    sys.s = s;
    normalize_through_scale(sys);
    std::ostringstream os;
    os << "random_shifted(n=" << n << ",k=" << k_unstable << ",mu=" << format_full(mu)
       << ",seed=" << seed << ")";
    sys.label = os.str();

    if (!(pbh_controllability(sys, pol).ok && pbh_observability(sys, pol).ok)) continue;
    try {
      certify_quasi_sectorial(sys.A, M_PI / 4, mu, keep_out, 24, pol);
    } catch (const SingularityError&) {
      continue;
    }
    return sys;
  }
  throw GenerationError("gen_random_shifted: retry budget exhausted");
}

SystemData gen_heat1d(Eigen::Index n, double r, double s, double control_node,
                      double obs_node) {
  if (n < 3) throw ParameterError("heat1d needs n >= 3");
  if (!(r + s < 1.0)) throw ParameterError("heat1d needs r + s < 1");

  SystemData sys;
  const double h_scale = static_cast<double>((n + 1) * (n + 1));
  sys.A = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    sys.A(i, i) = Cx(-2.0 * h_scale, 0.0);
    if (i + 1 < n) {
      sys.A(i, i + 1) = Cx(h_scale, 0.0);
      sys.A(i + 1, i) = Cx(h_scale, 0.0);
    }
  }
  sys.r = r;
  sys.s = s;

  const HilbertScale scale = HilbertScale::build(sys.A);
  auto bump_index = [n](double fraction) -> Eigen::Index {
    const auto idx = static_cast<Eigen::Index>(std::lround(fraction * n));
    return std::clamp<Eigen::Index>(idx, 1, n) - 1;  // 1-based node, clamped
  };

  Eigen::VectorXcd e_ctrl = Eigen::VectorXcd::Zero(n);
  e_ctrl(bump_index(control_node)) = Cx(1.0, 0.0);
  Eigen::VectorXcd e_obs = Eigen::VectorXcd::Zero(n);
  e_obs(bump_index(obs_node)) = Cx(1.0, 0.0);

  // Lambda^r e has unit H_{-r} norm by construction; the plain norm grows
  // with the mesh, which is the finite-dimensional signature of unboundedness.
  sys.B = scale.lambda_power(plain(r)) * e_ctrl;
  sys.C = (scale.lambda_power(plain(s)) * e_obs).adjoint();

  std::ostringstream os;
  os << "heat1d(n=" << n << ",r=" << format_full(r) << ",s=" << format_full(s) << ")";
  sys.label = os.str();
  return sys;
}

SystemData gen_axis_eigen_detect(Eigen::Index base_n, double r, double s, double omega,
                                 bool zero_obs) {
  if (base_n < 2) throw ParameterError("axis_eigen_detect needs base_n >= 2");
  SystemData sys;
  sys.A = Eigen::MatrixXcd::Zero(base_n, base_n);
  sys.A(0, 0) = Cx(0.0, omega);
  for (Eigen::Index i = 1; i < base_n; ++i) sys.A(i, i) = Cx(-1.0, 0.0);
  sys.B = Eigen::MatrixXcd::Constant(base_n, 1, Cx(1.0, 0.0));
  sys.C = Eigen::MatrixXcd::Constant(1, base_n, Cx(1.0, 0.0));
  if (zero_obs) sys.C(0, 0) = Cx(0.0, 0.0);
  sys.r = r;
  sys.s = s;
  normalize_through_scale(sys);
  std::ostringstream os;
  os << "axis_eigen_detect(n=" << base_n << ",omega=" << format_full(omega)
     << (zero_obs ? ",zero_obs" : "") << ")";
  sys.label = os.str();
  return sys;
}

SystemData generate(const ProblemSpec& spec, const NumericPolicy& pol) {
  if (!(spec.r + spec.s < 1.0)) throw ParameterError("problem spec needs r + s < 1");
  SystemData sys;
  switch (spec.kind) {
    case ProblemKind::scalar:
      sys = gen_scalar(spec.a, spec.b, spec.c);
      break;
    case ProblemKind::random_stable:
      sys = gen_random_stable(spec.n, spec.m, spec.p, spec.seed, spec.margin, spec.r,
                              spec.s, pol);
      break;
    case ProblemKind::random_shifted:
      sys = gen_random_shifted(spec.n, spec.m, spec.p, spec.seed, spec.mu,
                               spec.k_unstable, spec.r, spec.s, pol);
      break;
    case ProblemKind::heat1d:
      sys = gen_heat1d(spec.n, spec.r, spec.s, spec.control_node, spec.obs_node);
      break;
    case ProblemKind::axis_eigen_detect:
      sys = gen_axis_eigen_detect(spec.n, spec.r, spec.s, spec.omega, spec.axis_zero_obs);
      break;
    case ProblemKind::custom: {
      if (!spec.A_custom || !spec.B_custom || !spec.C_custom)
        throw ConfigError("custom problem needs A, B and C");
      sys.A = *spec.A_custom;
      sys.B = *spec.B_custom;
      sys.C = *spec.C_custom;
      sys.r = spec.r;
      sys.s = spec.s;
      sys.label = spec.label.empty() ? "custom" : spec.label;
      break;
    }
  }
  if (!spec.label.empty()) sys.label = spec.label;
  sys.validate();
  return sys;
}

}  // namespace hamricc

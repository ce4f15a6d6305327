// SPDX-License-Identifier: Apache-2.0
#include "hamricc/scale.hpp"

#include <cmath>
#include <sstream>

#include "hamricc/linalg.hpp"

namespace hamricc {

namespace {

void check_exponent(SpaceTag tag) {
  if (!(tag.exponent >= -1.0 - 1e-15 && tag.exponent <= 1.0 + 1e-15))
    throw ParameterError("scale exponent outside [-1, 1]");
}

Eigen::MatrixXcd power_from_eig(const Eigen::MatrixXcd& u, const Eigen::VectorXd& d,
                                double exponent) {
  // Lambda^s = Gram^{s/2}
  const Eigen::VectorXd powers = d.array().pow(0.5 * exponent);
  return u * powers.asDiagonal() * u.adjoint();
}

}  // namespace

HilbertScale HilbertScale::build(const Eigen::MatrixXcd& a, const NumericPolicy& pol) {
  if (a.rows() != a.cols()) throw DimensionError("base matrix must be square");
  if (!a.allFinite()) throw ParameterError("base matrix has non-finite entries");

  HilbertScale s;
  s.a_ = a;
  const Eigen::Index n = a.rows();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);

  Eigen::MatrixXcd gram_plain = id + a * a.adjoint();
  Eigen::MatrixXcd gram_star = id + a.adjoint() * a;
  gram_plain = 0.5 * (gram_plain + gram_plain.adjoint()).eval();
  gram_star = 0.5 * (gram_star + gram_star.adjoint()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ep(gram_plain);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram_star);
  if (ep.info() != Eigen::Success || es.info() != Eigen::Success)
    throw ConsistencyError("Gram eigendecomposition failed");
  s.d_plain_ = ep.eigenvalues();
  s.u_plain_ = ep.eigenvectors();
  s.d_star_ = es.eigenvalues();
  s.u_star_ = es.eigenvectors();

  const double floor = 1.0 - 1e-12 * s.d_plain_.cwiseAbs().maxCoeff();
  if (s.d_plain_.minCoeff() < floor || s.d_star_.minCoeff() < floor)
    throw ConsistencyError("Gram eigenvalue below 1");
  // Eigenvalues can dip below 1 only by rounding; clamp so fractional powers
  // stay real and the power group law is exact on the spectrum.
  s.d_plain_ = s.d_plain_.cwiseMax(1.0);
  s.d_star_ = s.d_star_.cwiseMax(1.0);

  const Eigen::MatrixXcd lam1 = s.lambda_power(plain(1.0));
  const double recon = (lam1 * lam1 - gram_plain).norm();
  if (recon > 1e-10 * gram_plain.norm())
    throw ConsistencyError("Lambda^1*Lambda^1 does not reproduce I + A*A^H");
  (void)pol;
  return s;
}

Eigen::MatrixXcd HilbertScale::lambda_power(SpaceTag tag) const {
  check_exponent(tag);
  if (tag.side == Side::plain) return power_from_eig(u_plain_, d_plain_, tag.exponent);
  return power_from_eig(u_star_, d_star_, tag.exponent);
}

double HilbertScale::scale_norm(SpaceTag tag, const Eigen::VectorXcd& x) const {
  if (x.size() != dim()) throw DimensionError("scale_norm: vector dimension mismatch");
  check_exponent(tag);
  const auto& u = tag.side == Side::plain ? u_plain_ : u_star_;
  const auto& d = tag.side == Side::plain ? d_plain_ : d_star_;
  // ||Lambda^s x|| through the eigenbasis, avoiding the dense power
  const Eigen::VectorXcd y = u.adjoint() * x;
  const Eigen::VectorXd w = d.array().pow(0.5 * tag.exponent);
  return (w.asDiagonal() * y).norm();
}

Cx HilbertScale::pairing(SpaceTag tag, const Eigen::VectorXcd& x,
                         const Eigen::VectorXcd& y) const {
  if (x.size() != dim() || y.size() != dim())
    throw DimensionError("pairing: vector dimension mismatch");
  check_exponent(tag);
  const auto& u = tag.side == Side::plain ? u_plain_ : u_star_;
  const auto& d = tag.side == Side::plain ? d_plain_ : d_star_;
  const Eigen::VectorXd w = d.array().pow(0.5 * tag.exponent);
  const Eigen::VectorXcd xs = w.asDiagonal() * (u.adjoint() * x).eval();
  const Eigen::VectorXcd ys = w.cwiseInverse().asDiagonal() * (u.adjoint() * y).eval();
  const Cx weighted = inner(xs, ys);
  const Cx flat = inner(x, y);
  const double denom = std::max(1.0, xs.norm() * ys.norm());
  if (std::abs(weighted - flat) > 1e-12 * denom)
    throw ConsistencyError("extended pairing disagrees with the plain inner product");
  return flat;
}

double HilbertScale::operator_scale_norm(const Eigen::MatrixXcd& m, SpaceTag src,
                                         SpaceTag dst) const {
  check_exponent(src);
  check_exponent(dst);
  const Eigen::Index n = dim();
  Eigen::MatrixXcd weighted = m;
  if (m.rows() == n) {
    if (dst.exponent != 0.0) weighted = lambda_power(dst) * weighted;
  } else if (dst.exponent != 0.0) {
    throw DimensionError("operator_scale_norm: dst space has no scale structure");
  }
  if (m.cols() == n) {
    if (src.exponent != 0.0)
      weighted = weighted * lambda_power({src.side, -src.exponent});
  } else if (src.exponent != 0.0) {
    throw DimensionError("operator_scale_norm: src space has no scale structure");
  }
  return spectral_norm(weighted);
}

HeinzReport heinz_check(const HilbertScale& scale, const Eigen::MatrixXcd& m,
                        SpaceTag src1, SpaceTag dst1, SpaceTag src2, SpaceTag dst2,
                        double mix, const NumericPolicy& pol) {
  (void)pol;
  if (src1.side != src2.side || dst1.side != dst2.side)
    throw ParameterError("heinz_check: endpoint tags must lie on one side per scale");
  if (!(src1.exponent < src2.exponent) || !(dst1.exponent < dst2.exponent))
    throw ParameterError("heinz_check: endpoint exponents must be strictly ordered");
  if (!(mix > 0.0 && mix < 1.0)) throw ParameterError("heinz_check: mix must be in (0,1)");

  const SpaceTag src_mid{src1.side, mix * src1.exponent + (1.0 - mix) * src2.exponent};
  const SpaceTag dst_mid{dst1.side, mix * dst1.exponent + (1.0 - mix) * dst2.exponent};

  HeinzReport rep;
  rep.norm_lo = scale.operator_scale_norm(m, src1, dst1);
  rep.norm_hi = scale.operator_scale_norm(m, src2, dst2);
  rep.lhs = scale.operator_scale_norm(m, src_mid, dst_mid);
  rep.rhs = std::pow(rep.norm_lo, mix) * std::pow(rep.norm_hi, 1.0 - mix);
  rep.holds = rep.lhs <= rep.rhs + 1e-10;
  return rep;
}

std::vector<ResolventScanPoint> resolvent_scale_bound_scan(
    const HilbertScale& scale, SpaceTag src, SpaceTag dst,
    const std::vector<Cx>& lambda_grid, const NumericPolicy& pol) {
  (void)pol;
  const Eigen::Index n = scale.dim();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  const double a_norm = spectral_norm(scale.base());
  std::vector<ResolventScanPoint> out;
  out.reserve(lambda_grid.size());
  for (const Cx lambda : lambda_grid) {
    const Eigen::MatrixXcd shifted = scale.base() - lambda * id;
    if (smallest_singular_value(shifted) <= 1e-12 * std::max(a_norm, 1.0)) {
      std::ostringstream os;
      os << "grid point " << format_complex(lambda, false) << " lies in the spectrum";
      throw SingularityError(os.str());
    }
    const Eigen::MatrixXcd resolvent = shifted.partialPivLu().solve(id);
    out.push_back({lambda, std::abs(lambda),
                   scale.operator_scale_norm(resolvent, src, dst)});
  }
  return out;
}

}  // namespace hamricc

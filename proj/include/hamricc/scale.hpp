// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "hamricc/types.hpp"

namespace hamricc {

/// Which of the two scales of a base operator A: the plain scale is generated
/// by (I + A A^H)^{1/2}, the star scale by (I + A^H A)^{1/2}.
enum class Side { plain, star };

/// Identifies one space of a scale: H_s (plain) or H_s^(*) (star),
/// s in [-1, 1].
struct SpaceTag {
  Side side = Side::plain;
  double exponent = 0.0;
};

inline SpaceTag plain(double s) { return {Side::plain, s}; }
inline SpaceTag star(double s) { return {Side::star, s}; }

/// Finite-dimensional realization of the two scales of spaces attached to a
/// square matrix A. One coordinate space carries all the spaces; only the
/// norms differ, weighted by fractional powers of the two Gram operators.
/// Immutable after construction; concurrent read-only use is safe.
class HilbertScale {
 public:
  /// Eigendecomposes I + A A^H and I + A^H A and verifies the power algebra.
  static HilbertScale build(const Eigen::MatrixXcd& a, const NumericPolicy& pol = {});

  const Eigen::MatrixXcd& base() const { return a_; }
  Eigen::Index dim() const { return a_.rows(); }

  /// Gram eigenvalues of the requested side, ascending; all >= 1.
  const Eigen::VectorXd& gram_eigenvalues(Side side) const {
    return side == Side::plain ? d_plain_ : d_star_;
  }

  /// Lambda^s (plain) or Lambda_*^s (star); Hermitian positive definite.
  Eigen::MatrixXcd lambda_power(SpaceTag tag) const;

  /// || Lambda^s x ||, the norm of x in the tagged space.
  double scale_norm(SpaceTag tag, const Eigen::VectorXcd& x) const;

  /// Extended duality pairing of x in H_s with y in H_{-s}. In the finite
  /// model this equals the plain inner product; the identity is asserted to
  /// 1e-12 relative as a self-check.
  Cx pairing(SpaceTag tag, const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) const;

  /// Operator norm of M as a map src -> dst, i.e. the spectral norm of
  /// Lambda_dst^t * M * Lambda_src^{-s}. Rectangular sides with no scale
  /// structure (input space U, output space Y) must carry exponent 0.
  double operator_scale_norm(const Eigen::MatrixXcd& m, SpaceTag src, SpaceTag dst) const;

 private:
  Eigen::MatrixXcd a_;
  Eigen::VectorXd d_plain_, d_star_;   // Gram eigenvalues
  Eigen::MatrixXcd u_plain_, u_star_;  // unitary eigenvectors
};

struct HeinzReport {
  double lhs = 0.0;       // interpolated-space norm
  double rhs = 0.0;       // product of endpoint norms
  double norm_lo = 0.0;   // endpoint (r1, s1)
  double norm_hi = 0.0;   // endpoint (r2, s2)
  bool holds = false;
};

/// Checks the interpolation inequality
///   ||M||_{r -> s} <= ||M||_{r1 -> s1}^mix * ||M||_{r2 -> s2}^{1-mix}
/// at r = mix*r1 + (1-mix)*r2, s = mix*s1 + (1-mix)*s2, with 1e-10 slack.
/// Requires src1.exponent < src2.exponent, dst1.exponent < dst2.exponent and
/// consistent sides.
HeinzReport heinz_check(const HilbertScale& scale, const Eigen::MatrixXcd& m,
                        SpaceTag src1, SpaceTag dst1, SpaceTag src2, SpaceTag dst2,
                        double mix, const NumericPolicy& pol = {});

struct ResolventScanPoint {
  Cx lambda;
  double abs_lambda;
  double norm;
};

/// Scale-weighted resolvent norms ||(A - lambda)^{-1}||_{src -> dst} over a
/// grid. Every grid point must lie in the resolvent set (smallest singular
/// value of A - lambda above 1e-12*||A||), otherwise SingularityError names
/// the offending point.
std::vector<ResolventScanPoint> resolvent_scale_bound_scan(
    const HilbertScale& scale, SpaceTag src, SpaceTag dst,
    const std::vector<Cx>& lambda_grid, const NumericPolicy& pol = {});

}  // namespace hamricc

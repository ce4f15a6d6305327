// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "hamricc/types.hpp"

namespace hamricc {

/// Spectral norm (largest singular value). Empty matrices have norm 0.
double spectral_norm(const Eigen::MatrixXcd& m);

/// Sesquilinear inner product, linear in the first argument:
/// inner(x, y) = sum_i x_i * conj(y_i).
inline Cx inner(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) {
  return y.dot(x);
}

inline Eigen::MatrixXcd hermitian_part(const Eigen::MatrixXcd& m) {
  return 0.5 * (m + m.adjoint());
}

/// Smallest singular value of a (possibly rectangular) matrix.
double smallest_singular_value(const Eigen::MatrixXcd& m);

/// Greedily pairs each entry of `left` with a distinct entry of `right`
/// minimising |left_i - right_j| globally; returns the largest matched
/// distance. Sizes must agree.
double greedy_match_distance(const std::vector<Cx>& left, const std::vector<Cx>& right);

/// Deterministic generator for tests and fixtures. The uniform variate is
/// derived from raw 64-bit draws so streams are identical across standard
/// library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

  std::uint64_t next_u64();
  double uniform();                       // [0, 1)
  double uniform(double lo, double hi);   // [lo, hi)
  double normal();                        // standard normal, Box-Muller
  Cx complex_normal();                    // complex with iid N(0, 1/2) parts
  Eigen::VectorXcd vector(Eigen::Index n);
  Eigen::MatrixXcd matrix(Eigen::Index rows, Eigen::Index cols);
  /// Haar-distributed unitary via QR of a complex Gaussian matrix.
  Eigen::MatrixXcd unitary(Eigen::Index n);

 private:
  std::uint64_t state_;
};

/// Formats a double with full round-trip precision ("%.17g").
std::string format_full(double v);
/// Formats a double for reports ("%.12e").
std::string format_report(double v);
/// Formats a complex number as "re" or "re+imi"/"re-imi" with the given
/// floating formatter.
std::string format_complex(Cx v, bool full_precision);

/// Parses "1.5", "-2i", "1e-3+4.5i", "i", ... Throws ConfigError on garbage.
Cx parse_complex(const std::string& token);

}  // namespace hamricc

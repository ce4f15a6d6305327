// SPDX-License-Identifier: Apache-2.0
#include "hamricc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace hamricc {

double spectral_norm(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::BDCSVD<Eigen::MatrixXcd>(m).singularValues()(0);
}

double smallest_singular_value(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

double greedy_match_distance(const std::vector<Cx>& left, const std::vector<Cx>& right) {
  if (left.size() != right.size())
    throw DimensionError("greedy_match_distance: size mismatch");
  const std::size_t n = left.size();
  std::vector<bool> used_l(n, false), used_r(n, false);
  double worst = 0.0;
  for (std::size_t round = 0; round < n; ++round) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (used_l[i]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (used_r[j]) continue;
        const double d = std::abs(left[i] - right[j]);
        if (d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    }
    used_l[bi] = used_r[bj] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

std::uint64_t Rng::next_u64() {
  // splitmix64; a fixed, portable stream
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
  // Box-Muller; u strictly positive so log is finite
  double u = 0.0;
  do {
    u = uniform();
  } while (u <= 0.0);
  const double v = uniform();
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * M_PI * v);
}

Cx Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return Cx(re, im) / std::sqrt(2.0);
}

Eigen::VectorXcd Rng::vector(Eigen::Index n) {
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = complex_normal();
  return v;
}

Eigen::MatrixXcd Rng::matrix(Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = complex_normal();
  return m;
}

Eigen::MatrixXcd Rng::unitary(Eigen::Index n) {
  const Eigen::MatrixXcd g = matrix(n, n);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  // fix phases so the factorisation is unique and q is Haar
  for (Eigen::Index j = 0; j < n; ++j) {
    const Cx d = r(j, j);
    q.col(j) *= (std::abs(d) > 0.0) ? d / std::abs(d) : Cx(1.0, 0.0);
  }
  return q;
}

std::string format_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_report(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12e", v);
  return buf;
}

std::string format_complex(Cx v, bool full_precision) {
  auto fmt = full_precision ? format_full : format_report;
  if (v.imag() == 0.0) return fmt(v.real());
  std::string out = fmt(v.real());
  if (!(v.imag() < 0.0)) out += "+";
  out += fmt(v.imag());
  out += "i";
  return out;
}

Cx parse_complex(const std::string& token) {
  std::string t;
  for (char c : token)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty()) throw ConfigError("empty complex token");

  const bool has_i = (t.back() == 'i' || t.back() == 'j');
  if (!has_i) {
    std::size_t pos = 0;
    double re = 0;
    try {
      re = std::stod(t, &pos);
    } catch (const std::exception&) {
      throw ConfigError("bad numeric token: '" + token + "'");
    }
    if (pos != t.size()) throw ConfigError("bad numeric token: '" + token + "'");
    return Cx(re, 0.0);
  }

  t.pop_back();  // strip the i
  if (t.empty() || t == "+") return Cx(0.0, 1.0);
  if (t == "-") return Cx(0.0, -1.0);

  // split at the last +/- that is not an exponent sign
  std::size_t split = std::string::npos;
  for (std::size_t k = t.size(); k-- > 1;) {
    if ((t[k] == '+' || t[k] == '-') && t[k - 1] != 'e' && t[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  try {
    if (split == std::string::npos) {
      std::size_t pos = 0;
      const double im = std::stod(t, &pos);
      if (pos != t.size()) throw ConfigError("");
      return Cx(0.0, im);
    }
    std::size_t pos = 0;
    const double re = std::stod(t.substr(0, split), &pos);
    if (pos != split) throw ConfigError("");
    std::string imtok = t.substr(split);
    double im = 1.0;
    if (imtok == "+")
      im = 1.0;
    else if (imtok == "-")
      im = -1.0;
    else {
      pos = 0;
      im = std::stod(imtok, &pos);
      if (pos != imtok.size()) throw ConfigError("");
    }
    return Cx(re, im);
  } catch (const std::exception&) {
    throw ConfigError("bad complex token: '" + token + "'");
  }
}

}  // namespace hamricc

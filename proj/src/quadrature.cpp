// SPDX-License-Identifier: Apache-2.0
#include "hamricc/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace hamricc {

std::vector<double> geometric_ladder(double inner, double outer) {
  std::vector<double> pts{0.0};
  double t = std::min(inner, outer);
  while (t < outer) {
    pts.push_back(t);
    t *= 2.0;
  }
  pts.push_back(outer);
  return pts;
}

std::vector<double> symmetric_ladder(double inner, double outer) {
  const std::vector<double> half = geometric_ladder(inner, outer);
  std::vector<double> pts;
  for (auto it = half.rbegin(); it != half.rend(); ++it)
    if (*it != 0.0) pts.push_back(-*it);
  pts.insert(pts.end(), half.begin(), half.end());
  return pts;
}

const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int order) {
  static std::mutex mu;
  static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;

  std::vector<double> x(order), w(order);
  for (int i = 0; i < order; ++i) {
    // Chebyshev-based initial guess, then Newton on P_n
    double z = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < order; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = order * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
  auto [ins, ok] = cache.emplace(order, std::make_pair(std::move(x), std::move(w)));
  (void)ok;
  return ins->second;
}

namespace {

struct QuadContext {
  const MatrixFn& f;
  std::size_t evals = 0;
  std::size_t max_evals;
  int max_depth;
  Eigen::MatrixXcd total;
  double err_total = 0.0;
  bool budget_exhausted = false;

  Eigen::MatrixXcd eval(double t) {
    ++evals;
    if (evals > max_evals) budget_exhausted = true;
    return f(t);
  }
};

Eigen::MatrixXcd simpson(const Eigen::MatrixXcd& fa, const Eigen::MatrixXcd& fm,
                         const Eigen::MatrixXcd& fb, double len) {
  return (len / 6.0) * (fa + 4.0 * fm + fb);
}

void simpson_rec(QuadContext& ctx, double a, double b, const Eigen::MatrixXcd& fa,
                 const Eigen::MatrixXcd& fm, const Eigen::MatrixXcd& fb,
                 const Eigen::MatrixXcd& coarse, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const Eigen::MatrixXcd fq1 = ctx.eval(0.5 * (a + m));
  const Eigen::MatrixXcd fq3 = ctx.eval(0.5 * (m + b));
  const Eigen::MatrixXcd left = simpson(fa, fq1, fm, m - a);
  const Eigen::MatrixXcd right = simpson(fm, fq3, fb, b - m);
  const Eigen::MatrixXcd fine = left + right;
  const double err = (fine - coarse).norm() / 15.0;

  if (err <= tol || depth >= ctx.max_depth || ctx.budget_exhausted) {
    ctx.total += fine + (fine - coarse) / 15.0;
    ctx.err_total += err;
    return;
  }
  simpson_rec(ctx, a, m, fa, fq1, fm, left, 0.5 * tol, depth + 1);
  simpson_rec(ctx, m, b, fm, fq3, fb, right, 0.5 * tol, depth + 1);
}

Eigen::MatrixXcd gl_panel(QuadContext& ctx, double a, double b, int order) {
  const auto& [x, w] = gauss_legendre(order);
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  Eigen::MatrixXcd sum;
  for (int i = 0; i < order; ++i) {
    const Eigen::MatrixXcd v = ctx.eval(c + h * x[i]);
    if (i == 0)
      sum = w[i] * v;
    else
      sum += w[i] * v;
  }
  return h * sum;
}

void gl_rec(QuadContext& ctx, double a, double b, double tol, int depth) {
  const Eigen::MatrixXcd coarse = gl_panel(ctx, a, b, 7);
  const Eigen::MatrixXcd fine = gl_panel(ctx, a, b, 15);
  const double err = (fine - coarse).norm();
  if (err <= tol || depth >= ctx.max_depth || ctx.budget_exhausted) {
    ctx.total += fine;
    ctx.err_total += err;
    return;
  }
  const double m = 0.5 * (a + b);
  gl_rec(ctx, a, m, 0.5 * tol, depth + 1);
  gl_rec(ctx, m, b, 0.5 * tol, depth + 1);
}

}  // namespace

QuadResult integrate_adaptive(const MatrixFn& f, const std::vector<double>& breakpoints,
                              const QuadOptions& opt) {
  if (breakpoints.size() < 2) throw ParameterError("need at least one panel");
  for (std::size_t i = 1; i < breakpoints.size(); ++i)
    if (!(breakpoints[i] > breakpoints[i - 1]))
      throw ParameterError("breakpoints must be strictly increasing");

  QuadContext ctx{f, 0, opt.max_evals, opt.max_depth, Eigen::MatrixXcd(), 0.0, false};
  const std::size_t panels = breakpoints.size() - 1;
  const double tol_per_panel = opt.abs_tol / static_cast<double>(panels);

  const Eigen::MatrixXcd probe = ctx.eval(breakpoints.front());
  ctx.total = Eigen::MatrixXcd::Zero(probe.rows(), probe.cols());

  for (std::size_t i = 0; i < panels; ++i) {
    const double a = breakpoints[i], b = breakpoints[i + 1];
    if (opt.rule == QuadRule::adaptive_simpson) {
      const Eigen::MatrixXcd fa = (i == 0) ? probe : ctx.eval(a);
      const Eigen::MatrixXcd fm = ctx.eval(0.5 * (a + b));
      const Eigen::MatrixXcd fb = ctx.eval(b);
      const Eigen::MatrixXcd coarse = simpson(fa, fm, fb, b - a);
      simpson_rec(ctx, a, b, fa, fm, fb, coarse, tol_per_panel, 0);
    } else {
      gl_rec(ctx, a, b, tol_per_panel, 0);
    }
  }

  QuadResult out;
  out.value = std::move(ctx.total);
  out.error_estimate = ctx.err_total;
  out.evals = ctx.evals;
  out.converged = !ctx.budget_exhausted && ctx.err_total <= opt.abs_tol;
  return out;
}

}  // namespace hamricc

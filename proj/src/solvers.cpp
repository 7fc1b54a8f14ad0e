#include "aoigame/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "aoigame/errors.hpp"

namespace aoigame {

void SolveOptions::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw DomainError("tolerances must be positive");
  if (max_iter < 1) throw DomainError("max_iter must be at least 1");
  if (!(damping > 0.0 && damping <= 1.0)) throw DomainError("damping must lie in (0, 1]");
  if (!(divergence_cap > 0.0)) throw DomainError("divergence cap must be positive");
}

double solve_scalar_bracketed(const std::function<double(double)>& f, double lo, double hi,
                              const SolveOptions& opts) {
  opts.validate();
  double a = lo, b = hi;
  double fa = f(a), fb = f(b);
  if (!std::isfinite(fa) || !std::isfinite(fb)) throw BracketError("non-finite value at bracket end");
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (fa * fb > 0.0) {
    throw BracketError("no sign change on [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  if (std::fabs(fa) < std::fabs(fb)) {
    std::swap(a, b);
    std::swap(fa, fb);
  }
  double c = a, fc = fa, d = b - a;
  bool bisected = true;
  for (int it = 0; it < opts.max_iter; ++it) {
    if (std::fabs(fb) <= opts.abs_tol) return b;
    if (std::fabs(b - a) <= opts.rel_tol * std::fabs(b) || std::fabs(b - a) <= 1e-300) return b;

    double s;
    if (fa != fc && fb != fc) {
      s = a * fb * fc / ((fa - fb) * (fa - fc)) + b * fa * fc / ((fb - fa) * (fb - fc)) +
          c * fa * fb / ((fc - fa) * (fc - fb));
    } else {
      s = b - fb * (b - a) / (fb - fa);
    }
    const double q = (3.0 * a + b) / 4.0;
    const bool outside = !((s > std::min(q, b) && s < std::max(q, b)));
    const double tol = 2.0 * std::numeric_limits<double>::epsilon() * std::fabs(b);
    if (outside || (bisected && std::fabs(s - b) >= std::fabs(b - c) / 2.0) ||
        (!bisected && std::fabs(s - b) >= std::fabs(c - d) / 2.0) ||
        (bisected && std::fabs(b - c) < tol) || (!bisected && std::fabs(c - d) < tol)) {
      s = 0.5 * (a + b);
      bisected = true;
    } else {
      bisected = false;
    }
    const double fs = f(s);
    d = c;
    c = b;
    fc = fb;
    if (fa * fs < 0.0) {
      b = s;
      fb = fs;
    } else {
      a = s;
      fa = fs;
    }
    if (std::fabs(fa) < std::fabs(fb)) {
      std::swap(a, b);
      std::swap(fa, fb);
    }
  }
  throw ConvergenceError("bracketed solve exceeded max_iter");
}

namespace {

double sup_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

double residual_of(const std::vector<double>& x, const std::vector<double>& gx) {
  double r = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) r = std::max(r, std::fabs(gx[i] - x[i]));
  return r;
}

}  // namespace

FixedPointResult solve_fixed_point(
    const std::function<std::vector<double>(const std::vector<double>&)>& g,
    std::vector<double> start, const SolveOptions& opts) {
  opts.validate();
  std::vector<double> x = std::move(start);
  double w = opts.damping;
  std::vector<double> gx = g(x);
  if (gx.size() != x.size()) throw DomainError("fixed-point map changed dimension");
  double res = residual_of(x, gx);
  for (int it = 0; it < opts.max_iter; ++it) {
    if (res <= opts.abs_tol * (1.0 + sup_norm(x))) return {x, it, res};
    std::vector<double> next(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) next[i] = x[i] + w * (gx[i] - x[i]);
    if (sup_norm(next) > opts.divergence_cap) throw DivergenceError("iterate exceeded rate cap");
    std::vector<double> gnext = g(next);
    const double next_res = residual_of(next, gnext);
    if (next_res >= res) {
      if (w > 1.0 / 1024.0) w *= 0.5;
    } else {
      w = std::min(opts.damping, 2.0 * w);
    }
    x = std::move(next);
    gx = std::move(gnext);
    res = next_res;
  }
  if (res <= opts.abs_tol * (1.0 + sup_norm(x))) return {x, opts.max_iter, res};
  throw ConvergenceError("fixed-point iteration exceeded max_iter (residual " +
                         std::to_string(res) + ")");
}

}  // namespace aoigame

#pragma once

#include <functional>
#include <vector>

namespace aoigame {

struct SolveOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-12;
  int max_iter = 10000;
  double damping = 1.0;
  double divergence_cap = 1e12;

  void validate() const;
};

// Brent's method on [lo, hi]. Requires f(lo) * f(hi) <= 0.
double solve_scalar_bracketed(const std::function<double(double)>& f, double lo, double hi,
                              const SolveOptions& opts = {});

struct FixedPointResult {
  std::vector<double> x;
  int iterations = 0;
  double residual = 0.0;
};

// Damped Picard iteration x <- x + w (g(x) - x). The step w starts at
// opts.damping, is halved whenever the residual fails to decrease and is
// doubled back (up to opts.damping) after each step that reduces it.
FixedPointResult solve_fixed_point(
    const std::function<std::vector<double>(const std::vector<double>&)>& g,
    std::vector<double> start, const SolveOptions& opts = {});

}  // namespace aoigame

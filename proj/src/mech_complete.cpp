#include "aoigame/mech_complete.hpp"

#include <algorithm>
#include <cmath>

#include "aoigame/errors.hpp"

namespace aoigame {

std::string Regime::label() const {
  switch (kind) {
    case Kind::large:
      return "large";
    case Kind::small:
      return "small";
    case Kind::medium:
      return "medium(" + std::to_string(j) + ")";
  }
  return "unknown";
}

namespace {

void require_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0, 1)");
}

Regime classify(const std::vector<double>& thresholds, double delta) {
  std::size_t above = 0;
  for (double t : thresholds) {
    if (delta < t) ++above;
  }
  if (above == 0) return {Regime::Kind::large, 0};
  if (above == thresholds.size()) return {Regime::Kind::small, above};
  return {Regime::Kind::medium, above};
}

}  // namespace

ThresholdForms delta_threshold_forms(std::size_t i, const RateProfile& optimum,
                                     const RateProfile& nash, const SystemParams& params) {
  const double mu = params.mu();
  const double c = params.cost(i);
  const double lo = optimum[i];
  const double ls = nash[i];
  const double r = optimum.rival_total(i);
  const double b = best_response(r, c, mu);
  ThresholdForms f;
  const double den_closed = 2.0 * lo * (ls - b);
  f.closed = den_closed == 0.0 ? 0.0 : (lo - b) * (lo - b) / den_closed;

  const double coop = platform_cost(i, optimum, params);
  const double dev = cost_given_rivals(b, r, c, mu);
  const double pun = platform_cost(i, nash, params);
  const double den = pun - dev;
  f.cost_difference = den == 0.0 ? 0.0 : (coop - dev) / den;
  return f;
}

double delta_threshold(std::size_t i, const SystemParams& params, const SolveOptions& opts) {
  return delta_thresholds(params, opts).at(i);
}

std::vector<double> delta_thresholds(const SystemParams& params, const SolveOptions& opts) {
  const auto ne = nash_equilibrium(params, opts);
  const auto so = social_optimum(params, opts);
  std::vector<double> out(params.n());
  for (std::size_t i = 0; i < params.n(); ++i) {
    if (params.n() == 1) {
      out[i] = 0.0;
      continue;
    }
    const auto f = delta_threshold_forms(i, so.profile, ne.profile, params);
    if (std::fabs(f.closed - f.cost_difference) > 1e-6) {
      throw ConsistencyError("threshold forms disagree for platform " + std::to_string(i));
    }
    out[i] = f.closed;
  }
  return out;
}

DeviationValue deviation_value_at(std::size_t i, double rate, const RateProfile& coop,
                                  const SystemParams& params, double delta,
                                  const RateProfile& punishment) {
  if (!(delta >= 0.0 && delta < 1.0)) throw DomainError("delta must lie in [0, 1)");
  const double mu = params.mu();
  const double c = params.cost(i);
  const double r = coop.rival_total(i);
  const double w = delta / (1.0 - delta);
  const double coop_cost = platform_cost(i, coop, params);
  DeviationValue v;
  v.comply = coop_cost / (1.0 - delta);
  const double future = rate > coop[i] ? platform_cost(i, punishment, params) : coop_cost;
  v.deviate = cost_given_rivals(rate, r, c, mu) + w * future;
  return v;
}

DeviationValue deviation_value(std::size_t i, const RateProfile& coop, const SystemParams& params,
                               double delta, const RateProfile& punishment) {
  const double b = best_response(coop.rival_total(i), params.cost(i), params.mu());
  if (b <= coop[i]) {
    // The best response is not an over-sampling move; deviating gains nothing
    // beyond staying put.
    return deviation_value_at(i, coop[i], coop, params, delta, punishment);
  }
  return deviation_value_at(i, b, coop, params, delta, punishment);
}

DeviationValue deviation_value(std::size_t i, const RateProfile& coop, const SystemParams& params,
                               double delta, const SolveOptions& opts) {
  return deviation_value(i, coop, params, delta, nash_equilibrium(params, opts).profile);
}

IndifferenceRoots indifference_roots(double c, double k_coop, double k_punish, double delta) {
  const double m = std::sqrt(c) * (delta * std::sqrt(k_punish) + (1.0 - delta) * std::sqrt(k_coop));
  IndifferenceRoots r;
  r.discriminant = m * m - c * k_coop;
  const double s = std::sqrt(std::max(r.discriminant, 0.0));
  r.smaller = (m - s) / c;
  r.larger = (m + s) / c;
  return r;
}

CooperationPlan cooperation_profile(const SystemParams& params, double delta,
                                    const SolveOptions& opts) {
  require_delta(delta);
  const double mu = params.mu();
  const std::size_t n = params.n();
  const auto ne = nash_equilibrium(params, opts);
  const auto so = social_optimum(params, opts);

  CooperationPlan plan;
  plan.delta = delta;
  plan.reference_nash = ne.profile;
  plan.reference_optimum = so.profile;
  plan.sorted_order = params.cost_order();
  plan.thresholds = delta_thresholds(params, opts);
  plan.regime = classify(plan.thresholds, delta);

  std::vector<double> k_pun(n);
  for (std::size_t i = 0; i < n; ++i) k_pun[i] = 1.0 + ne.profile.rival_total(i) / mu;

  double worst_disc = 0.0;
  auto g = [&](const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v;
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto roots = indifference_roots(params.cost(i), 1.0 + (s - x[i]) / mu, k_pun[i], delta);
      worst_disc = std::min(worst_disc, roots.discriminant);
      y[i] = std::max(so.profile[i], roots.smaller);
    }
    return y;
  };
  std::vector<double> x = so.profile.rates();
  if (plan.regime.kind != Regime::Kind::large) {
    // Coordinate i's update ignores x_i, and the map is order-preserving from
    // the optimum upward: Gauss-Seidel sweeps rise monotonically to the least
    // fixed point.
    for (int it = 0;; ++it) {
      if (it >= opts.max_iter) throw ConvergenceError("cooperation profile did not converge");
      double change = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double y = g(x)[i];
        change = std::max(change, std::fabs(y - x[i]));
        x[i] = y;
      }
      double scale = 0.0;
      for (double v : x) scale = std::max(scale, std::fabs(v));
      if (change <= opts.abs_tol + opts.rel_tol * scale) break;
    }
  }
  plan.profile = RateProfile(x);

  worst_disc = 0.0;
  g(x);
  plan.feasible = worst_disc >= -1e-12;
  plan.binding.assign(n, false);
  plan.residuals.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] > so.profile[i] * (1.0 + 1e-9)) {
      plan.binding[i] = true;
      const double k = 1.0 + plan.profile.rival_total(i) / mu;
      const double c = params.cost(i);
      const double m =
          std::sqrt(c) * (delta * std::sqrt(k_pun[i]) + (1.0 - delta) * std::sqrt(k));
      plan.residuals[i] = std::fabs(c * x[i] + k / x[i] - 2.0 * m);
    }
  }
  return plan;
}

std::vector<std::pair<double, double>> social_cost_ratio_curve(const SystemParams& params,
                                                               const std::vector<double>& grid,
                                                               const SolveOptions& opts) {
  const double opt = social_optimum(params, opts).social;
  std::vector<std::pair<double, double>> out;
  out.reserve(grid.size());
  for (double d : grid) {
    const auto plan = cooperation_profile(params, d, opts);
    out.emplace_back(d, social_cost(plan.profile, params) / opt);
  }
  return out;
}

}  // namespace aoigame

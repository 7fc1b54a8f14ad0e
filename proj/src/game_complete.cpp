#include "aoigame/game_complete.hpp"

#include <cmath>

#include "aoigame/errors.hpp"

namespace aoigame {

double best_response(double rival_total, double c, double mu) {
  if (!(rival_total >= 0.0) || !std::isfinite(rival_total)) {
    throw DomainError("rival total must be nonnegative");
  }
  if (!(c > 0.0)) throw DomainError("unit cost must be positive");
  if (!(mu > 0.0)) throw DomainError("bandwidth mu must be positive");
  return std::sqrt((1.0 + rival_total / mu) / c);
}

namespace {

std::vector<double> initial_rates(const SystemParams& p) {
  std::vector<double> x(p.n());
  for (std::size_t i = 0; i < p.n(); ++i) x[i] = 1.0 / std::sqrt(p.cost(i));
  return x;
}

double sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

EquilibriumResult finish(const SystemParams& params, const FixedPointResult& fp,
                         std::vector<double> residuals) {
  EquilibriumResult r;
  r.profile = RateProfile(fp.x);
  r.per_platform_costs.resize(params.n());
  for (std::size_t i = 0; i < params.n(); ++i) {
    r.per_platform_costs[i] = platform_cost(i, r.profile, params);
    r.social += r.per_platform_costs[i];
  }
  r.residuals = std::move(residuals);
  r.iterations = fp.iterations;
  return r;
}

}  // namespace

EquilibriumResult nash_equilibrium(const SystemParams& params, const SolveOptions& opts) {
  const double mu = params.mu();
  auto g = [&](const std::vector<double>& x) {
    const double s = sum(x);
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = best_response(s - x[i], params.cost(i), mu);
    return y;
  };
  const auto fp = solve_fixed_point(g, initial_rates(params), opts);
  const double s = sum(fp.x);
  std::vector<double> res(params.n());
  for (std::size_t i = 0; i < params.n(); ++i) {
    res[i] = std::fabs(params.cost(i) * fp.x[i] * fp.x[i] - (1.0 + (s - fp.x[i]) / mu));
  }
  return finish(params, fp, std::move(res));
}

std::vector<double> social_cost_gradient(const RateProfile& profile, const SystemParams& params) {
  const double mu = params.mu();
  double inv = 0.0;
  for (double x : profile.rates()) inv += 1.0 / x;
  const double s = profile.total();
  std::vector<double> g(profile.n());
  for (std::size_t i = 0; i < profile.n(); ++i) {
    const double l = profile[i];
    g[i] = params.cost(i) - (1.0 + (s - l) / mu) / (l * l) + (inv - 1.0 / l) / mu;
  }
  return g;
}

EquilibriumResult social_optimum(const SystemParams& params, const SolveOptions& opts) {
  const double mu = params.mu();
  auto g = [&](const std::vector<double>& x) {
    const double s = sum(x);
    double inv = 0.0;
    for (double v : x) inv += 1.0 / v;
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      y[i] = std::sqrt((1.0 + (s - x[i]) / mu) / (params.cost(i) + (inv - 1.0 / x[i]) / mu));
    }
    return y;
  };
  const auto fp = solve_fixed_point(g, initial_rates(params), opts);
  auto grad = social_cost_gradient(RateProfile(fp.x), params);
  for (auto& v : grad) v = std::fabs(v);
  return finish(params, fp, std::move(grad));
}

PoaResult poa_ratio(const SystemParams& params, const SolveOptions& opts) {
  try {
    const auto ne = nash_equilibrium(params, opts);
    const auto so = social_optimum(params, opts);
    return {ne.social / so.social};
  } catch (const DivergenceError&) {
    return {std::nullopt};
  }
}

StaticsReport comparative_statics_check(const SystemParams& params, std::size_t i,
                                        Perturbation kind, std::size_t rival, double step,
                                        const SolveOptions& opts) {
  if (i >= params.n()) throw DomainError("platform index out of range");
  if (!(step > 0.0)) throw DomainError("perturbation step must be positive");
  if (kind == Perturbation::rival_cost || kind == Perturbation::rival_rate) {
    if (rival >= params.n() || rival == i) throw DomainError("rival index must differ from i");
  }
  StaticsReport rep{kind, i};
  const auto base = nash_equilibrium(params, opts);
  rep.base_rate = base.profile[i];
  switch (kind) {
    case Perturbation::own_cost:
      rep.perturbed_rate =
          nash_equilibrium(params.with_cost(i, params.cost(i) + step), opts).profile[i];
      rep.expected_sign = -1;
      break;
    case Perturbation::rival_cost:
      rep.perturbed_rate =
          nash_equilibrium(params.with_cost(rival, params.cost(rival) + step), opts).profile[i];
      rep.expected_sign = -1;
      break;
    case Perturbation::mu:
      rep.perturbed_rate = nash_equilibrium(params.with_mu(params.mu() + step), opts).profile[i];
      rep.expected_sign = -1;
      break;
    case Perturbation::rival_rate: {
      const double r = base.profile.rival_total(i);
      rep.base_rate = best_response(r, params.cost(i), params.mu());
      rep.perturbed_rate = best_response(r + step, params.cost(i), params.mu());
      rep.expected_sign = 1;
      break;
    }
  }
  const double d = rep.perturbed_rate - rep.base_rate;
  rep.observed_sign = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
  return rep;
}

}  // namespace aoigame

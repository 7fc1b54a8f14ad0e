#include "aoigame/game_bayesian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "aoigame/errors.hpp"

namespace aoigame {

namespace {

double sum_from(const std::vector<double>& x, std::size_t first) {
  return std::accumulate(x.begin() + static_cast<std::ptrdiff_t>(first), x.end(), 0.0);
}

BayesianRateProfile unpack(const std::vector<double>& x) {
  return BayesianRateProfile(x[0], x[1], std::vector<double>(x.begin() + 2, x.end()));
}

std::vector<double> initial(const BayesianSpec& spec) {
  std::vector<double> x{1.0 / std::sqrt(spec.c_high()), 1.0 / std::sqrt(spec.c_low())};
  for (double c : spec.incumbent_costs()) x.push_back(1.0 / std::sqrt(c));
  return x;
}

BayesianEquilibriumResult finish(const BayesianSpec& spec, const FixedPointResult& fp,
                                 std::vector<double> residuals) {
  BayesianEquilibriumResult r;
  r.profile = unpack(fp.x);
  r.platform1_high = bayesian_platform1_cost(Realization::high, r.profile, spec);
  r.platform1_low = bayesian_platform1_cost(Realization::low, r.profile, spec);
  const double p = spec.p_high();
  r.platform1_expected = p * r.platform1_high + (1.0 - p) * r.platform1_low;
  r.social = r.platform1_expected;
  for (std::size_t i = 1; i < spec.n(); ++i) {
    r.incumbent_costs.push_back(bayesian_incumbent_cost(i, r.profile, spec));
    r.social += r.incumbent_costs.back();
  }
  r.residuals = std::move(residuals);
  r.iterations = fp.iterations;
  return r;
}

}  // namespace

BayesianEquilibriumResult bayesian_nash(const BayesianSpec& spec, const SolveOptions& opts) {
  const double mu = spec.mu();
  const double p = spec.p_high();
  const auto& cs = spec.incumbent_costs();
  auto g = [&](const std::vector<double>& x) {
    const double s = sum_from(x, 2);
    const double mean1 = p * x[0] + (1.0 - p) * x[1];
    std::vector<double> y(x.size());
    y[0] = std::sqrt((1.0 + s / mu) / spec.c_high());
    y[1] = std::sqrt((1.0 + s / mu) / spec.c_low());
    for (std::size_t k = 2; k < x.size(); ++k) {
      y[k] = std::sqrt((1.0 + (mean1 + s - x[k]) / mu) / cs[k - 2]);
    }
    return y;
  };
  const auto fp = solve_fixed_point(g, initial(spec), opts);
  const auto& x = fp.x;
  const double s = sum_from(x, 2);
  const double mean1 = p * x[0] + (1.0 - p) * x[1];
  std::vector<double> res(x.size());
  res[0] = std::fabs(spec.c_high() * x[0] * x[0] - (1.0 + s / mu));
  res[1] = std::fabs(spec.c_low() * x[1] * x[1] - (1.0 + s / mu));
  for (std::size_t k = 2; k < x.size(); ++k) {
    res[k] = std::fabs(cs[k - 2] * x[k] * x[k] - (1.0 + (mean1 + s - x[k]) / mu));
  }
  return finish(spec, fp, std::move(res));
}

std::vector<double> bayesian_social_gradient(const BayesianRateProfile& profile,
                                             const BayesianSpec& spec) {
  const double mu = spec.mu();
  const double p = spec.p_high();
  const auto& x = profile.incumbent_rates;
  const double s = profile.incumbent_total();
  double inv = 0.0;
  for (double v : x) inv += 1.0 / v;
  std::vector<double> g(profile.n() + 1);
  // Per realization r the social cost is sum_j [1/l_j + S_r/(mu l_j)] + costs.
  for (int k = 0; k < 2; ++k) {
    const double w = k == 0 ? p : 1.0 - p;
    const double l1 = k == 0 ? profile.rate1_high : profile.rate1_low;
    const double c1 = k == 0 ? spec.c_high() : spec.c_low();
    g[static_cast<std::size_t>(k)] = w * (c1 - (1.0 + s / mu) / (l1 * l1) + inv / mu);
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    double gi = spec.incumbent_costs()[i] + (inv - 1.0 / x[i]) / mu;
    for (int k = 0; k < 2; ++k) {
      const double w = k == 0 ? p : 1.0 - p;
      const double l1 = k == 0 ? profile.rate1_high : profile.rate1_low;
      gi += w * (1.0 / (l1 * mu) - (1.0 + (l1 + s - x[i]) / mu) / (x[i] * x[i]));
    }
    g[i + 2] = gi;
  }
  return g;
}

BayesianEquilibriumResult bayesian_social_optimum(const BayesianSpec& spec,
                                                  const SolveOptions& opts) {
  const double mu = spec.mu();
  const double p = spec.p_high();
  const auto& cs = spec.incumbent_costs();
  auto g = [&](const std::vector<double>& x) {
    const double s = sum_from(x, 2);
    double inv = 0.0;
    for (std::size_t k = 2; k < x.size(); ++k) inv += 1.0 / x[k];
    std::vector<double> y(x.size());
    y[0] = std::sqrt((1.0 + s / mu) / (spec.c_high() + inv / mu));
    y[1] = std::sqrt((1.0 + s / mu) / (spec.c_low() + inv / mu));
    for (std::size_t k = 2; k < x.size(); ++k) {
      const double kh = 1.0 + (x[0] + s - x[k]) / mu;
      const double kl = 1.0 + (x[1] + s - x[k]) / mu;
      const double den =
          cs[k - 2] + p / (x[0] * mu) + (1.0 - p) / (x[1] * mu) + (inv - 1.0 / x[k]) / mu;
      y[k] = std::sqrt((p * kh + (1.0 - p) * kl) / den);
    }
    return y;
  };
  const auto fp = solve_fixed_point(g, initial(spec), opts);
  auto res = bayesian_social_gradient(unpack(fp.x), spec);
  // A zero-probability branch has a vanishing gradient; report its own
  // stationarity condition instead.
  const auto bare = g(fp.x);
  for (std::size_t k = 0; k < res.size(); ++k) {
    res[k] = std::max(std::fabs(res[k]), k < 2 ? std::fabs(bare[k] - fp.x[k]) : 0.0);
  }
  return finish(spec, fp, std::move(res));
}

std::pair<EquilibriumResult, EquilibriumResult> per_realization_benchmark(
    const BayesianSpec& spec, const SolveOptions& opts) {
  return {nash_equilibrium(spec.realized(Realization::high), opts),
          nash_equilibrium(spec.realized(Realization::low), opts)};
}

namespace {

struct FourCosts {
  double ih, il, ch, cl;
};

FourCosts four_costs(const BayesianSpec& spec, const SolveOptions& opts) {
  const auto inc = bayesian_nash(spec, opts);
  const auto [hi, lo] = per_realization_benchmark(spec, opts);
  return {inc.platform1_high, inc.platform1_low, hi.per_platform_costs[0],
          lo.per_platform_costs[0]};
}

// Largest grid point at or below which the condition first fails, scanning
// downward from p = 1, then refined between the failing and holding points.
double scan_threshold(const std::function<double(double)>& h, const SolveOptions& opts,
                      bool& interior) {
  constexpr int kGrid = 200;
  constexpr double kTol = 1e-9;
  interior = false;
  double prev = 1.0;
  for (int k = kGrid - 1; k >= 0; --k) {
    const double p = static_cast<double>(k) / kGrid;
    if (h(p) < -kTol) {
      interior = true;
      SolveOptions o = opts;
      o.abs_tol = 1e-14;
      return solve_scalar_bracketed(h, p, prev, o);
    }
    prev = p;
  }
  return 0.0;
}

}  // namespace

double info_advantage_ratio(const BayesianSpec& spec, double p, const SolveOptions& opts) {
  const auto f = four_costs(spec.with_p_high(p), opts);
  const double num = f.cl - f.il;
  const double den = num + f.ih - f.ch;
  if (den == 0.0) return 0.0;
  return num / den;
}

InfoAdvantageRow info_advantage_at(const BayesianSpec& spec, double p, const SolveOptions& opts) {
  const auto f = four_costs(spec.with_p_high(p), opts);
  InfoAdvantageRow row;
  row.p_high = p;
  row.incomplete_avg = p * f.ih + (1.0 - p) * f.il;
  row.complete_avg = p * f.ch + (1.0 - p) * f.cl;
  const double num = f.cl - f.il;
  const double den = num + f.ih - f.ch;
  row.ratio_gap = den == 0.0 ? p : p - num / den;
  return row;
}

std::vector<InfoAdvantageRow> info_advantage_sweep(const BayesianSpec& spec, double step,
                                                   const SolveOptions& opts) {
  if (!(step > 0.0 && step <= 1.0)) throw DomainError("sweep step must lie in (0, 1]");
  const int count = static_cast<int>(std::llround(1.0 / step));
  std::vector<InfoAdvantageRow> rows;
  for (int k = 0; k <= count; ++k) {
    rows.push_back(info_advantage_at(spec, std::min(1.0, k * step), opts));
  }
  return rows;
}

double sweep_threshold(const std::vector<InfoAdvantageRow>& rows) {
  double t = rows.empty() ? 1.0 : rows.back().p_high;
  for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
    if (it->difference() < -1e-9) break;
    t = it->p_high;
  }
  return t;
}

InfoAdvantageReport info_advantage_report(const BayesianSpec& spec, const SolveOptions& opts) {
  InfoAdvantageReport rep;
  const auto f = four_costs(spec, opts);
  const double p = spec.p_high();
  rep.incomplete_high = f.ih;
  rep.complete_high = f.ch;
  rep.incomplete_low = f.il;
  rep.complete_low = f.cl;
  rep.incomplete_avg = p * f.ih + (1.0 - p) * f.il;
  rep.complete_avg = p * f.ch + (1.0 - p) * f.cl;
  rep.high_not_better = f.ih >= f.ch - 1e-9;

  bool interior_ratio = false, interior_direct = false;
  // p >= R(p) is the same inequality as pi^I >= pi^C once the denominator is
  // positive, which holds because the high realization is never better off.
  rep.threshold_ratio = scan_threshold(
      [&](double q) { return info_advantage_at(spec, q, opts).ratio_gap; }, opts, interior_ratio);
  rep.threshold_direct = scan_threshold(
      [&](double q) { return info_advantage_at(spec, q, opts).difference(); }, opts,
      interior_direct);
  rep.interior = interior_ratio || interior_direct;
  if (std::fabs(rep.threshold_ratio - rep.threshold_direct) > 1e-6) {
    throw ConsistencyError("p_H threshold from the ratio form disagrees with the direct cost "
                           "difference");
  }
  return rep;
}

PoaResult bayesian_poa_ratio(const BayesianSpec& spec, const SolveOptions& opts) {
  try {
    const auto ne = bayesian_nash(spec, opts);
    const auto so = bayesian_social_optimum(spec, opts);
    return {ne.social / so.social};
  } catch (const DivergenceError&) {
    return {std::nullopt};
  }
}

}  // namespace aoigame

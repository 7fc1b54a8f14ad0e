#include "aoigame/mech_bayesian.hpp"

#include <algorithm>
#include <cmath>

#include "aoigame/errors.hpp"

namespace aoigame {

namespace {

void require_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0, 1)");
}

BayesianRateProfile as_bayesian(const RateProfile& x) {
  return BayesianRateProfile(x[0], x[0], std::vector<double>(x.rates().begin() + 1, x.rates().end()));
}

// sqrt(K*) (p sqrt(c_H) + (1 - p) sqrt(c_L)): half of platform 0's expected
// punishment cost, without the 1/mu term.
double punish_half(const BayesianSpec& spec, const BayesianRateProfile& nash) {
  const double k = 1.0 + nash.incumbent_total() / spec.mu();
  const double p = spec.p_high();
  return std::sqrt(k) * (p * std::sqrt(spec.c_high()) + (1.0 - p) * std::sqrt(spec.c_low()));
}

double incumbent_punish_k(std::size_t i, const BayesianSpec& spec, const BayesianRateProfile& nash) {
  const double p = spec.p_high();
  const double own = nash.incumbent_rates[i - 1];
  return 1.0 + (p * nash.rate1_high + (1.0 - p) * nash.rate1_low + nash.incumbent_total() - own) /
                   spec.mu();
}

struct Root {
  double smaller = 0.0;
  double disc = 0.0;
};

// Smaller root of C x^2 - 2 M x + K = 0.
Root smaller_root(double cc, double m, double k) {
  const double disc = m * m - cc * k;
  return {(m - std::sqrt(std::max(disc, 0.0))) / cc, disc / (m * m)};
}

}  // namespace

double ApproxThresholds::max_all() const {
  double m = platform1_max();
  for (double t : incumbents) m = std::max(m, t);
  return m;
}

EquilibriumResult approx_social_optimum(const BayesianSpec& spec, const SolveOptions& opts) {
  return social_optimum(spec.with_mean_cost(), opts);
}

double approx_platform1_cost(Realization r, const RateProfile& profile, const BayesianSpec& spec) {
  return cost_given_rivals(profile[0], profile.rival_total(0), spec.cost_of(r), spec.mu());
}

double approx_incumbent_cost(std::size_t i, const RateProfile& profile, const BayesianSpec& spec) {
  return bayesian_incumbent_cost(i, as_bayesian(profile), spec);
}

ApproxThresholds approx_thresholds(const BayesianSpec& spec, const SolveOptions& opts) {
  const double mu = spec.mu();
  const double p = spec.p_high();
  const auto hat = approx_social_optimum(spec, opts).profile;
  const auto nash = bayesian_nash(spec, opts).profile;
  const double chat = spec.mean_cost();
  const double l1 = hat[0];
  const double khat = 1.0 + hat.rival_total(0) / mu;
  const double half = punish_half(spec, nash);

  ApproxThresholds t;
  for (Realization r : {Realization::low, Realization::high}) {
    // A realization that never occurs never needs deterring.
    if (spec.probability_of(r) == 0.0) continue;
    const double c = spec.cost_of(r);
    const double num = c * l1 - 2.0 * std::sqrt(khat * c) + khat / l1;
    const double den = (c - chat) * l1 + 2.0 * half - 2.0 * std::sqrt(khat * c);
    const double closed = den == 0.0 ? 0.0 : num / den;

    const double b = std::sqrt(khat / c);
    const double dev = cost_given_rivals(b, hat.rival_total(0), c, mu);
    const double coop = approx_platform1_cost(r, hat, spec);
    const double coop_future = cost_given_rivals(l1, hat.rival_total(0), chat, mu);
    const double pun = p * bayesian_platform1_cost(Realization::high, nash, spec) +
                       (1.0 - p) * bayesian_platform1_cost(Realization::low, nash, spec);
    const double gap = coop - dev;
    const double diff_form = gap / (gap + pun - coop_future);
    if (std::fabs(closed - diff_form) > 1e-6) {
      throw ConsistencyError("platform 0 threshold forms disagree (" + to_string(r) + ")");
    }
    (r == Realization::low ? t.platform1_low : t.platform1_high) = closed;
  }

  double inv = 0.0;
  for (double x : hat.rates()) inv += 1.0 / x;
  for (std::size_t i = 1; i < spec.n(); ++i) {
    const double c = spec.incumbent_costs()[i - 1];
    const double e = (inv - 1.0 / hat[i]) / mu;
    const double khat_i = 1.0 + hat.rival_total(i) / mu;
    const double kstar = incumbent_punish_k(i, spec, nash);
    const double closed = (std::sqrt((c + e) / c) + std::sqrt(c / (c + e)) - 2.0) /
                          (2.0 * std::sqrt(kstar / khat_i) - 2.0);

    const double b = std::sqrt(khat_i / c);
    const double dev = cost_given_rivals(b, hat.rival_total(i), c, mu);
    const double coop = approx_incumbent_cost(i, hat, spec);
    const double pun = bayesian_incumbent_cost(i, nash, spec);
    const double diff_form = (coop - dev) / (pun - dev);
    if (std::fabs(closed - diff_form) > 1e-6) {
      throw ConsistencyError("incumbent threshold forms disagree for platform " + std::to_string(i));
    }
    t.incumbents.push_back(closed);
  }
  return t;
}

CheatReport cheat_incentive(const BayesianSpec& spec, const SolveOptions& opts) {
  CheatReport rep;
  rep.applicable = spec.p_high() > 0.0 && spec.p_high() < 1.0;
  if (!rep.applicable) return rep;
  const auto opt = bayesian_social_optimum(spec, opts).profile;
  const double mu = spec.mu();
  double inv = 0.0;
  for (double x : opt.incumbent_rates) inv += 1.0 / x;
  rep.s = inv / mu;
  const double rivals = opt.incumbent_total();
  rep.truthful_cost = cost_given_rivals(opt.rate1_high, rivals, spec.c_high(), mu);
  rep.cheat_cost = cost_given_rivals(opt.rate1_low, rivals, spec.c_high(), mu);
  rep.profitable = rep.cheat_cost < rep.truthful_cost;
  rep.condition_lhs = std::sqrt(spec.c_high() + rep.s) * std::sqrt(spec.c_low() + rep.s);
  rep.condition_rhs = spec.c_high();
  rep.condition_holds = rep.condition_lhs <= rep.condition_rhs;
  return rep;
}

ApproxCooperationPlan approx_cooperation_profile(const BayesianSpec& spec, double delta,
                                                 const SolveOptions& opts) {
  require_delta(delta);
  const double mu = spec.mu();
  const std::size_t n = spec.n();
  const double chat = spec.mean_cost();

  ApproxCooperationPlan plan;
  plan.delta = delta;
  plan.reference_hat = approx_social_optimum(spec, opts).profile;
  plan.reference_nash = bayesian_nash(spec, opts).profile;
  plan.thresholds = approx_thresholds(spec, opts);

  std::vector<double> all{plan.thresholds.platform1_max()};
  all.insert(all.end(), plan.thresholds.incumbents.begin(), plan.thresholds.incumbents.end());
  std::size_t above = 0;
  for (double t : all) {
    if (delta < t) ++above;
  }
  plan.regime = above == 0    ? Regime{Regime::Kind::large, 0}
                : above == n  ? Regime{Regime::Kind::small, n}
                              : Regime{Regime::Kind::medium, above};

  const double half = punish_half(spec, plan.reference_nash);
  std::vector<double> kstar(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) kstar[i] = incumbent_punish_k(i, spec, plan.reference_nash);
  const auto& ref = plan.reference_hat;

  struct Eval {
    std::vector<double> y;
    double root_low, root_high, worst;
  };
  auto eval = [&](const std::vector<double>& x) {
    Eval e{std::vector<double>(n), 0.0, 0.0, 0.0};
    double s = 0.0;
    for (double v : x) s += v;
    const double k = 1.0 + (s - x[0]) / mu;
    for (Realization r : {Realization::low, Realization::high}) {
      // A realization that never occurs imposes no constraint.
      if (spec.probability_of(r) == 0.0) continue;
      const double c = spec.cost_of(r);
      const double cc = delta * chat + (1.0 - delta) * c;
      const double m = delta * half + (1.0 - delta) * std::sqrt(k * c);
      const auto root = smaller_root(cc, m, k);
      e.worst = std::min(e.worst, root.disc);
      (r == Realization::low ? e.root_low : e.root_high) = root.smaller;
    }
    e.y[0] = std::max({ref[0], e.root_low, e.root_high});
    for (std::size_t i = 1; i < n; ++i) {
      const double c = spec.incumbent_costs()[i - 1];
      const double ki = 1.0 + (s - x[i]) / mu;
      const double m = std::sqrt(c) * (delta * std::sqrt(kstar[i]) + (1.0 - delta) * std::sqrt(ki));
      const auto root = smaller_root(c, m, ki);
      e.worst = std::min(e.worst, root.disc);
      e.y[i] = std::max(ref[i], root.smaller);
    }
    return e;
  };

  std::vector<double> x = ref.rates();
  if (plan.regime.kind != Regime::Kind::large) {
    // Each coordinate's map ignores its own rate, so a Gauss-Seidel sweep is
    // exact per coordinate. The map is order-preserving and starts from its
    // lower bound, so the sweeps increase monotonically to the least fixed point.
    int it = 0;
    for (;; ++it) {
      if (it >= opts.max_iter) throw ConvergenceError("approximate cooperation profile did not converge");
      double change = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double y = eval(x).y[i];
        change = std::max(change, std::fabs(y - x[i]));
        x[i] = y;
      }
      double scale = 0.0;
      for (double v : x) scale = std::max(scale, std::fabs(v));
      if (change <= opts.abs_tol + opts.rel_tol * scale) break;
    }
  }
  plan.profile = RateProfile(x);
  const auto e = eval(x);
  plan.root_low = e.root_low;
  plan.root_high = e.root_high;
  plan.platform1_branch = e.root_high > e.root_low ? Realization::high : Realization::low;
  plan.branch_tie = std::fabs(e.root_high - e.root_low) <= 1e-12 * std::max(1.0, e.root_low);
  plan.worst_discriminant = e.worst;
  plan.feasible = e.worst >= -1e-12;
  plan.binding.assign(n, false);
  plan.residuals.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    plan.binding[i] = x[i] > ref[i] * (1.0 + 1e-9);
    plan.residuals[i] = std::fabs(e.y[i] - x[i]);
  }
  return plan;
}

std::vector<ApproxRatioRow> approximation_ratio(const std::vector<BayesianSpec>& family,
                                                const SolveOptions& opts) {
  std::vector<ApproxRatioRow> rows;
  for (const auto& spec : family) {
    const auto opt = bayesian_social_optimum(spec, opts);
    const auto hat = approx_social_optimum(spec, opts).profile;
    const auto ne = bayesian_nash(spec, opts);
    rows.push_back({spec.n(), bayesian_social_cost(as_bayesian(hat), spec) / opt.social,
                    ne.social / opt.social});
  }
  return rows;
}

}  // namespace aoigame

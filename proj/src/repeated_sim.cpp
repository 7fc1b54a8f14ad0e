#include "aoigame/repeated_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "aoigame/errors.hpp"
#include "aoigame/game_bayesian.hpp"
#include "aoigame/queue_sim.hpp"
#include "aoigame/rng.hpp"

namespace aoigame {

bool is_bayesian(const GameEnvironment& env) { return std::holds_alternative<BayesianSpec>(env); }

std::size_t platform_count(const GameEnvironment& env) {
  return std::visit([](const auto& e) { return e.n(); }, env);
}

namespace {

double env_mu(const GameEnvironment& env) {
  return std::visit([](const auto& e) { return e.mu(); }, env);
}

double unit_cost(const GameEnvironment& env, std::size_t i, Realization r) {
  if (const auto* p = std::get_if<SystemParams>(&env)) return p->cost(i);
  const auto& s = std::get<BayesianSpec>(env);
  return i == 0 ? s.cost_of(r) : s.incumbent_costs()[i - 1];
}

double total(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace

MechanismProfiles MechanismProfiles::from_plan(const CooperationPlan& plan) {
  MechanismProfiles m;
  m.coop_high = m.coop_low = plan.profile.rates();
  m.punish_high = m.punish_low = plan.reference_nash.rates();
  return m;
}

MechanismProfiles MechanismProfiles::from_plan(const ApproxCooperationPlan& plan) {
  MechanismProfiles m;
  m.coop_high = m.coop_low = plan.profile.rates();
  m.punish_high = plan.reference_nash.realized(Realization::high).rates();
  m.punish_low = plan.reference_nash.realized(Realization::low).rates();
  return m;
}

MechanismProfiles MechanismProfiles::per_realization(const BayesianSpec& spec,
                                                     const SolveOptions& opts) {
  const auto opt = bayesian_social_optimum(spec, opts).profile;
  const auto ne = bayesian_nash(spec, opts).profile;
  MechanismProfiles m;
  m.coop_high = opt.realized(Realization::high).rates();
  m.coop_low = opt.realized(Realization::low).rates();
  m.punish_high = ne.realized(Realization::high).rates();
  m.punish_low = ne.realized(Realization::low).rates();
  return m;
}

double infer_rival_rate(double observed_aoi, double own_rate, double mu) {
  require_positive_rate(own_rate, "own rate");
  require_positive_rate(mu, "bandwidth mu");
  const double floor = 1.0 / own_rate + 1.0 / mu;
  if (!std::isfinite(observed_aoi) || observed_aoi < floor * (1.0 - 1e-12)) {
    throw InconsistencyError("observed AoI " + std::to_string(observed_aoi) +
                             " is below the single-platform floor " + std::to_string(floor));
  }
  return std::max(0.0, (observed_aoi - 1.0 / own_rate) * own_rate * mu - own_rate);
}

SimTrace run(const GameEnvironment& env, const MechanismProfiles& plan,
             const std::vector<Strategy>& strategies, const SimConfig& config) {
  const std::size_t n = platform_count(env);
  const double mu = env_mu(env);
  const bool bayes = is_bayesian(env);
  if (config.rounds < 1) throw DomainError("rounds must be at least 1");
  if (!(config.delta >= 0.0 && config.delta < 1.0)) throw DomainError("delta must lie in [0, 1)");
  for (const auto* v : {&plan.coop_high, &plan.coop_low, &plan.punish_high, &plan.punish_low}) {
    if (v->size() != n) throw ConsistencyError("plan size does not match the environment");
  }
  std::vector<bool> seen(n, false);
  for (const auto& s : strategies) {
    if (s.platform >= n) throw DomainError("strategy platform out of range");
    if (seen[s.platform]) throw DomainError("at most one strategy per platform");
    seen[s.platform] = true;
    if (s.round < 1) throw DomainError("strategy round must be at least 1");
    if (s.rate && !(*s.rate > 0.0)) throw DomainError("deviation rate must be positive");
    if (s.kind == Strategy::Kind::bayesian_cheat && (!bayes || s.platform != 0)) {
      throw DomainError("the cheat strategy applies to platform 0 under incomplete information");
    }
  }

  const double p_high = bayes ? std::get<BayesianSpec>(env).p_high() : 1.0;
  Rng rng(config.seed);

  // Rates played in round t given the state; deviations only fire at their round.
  auto play = [&](Realization r, bool punishing, int t) {
    std::vector<double> rates = punishing ? plan.punish(r) : plan.coop(r);
    if (punishing) return rates;
    for (const auto& s : strategies) {
      if (s.kind == Strategy::Kind::one_shot_deviate && s.round == t) {
        const double rivals = total(rates) - rates[s.platform];
        rates[s.platform] =
            s.rate ? *s.rate : std::sqrt((1.0 + rivals / mu) / unit_cost(env, s.platform, r));
      } else if (s.kind == Strategy::Kind::bayesian_cheat && r == Realization::high) {
        rates[0] = plan.coop_low[0];
      }
    }
    return rates;
  };
  auto costs_of = [&](const std::vector<double>& rates, Realization r) {
    const RateProfile prof(rates);
    std::vector<double> a(n), c(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = aoi(i, prof, mu);
      c[i] = a[i] + unit_cost(env, i, r) * rates[i];
    }
    return std::pair{a, c};
  };

  SimTrace tr;
  tr.delta = config.delta;
  tr.seed = config.seed;
  tr.rng_algorithm = Rng::kAlgorithm;
  tr.bayesian = bayes;
  tr.discounted.assign(n, 0.0);
  tr.average.assign(n, 0.0);
  bool punishing = false;
  double weight = 1.0;
  for (int t = 1; t <= config.rounds; ++t) {
    RoundRecord rec;
    rec.round = t;
    Realization r = Realization::high;
    if (bayes) {
      r = rng.uniform() < p_high ? Realization::high : Realization::low;
      rec.realization = r;
    }
    rec.punishing = punishing;
    rec.rates = play(r, punishing, t);
    auto [a, c] = costs_of(rec.rates, r);
    if (config.noisy_events > 0) {
      QueueConfig qc;
      qc.rates = rec.rates;
      qc.mu = mu;
      qc.events = config.noisy_events;
      qc.seed = Rng::derive(config.seed, static_cast<std::uint64_t>(t));
      const auto est = simulate(qc);
      for (std::size_t i = 0; i < n; ++i) a[i] = est.platforms[i].estimate;
    }
    rec.aoi = a;
    rec.cost = c;

    if (!punishing) {
      for (std::size_t j = 0; j < n && !rec.detected; ++j) {
        double inferred;
        try {
          inferred = infer_rival_rate(a[j], rec.rates[j], mu);
        } catch (const InconsistencyError&) {
          if (config.noisy_events == 0) throw;
          inferred = 0.0;
        }
        std::vector<double> allowed;
        if (!bayes || j == 0) {
          const auto& base = plan.coop(r);
          allowed.push_back(total(base) - base[j]);
        } else {
          allowed.push_back(total(plan.coop_high) - plan.coop_high[j]);
          allowed.push_back(total(plan.coop_low) - plan.coop_low[j]);
        }
        bool hit = true;
        for (double e : allowed) {
          const double tol = config.noisy_events > 0 ? config.noisy_band * e : config.detection_tol;
          // Complete information: only over-sampling is treated as a deviation.
          const bool outside = bayes ? std::fabs(inferred - e) > tol : inferred - e > tol;
          if (!outside) hit = false;
        }
        rec.detected = hit;
      }
      if (rec.detected) {
        tr.trigger_round = t;
        punishing = true;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      tr.discounted[i] += weight * c[i];
      tr.average[i] += c[i] / config.rounds;
    }
    weight *= config.delta;
    tr.rounds.push_back(std::move(rec));
  }

  // Closed-form tail for the state reached after round T.
  tr.extrapolated = tr.discounted;
  const double tail = weight / (1.0 - config.delta);
  for (Realization r : {Realization::high, Realization::low}) {
    const double pr = r == Realization::high ? p_high : 1.0 - p_high;
    if (pr == 0.0) continue;
    const auto c = costs_of(play(r, punishing, config.rounds + 1), r).second;
    for (std::size_t i = 0; i < n; ++i) tr.extrapolated[i] += tail * pr * c[i];
  }
  return tr;
}

namespace {

std::vector<double> log_grid(double center, const DeviationGrid& g) {
  std::vector<double> xs;
  if (g.points < 2 || !(g.spread > 1.0)) return xs;
  const double lo = std::log(center / g.spread), hi = std::log(center * g.spread);
  for (int k = 0; k < g.points; ++k) {
    xs.push_back(std::exp(lo + (hi - lo) * k / (g.points - 1)));
  }
  return xs;
}

void require_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0, 1)");
}

}  // namespace

Certificate certify_no_deviation(const CooperationPlan& plan, const SystemParams& params,
                                 double delta, const DeviationGrid& grid, double detection_tol) {
  require_delta(delta);
  Certificate cert;
  for (std::size_t i = 0; i < params.n(); ++i) {
    CertificateEntry e;
    e.platform = i;
    const double coop = plan.profile[i];
    e.best_response_margin =
        deviation_value(i, plan.profile, params, delta, plan.reference_nash).margin();
    e.worst_margin = e.best_response_margin;
    e.worst_rate = best_response(plan.profile.rival_total(i), params.cost(i), params.mu());
    for (double x : log_grid(coop, grid)) {
      if (std::fabs(x - coop) <= detection_tol) continue;
      const double m =
          deviation_value_at(i, x, plan.profile, params, delta, plan.reference_nash).margin();
      if (m < e.worst_margin) {
        e.worst_margin = m;
        e.worst_rate = x;
      }
    }
    cert.entries.push_back(e);
  }
  cert.worst_margin = cert.entries.empty() ? 0.0 : cert.entries.front().worst_margin;
  for (const auto& e : cert.entries) cert.worst_margin = std::min(cert.worst_margin, e.worst_margin);
  return cert;
}

Certificate certify_no_deviation(const ApproxCooperationPlan& plan, const BayesianSpec& spec,
                                 double delta, const DeviationGrid& grid, double detection_tol) {
  require_delta(delta);
  const double mu = spec.mu();
  const double w = delta / (1.0 - delta);
  const double p = spec.p_high();
  const auto& x = plan.profile;
  const auto& ne = plan.reference_nash;
  Certificate cert;

  // Platform 0, one entry per realization. Future costs are expectations over
  // the next realizations.
  const double r0 = x.rival_total(0);
  const double coop_future = cost_given_rivals(x[0], r0, spec.mean_cost(), mu);
  const double pun_future = p * bayesian_platform1_cost(Realization::high, ne, spec) +
                            (1.0 - p) * bayesian_platform1_cost(Realization::low, ne, spec);
  for (Realization r : {Realization::low, Realization::high}) {
    const double c = spec.cost_of(r);
    const double comply = cost_given_rivals(x[0], r0, c, mu) + w * coop_future;
    auto margin = [&](double dev) {
      const bool detected = std::fabs(dev - x[0]) > detection_tol;
      return cost_given_rivals(dev, r0, c, mu) + w * (detected ? pun_future : coop_future) - comply;
    };
    CertificateEntry e;
    e.platform = 0;
    e.realization = r;
    e.worst_rate = std::sqrt((1.0 + r0 / mu) / c);
    e.best_response_margin = margin(e.worst_rate);
    e.worst_margin = e.best_response_margin;
    for (double dev : log_grid(x[0], grid)) {
      if (std::fabs(dev - x[0]) <= detection_tol) continue;
      const double m = margin(dev);
      if (m < e.worst_margin) {
        e.worst_margin = m;
        e.worst_rate = dev;
      }
    }
    cert.entries.push_back(e);
  }

  for (std::size_t i = 1; i < spec.n(); ++i) {
    const double c = spec.incumbent_costs()[i - 1];
    const double ri = x.rival_total(i);
    const double coop = approx_incumbent_cost(i, x, spec);
    const double pun = bayesian_incumbent_cost(i, ne, spec);
    const double comply = coop / (1.0 - delta);
    auto margin = [&](double dev) {
      const bool detected = std::fabs(dev - x[i]) > detection_tol;
      return cost_given_rivals(dev, ri, c, mu) + w * (detected ? pun : coop) - comply;
    };
    CertificateEntry e;
    e.platform = i;
    e.worst_rate = std::sqrt((1.0 + ri / mu) / c);
    e.best_response_margin = margin(e.worst_rate);
    e.worst_margin = e.best_response_margin;
    for (double dev : log_grid(x[i], grid)) {
      if (std::fabs(dev - x[i]) <= detection_tol) continue;
      const double m = margin(dev);
      if (m < e.worst_margin) {
        e.worst_margin = m;
        e.worst_rate = dev;
      }
    }
    cert.entries.push_back(e);
  }
  cert.worst_margin = cert.entries.front().worst_margin;
  for (const auto& e : cert.entries) cert.worst_margin = std::min(cert.worst_margin, e.worst_margin);
  return cert;
}

void write_trace_csv(const SimTrace& trace, std::ostream& os) {
  const std::size_t n = trace.rounds.empty() ? 0 : trace.rounds.front().rates.size();
  os << "round,realization,detected,punishing";
  for (const char* col : {"rate", "aoi", "cost"}) {
    for (std::size_t i = 0; i < n; ++i) os << ',' << col << '_' << i;
  }
  os << '\n';
  os.precision(17);
  for (const auto& r : trace.rounds) {
    os << r.round << ',' << (r.realization ? to_string(*r.realization) : "none") << ','
       << (r.detected ? 1 : 0) << ',' << (r.punishing ? 1 : 0);
    for (const auto* v : {&r.rates, &r.aoi, &r.cost}) {
      for (double x : *v) os << ',' << x;
    }
    os << '\n';
  }
}

nlohmann::json trace_summary_json(const SimTrace& trace) {
  nlohmann::json j;
  j["rounds"] = trace.rounds.size();
  j["delta"] = trace.delta;
  j["seed"] = trace.seed;
  j["rng"] = trace.rng_algorithm;
  j["mode"] = trace.bayesian ? "bayesian" : "complete";
  j["trigger_round"] = trace.trigger_round ? nlohmann::json(*trace.trigger_round) : nlohmann::json();
  j["discounted_total"] = trace.discounted;
  j["discounted_extrapolated"] = trace.extrapolated;
  j["average_cost"] = trace.average;
  return j;
}

}  // namespace aoigame

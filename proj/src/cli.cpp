#include "aoigame/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <thread>

#include "aoigame/errors.hpp"
#include "aoigame/game_bayesian.hpp"
#include "aoigame/game_complete.hpp"
#include "aoigame/mech_bayesian.hpp"
#include "aoigame/mech_complete.hpp"
#include "aoigame/queue_sim.hpp"
#include "aoigame/rng.hpp"

namespace aoigame::cli {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [k, v] : obj.items()) {
    if (!allowed.count(k)) throw ConfigError(where + ": unknown key '" + k + "'");
  }
}

template <class T>
T get(const json& obj, const std::string& key, const std::string& where) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

template <class T>
void maybe(const json& obj, const std::string& key, T& out, const std::string& where) {
  if (obj.contains(key)) out = get<T>(obj, key, where);
}

std::vector<double> delta_list(const json& v) {
  if (v.is_array()) return v.get<std::vector<double>>();
  check_keys(v, {"start", "stop", "count"}, "deltas");
  const double a = get<double>(v, "start", "deltas");
  const double b = get<double>(v, "stop", "deltas");
  const int n = get<int>(v, "count", "deltas");
  if (n < 1) throw ConfigError("deltas.count must be at least 1");
  std::vector<double> out;
  for (int k = 0; k < n; ++k) out.push_back(n == 1 ? a : a + (b - a) * k / (n - 1));
  return out;
}

}  // namespace

SystemParams ScenarioConfig::params() const {
  if (bayesian()) throw ConfigError("command requires mode 'complete'");
  return SystemParams(mu, costs);
}

BayesianSpec ScenarioConfig::spec() const {
  if (!bayesian()) throw ConfigError("command requires mode 'bayesian'");
  return BayesianSpec(c_high, c_low, p_high, incumbent_costs, mu);
}

BayesianSpec ScenarioConfig::spec_with_n(std::size_t n) const {
  if (n < 2) throw ConfigError("family sizes must be at least 2");
  if (incumbent_costs.empty()) throw ConfigError("incumbent_costs must not be empty");
  return BayesianSpec(c_high, c_low, p_high, std::vector<double>(n - 1, incumbent_costs.front()),
                      mu);
}

ScenarioConfig parse_config(const json& j) {
  const std::string top = "config";
  check_keys(j,
             {"schema_version", "mode", "mu", "costs", "c_high", "c_low", "p_high",
              "incumbent_costs", "deltas", "mu_values", "min_cost_values", "family_n",
              "simulation", "queue", "seed"},
             top);
  ScenarioConfig c;
  if (!j.contains("schema_version")) throw ConfigError("config: missing schema_version");
  c.schema_version = get<int>(j, "schema_version", top);
  if (c.schema_version != kSchemaVersion) {
    throw ConfigError("config: unsupported schema_version " + std::to_string(c.schema_version));
  }
  maybe(j, "mode", c.mode, top);
  if (c.mode != "complete" && c.mode != "bayesian") {
    throw ConfigError("config.mode: expected 'complete' or 'bayesian'");
  }
  maybe(j, "mu", c.mu, top);
  maybe(j, "costs", c.costs, top);
  maybe(j, "c_high", c.c_high, top);
  maybe(j, "c_low", c.c_low, top);
  maybe(j, "p_high", c.p_high, top);
  maybe(j, "incumbent_costs", c.incumbent_costs, top);
  if (j.contains("deltas")) c.deltas = delta_list(j.at("deltas"));
  maybe(j, "mu_values", c.mu_values, top);
  maybe(j, "min_cost_values", c.min_cost_values, top);
  maybe(j, "family_n", c.family_n, top);
  maybe(j, "seed", c.seed, top);
  for (double d : c.deltas) {
    if (!(d > 0.0 && d < 1.0)) throw ConfigError("config.deltas: values must lie in (0, 1)");
  }
  if (j.contains("simulation")) {
    const auto& s = j.at("simulation");
    const std::string w = "simulation";
    check_keys(s, {"rounds", "delta", "mechanism", "strategies", "noisy_events"}, w);
    SimulationConfig sc;
    maybe(s, "rounds", sc.rounds, w);
    maybe(s, "delta", sc.delta, w);
    maybe(s, "mechanism", sc.mechanism, w);
    maybe(s, "noisy_events", sc.noisy_events, w);
    if (sc.mechanism != "plan" && sc.mechanism != "per_realization") {
      throw ConfigError("simulation.mechanism: expected 'plan' or 'per_realization'");
    }
    if (s.contains("strategies")) {
      for (const auto& st : s.at("strategies")) {
        const std::string ws = "simulation.strategies[]";
        check_keys(st, {"kind", "platform", "round", "rate"}, ws);
        StrategyConfig x;
        maybe(st, "kind", x.kind, ws);
        maybe(st, "platform", x.platform, ws);
        maybe(st, "round", x.round, ws);
        if (st.contains("rate") && !st.at("rate").is_null()) x.rate = get<double>(st, "rate", ws);
        if (x.kind != "comply" && x.kind != "deviate" && x.kind != "cheat") {
          throw ConfigError(ws + ".kind: expected comply, deviate or cheat");
        }
        sc.strategies.push_back(x);
      }
    }
    c.simulation = sc;
  }
  if (j.contains("queue")) {
    for (const auto& q : j.at("queue")) {
      const std::string wq = "queue[]";
      check_keys(q, {"rates", "mu", "events", "own_preemption"}, wq);
      QueueRun r;
      r.rates = get<std::vector<double>>(q, "rates", wq);
      maybe(q, "mu", r.mu, wq);
      maybe(q, "events", r.events, wq);
      maybe(q, "own_preemption", r.own_preemption, wq);
      c.queue.push_back(r);
    }
  }
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError(path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " +
                      e.what());
  }
  return parse_config(j);
}

namespace {

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
};

void emit(const Table& t, const std::string& format, std::ostream& os) {
  if (format == "json") {
    json arr = json::array();
    for (const auto& r : t.rows) {
      json o;
      for (std::size_t k = 0; k < t.columns.size(); ++k) o[t.columns[k]] = r[k];
      arr.push_back(o);
    }
    os << arr.dump(2) << '\n';
    return;
  }
  for (std::size_t k = 0; k < t.columns.size(); ++k) os << (k ? "," : "") << t.columns[k];
  os << '\n';
  for (const auto& r : t.rows) {
    for (std::size_t k = 0; k < r.size(); ++k) {
      if (k) os << ',';
      if (r[k].is_string()) {
        os << r[k].get<std::string>();
      } else if (r[k].is_null()) {
        os << "";
      } else {
        os << r[k].dump();
      }
    }
    os << '\n';
  }
}

// Results come back in index order regardless of completion order.
template <class R>
std::vector<R> parallel_map(std::size_t count, unsigned jobs, const std::function<R(std::size_t)>& f) {
  std::vector<R> out(count);
  std::vector<std::exception_ptr> errs(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next++) < count;) {
      try {
        out[k] = f(k);
      } catch (...) {
        errs[k] = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(count)));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errs) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

json rates_json(const RateProfile& p) { return p.rates(); }

json bayes_json(const BayesianRateProfile& p) {
  return {{"rate1_high", p.rate1_high}, {"rate1_low", p.rate1_low}, {"incumbents", p.incumbent_rates}};
}

json poa_json(const PoaResult& r) { return r.unbounded() ? json("unbounded") : json(*r.ratio); }

void flatten(const json& j, const std::string& prefix, Table& t) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, t);
  } else if (j.is_array() && !j.empty() && !j.front().is_object()) {
    for (std::size_t i = 0; i < j.size(); ++i) t.rows.push_back({prefix, i, j[i]});
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", t);
  } else {
    t.rows.push_back({prefix, nullptr, j});
  }
}

void emit_summary(const json& j, const std::string& format, std::ostream& os) {
  if (format == "json") {
    os << j.dump(2) << '\n';
    return;
  }
  Table t{{"quantity", "platform", "value"}, {}};
  flatten(j, "", t);
  emit(t, format, os);
}

json thresholds_json(const ApproxThresholds& t) {
  return {{"platform1_low", t.platform1_low},
          {"platform1_high", t.platform1_high},
          {"platform1_binding", to_string(t.platform1_binding())},
          {"incumbents", t.incumbents}};
}

json solve_complete(const SystemParams& p) {
  const auto ne = nash_equilibrium(p);
  const auto so = social_optimum(p);
  return {{"mode", "complete"},
          {"nash", rates_json(ne.profile)},
          {"optimum", rates_json(so.profile)},
          {"nash_social", ne.social},
          {"optimum_social", so.social},
          {"poa", poa_json(poa_ratio(p))},
          {"thresholds", delta_thresholds(p)}};
}

json solve_bayesian(const BayesianSpec& s) {
  const auto ne = bayesian_nash(s);
  const auto so = bayesian_social_optimum(s);
  const auto hat = approx_social_optimum(s);
  const auto cheat = cheat_incentive(s);
  const auto info = info_advantage_report(s);
  json j = {{"mode", "bayesian"},
            {"nash", bayes_json(ne.profile)},
            {"optimum", bayes_json(so.profile)},
            {"approx_optimum", rates_json(hat.profile)},
            {"nash_social", ne.social},
            {"optimum_social", so.social},
            {"poa", poa_json(bayesian_poa_ratio(s))},
            {"thresholds", thresholds_json(approx_thresholds(s))},
            {"cheat",
             {{"applicable", cheat.applicable},
              {"profitable", cheat.profitable},
              {"condition_lhs", cheat.condition_lhs},
              {"condition_rhs", cheat.condition_rhs},
              {"condition_holds", cheat.condition_holds}}},
            {"info_advantage",
             {{"incomplete_high", info.incomplete_high},
              {"complete_high", info.complete_high},
              {"incomplete_avg", info.incomplete_avg},
              {"complete_avg", info.complete_avg},
              {"p_high_threshold", info.threshold_ratio},
              {"p_high_threshold_direct", info.threshold_direct},
              {"interior", info.interior}}}};
  if (!s.ordering_holds()) j["warning"] = s.ordering_warning();
  return j;
}

std::string binding_string(const std::vector<bool>& b) {
  std::string s;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (b[i]) s += (s.empty() ? "" : ";") + std::to_string(i);
  }
  return s;
}

void cmd_profile(const ScenarioConfig& c, const RunOptions& o, std::ostream& os) {
  if (c.deltas.empty()) throw ConfigError("profile requires deltas");
  Table t;
  t.columns.push_back("delta");
  std::size_t n;
  std::vector<std::vector<json>> rows;
  if (c.bayesian()) {
    const auto s = c.spec();
    n = s.n();
    rows = parallel_map<std::vector<json>>(c.deltas.size(), o.jobs, [&](std::size_t k) {
      const auto plan = approx_cooperation_profile(s, c.deltas[k]);
      std::vector<json> r{c.deltas[k]};
      for (double x : plan.profile.rates()) r.push_back(x);
      r.push_back(plan.regime.label());
      r.push_back(binding_string(plan.binding));
      r.push_back(to_string(plan.platform1_branch));
      r.push_back(plan.feasible);
      return r;
    });
  } else {
    const auto p = c.params();
    n = p.n();
    rows = parallel_map<std::vector<json>>(c.deltas.size(), o.jobs, [&](std::size_t k) {
      const auto plan = cooperation_profile(p, c.deltas[k]);
      std::vector<json> r{c.deltas[k]};
      for (double x : plan.profile.rates()) r.push_back(x);
      r.push_back(plan.regime.label());
      r.push_back(binding_string(plan.binding));
      r.push_back(nullptr);
      r.push_back(plan.feasible);
      return r;
    });
  }
  for (std::size_t i = 0; i < n; ++i) t.columns.push_back("rate_" + std::to_string(i));
  for (const char* col : {"regime", "binding", "platform1_branch", "feasible", "monotone"}) {
    t.columns.emplace_back(col);
  }
  // Monotone: every rate is no larger than at the previous (smaller) delta.
  std::vector<std::size_t> idx(rows.size());
  for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = k;
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return c.deltas[a] < c.deltas[b]; });
  const std::vector<json>* prev = nullptr;
  for (std::size_t k : idx) {
    bool mono = true;
    if (prev) {
      for (std::size_t i = 1; i <= n; ++i) {
        if (rows[k][i].get<double>() > (*prev)[i].get<double>() * (1.0 + 1e-9)) mono = false;
      }
    }
    rows[k].push_back(mono);
    prev = &rows[k];
    t.rows.push_back(rows[k]);
  }
  emit(t, o.format, os);
}

void cmd_ratio(const ScenarioConfig& c, const RunOptions& o, std::ostream& os) {
  Table t;
  if (c.bayesian() && !c.family_n.empty()) {
    std::vector<BayesianSpec> fam;
    for (std::size_t n : c.family_n) fam.push_back(c.spec_with_n(n));
    t.columns = {"n", "approx_ratio", "poa_ratio", "bound"};
    for (const auto& r : approximation_ratio(fam)) {
      t.rows.push_back({r.n, r.approx_ratio, r.poa_ratio,
                        static_cast<double>(r.n) / static_cast<double>(r.n - 1)});
    }
  } else if (!c.min_cost_values.empty()) {
    t.columns = {"min_cost", "poa"};
    for (double v : c.min_cost_values) {
      PoaResult r;
      if (c.bayesian()) {
        const auto s = c.spec();
        r = bayesian_poa_ratio(BayesianSpec(s.c_high(), v, s.p_high(), s.incumbent_costs(), s.mu()));
      } else {
        auto costs = c.costs;
        const auto it = std::min_element(costs.begin(), costs.end());
        if (it == costs.end()) throw ConfigError("costs must not be empty");
        *it = v;
        r = poa_ratio(SystemParams(c.mu, costs));
      }
      t.rows.push_back({v, poa_json(r)});
    }
  } else {
    if (c.deltas.empty()) throw ConfigError("ratio requires deltas, family_n or min_cost_values");
    t.columns = {"mu", "delta", "ratio"};
    const auto mus = c.mu_values.empty() ? std::vector<double>{c.mu} : c.mu_values;
    std::vector<std::pair<double, double>> keys;
    for (double m : mus) {
      for (double d : c.deltas) keys.emplace_back(m, d);
    }
    std::sort(keys.begin(), keys.end());
    const auto vals = parallel_map<double>(keys.size(), o.jobs, [&](std::size_t k) {
      const auto [m, d] = keys[k];
      if (c.bayesian()) {
        const auto s = c.spec();
        const BayesianSpec sm(s.c_high(), s.c_low(), s.p_high(), s.incumbent_costs(), m);
        const auto plan = approx_cooperation_profile(sm, d);
        const auto& x = plan.profile.rates();
        const BayesianRateProfile bp(x[0], x[0], std::vector<double>(x.begin() + 1, x.end()));
        return bayesian_social_cost(bp, sm) / bayesian_social_optimum(sm).social;
      }
      const auto p = c.params().with_mu(m);
      return social_cost(cooperation_profile(p, d).profile, p) / social_optimum(p).social;
    });
    for (std::size_t k = 0; k < keys.size(); ++k) t.rows.push_back({keys[k].first, keys[k].second, vals[k]});
  }
  emit(t, o.format, os);
}

void cmd_thresholds(const ScenarioConfig& c, const RunOptions& o, std::ostream& os) {
  Table t{{"platform", "realization", "threshold"}, {}};
  if (c.bayesian()) {
    const auto th = approx_thresholds(c.spec());
    t.rows.push_back({0, "low", th.platform1_low});
    t.rows.push_back({0, "high", th.platform1_high});
    for (std::size_t i = 0; i < th.incumbents.size(); ++i) t.rows.push_back({i + 1, "none", th.incumbents[i]});
  } else {
    const auto th = delta_thresholds(c.params());
    for (std::size_t i = 0; i < th.size(); ++i) t.rows.push_back({i, "none", th[i]});
  }
  emit(t, o.format, os);
}

void cmd_simulate(const ScenarioConfig& c, const RunOptions& o, std::ostream& os) {
  if (!c.simulation) throw ConfigError("simulate requires a simulation section");
  const auto& sc = *c.simulation;
  GameEnvironment env = c.bayesian() ? GameEnvironment(c.spec()) : GameEnvironment(c.params());
  MechanismProfiles mp;
  if (c.bayesian()) {
    const auto s = c.spec();
    mp = sc.mechanism == "per_realization" ? MechanismProfiles::per_realization(s)
                                           : MechanismProfiles::from_plan(
                                                 approx_cooperation_profile(s, sc.delta));
  } else {
    if (sc.mechanism != "plan") throw ConfigError("per_realization requires mode 'bayesian'");
    mp = MechanismProfiles::from_plan(cooperation_profile(c.params(), sc.delta));
  }
  std::vector<Strategy> strategies;
  for (const auto& s : sc.strategies) {
    if (s.kind == "comply") strategies.push_back(Strategy::comply(s.platform));
    if (s.kind == "deviate") strategies.push_back(Strategy::deviate(s.platform, s.round, s.rate));
    if (s.kind == "cheat") strategies.push_back(Strategy::cheat());
  }
  SimConfig cfg;
  cfg.rounds = sc.rounds;
  cfg.delta = sc.delta;
  cfg.seed = o.seed.value_or(c.seed);
  cfg.noisy_events = sc.noisy_events;
  const auto tr = run(env, mp, strategies, cfg);
  if (o.format == "json") {
    os << trace_summary_json(tr).dump(2) << '\n';
  } else {
    write_trace_csv(tr, os);
  }
}

void cmd_queue(const ScenarioConfig& c, const RunOptions& o, std::ostream& os) {
  if (c.queue.empty()) throw ConfigError("queue-validate requires a queue section");
  const std::uint64_t seed = o.seed.value_or(c.seed);
  const auto ests = parallel_map<AoiEstimate>(c.queue.size(), o.jobs, [&](std::size_t k) {
    const auto& q = c.queue[k];
    QueueConfig qc;
    qc.rates = q.rates;
    qc.mu = q.mu;
    qc.events = q.events;
    qc.own_preemption = q.own_preemption;
    qc.seed = Rng::derive(seed, k);
    return simulate(qc);
  });
  Table t{{"config", "platform", "analytic", "estimate", "stderr", "rel_error", "events"}, {}};
  for (std::size_t k = 0; k < ests.size(); ++k) {
    const RateProfile prof(c.queue[k].rates);
    for (std::size_t i = 0; i < prof.n(); ++i) {
      const double a = aoi(i, prof, c.queue[k].mu);
      const auto& p = ests[k].platforms[i];
      t.rows.push_back({k, i, a, p.estimate, p.stderr_, (p.estimate - a) / a, ests[k].events});
    }
  }
  emit(t, o.format, os);
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> c{"solve", "thresholds", "profile", "ratio", "simulate",
                                          "queue-validate"};
  return c;
}

void run_command(const std::string& command, const ScenarioConfig& config, const RunOptions& opts,
                 std::ostream& out) {
  if (opts.format != "csv" && opts.format != "json") throw ConfigError("format must be csv or json");
  if (command == "solve") {
    if (config.bayesian() && !config.family_n.empty()) {
      cmd_ratio(config, opts, out);
      return;
    }
    emit_summary(config.bayesian() ? solve_bayesian(config.spec()) : solve_complete(config.params()),
                 opts.format, out);
  } else if (command == "thresholds") {
    cmd_thresholds(config, opts, out);
  } else if (command == "profile") {
    cmd_profile(config, opts, out);
  } else if (command == "ratio") {
    cmd_ratio(config, opts, out);
  } else if (command == "simulate") {
    cmd_simulate(config, opts, out);
  } else if (command == "queue-validate") {
    cmd_queue(config, opts, out);
  } else {
    throw ConfigError("unknown command '" + command + "'");
  }
}

int exit_code_for(std::exception_ptr ep, std::ostream& err) {
  try {
    std::rethrow_exception(ep);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return numerical_failure;
  } catch (const InconsistencyError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return numerical_failure;
  } catch (const std::exception& e) {
    err << "internal invariant violation: " << e.what() << '\n';
    return invariant_violation;
  } catch (...) {
    err << "internal invariant violation: unknown exception\n";
    return invariant_violation;
  }
}

}  // namespace aoigame::cli

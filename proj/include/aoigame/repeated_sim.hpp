#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "aoigame/mech_bayesian.hpp"
#include "aoigame/mech_complete.hpp"
#include "aoigame/model.hpp"

namespace aoigame {

using GameEnvironment = std::variant<SystemParams, BayesianSpec>;

bool is_bayesian(const GameEnvironment& env);
std::size_t platform_count(const GameEnvironment& env);

// Full rate vectors by platform 0's realization. Under complete information
// the high and low vectors coincide.
struct MechanismProfiles {
  std::vector<double> coop_high, coop_low;
  std::vector<double> punish_high, punish_low;

  const std::vector<double>& coop(Realization r) const {
    return r == Realization::high ? coop_high : coop_low;
  }
  const std::vector<double>& punish(Realization r) const {
    return r == Realization::high ? punish_high : punish_low;
  }

  static MechanismProfiles from_plan(const CooperationPlan& plan);
  static MechanismProfiles from_plan(const ApproxCooperationPlan& plan);
  // Realization-specific optimum rates with Bayesian Nash reversion. This is
  // the cheat-prone alternative kept for comparison.
  static MechanismProfiles per_realization(const BayesianSpec& spec, const SolveOptions& opts = {});
};

struct Strategy {
  enum class Kind { comply, one_shot_deviate, bayesian_cheat };
  Kind kind = Kind::comply;
  std::size_t platform = 0;
  int round = 1;
  // Explicit deviation rate; empty means best response to the others' rates.
  std::optional<double> rate;

  static Strategy comply(std::size_t platform) { return {Kind::comply, platform, 1, {}}; }
  static Strategy deviate(std::size_t platform, int round, std::optional<double> rate = {}) {
    return {Kind::one_shot_deviate, platform, round, rate};
  }
  static Strategy cheat() { return {Kind::bayesian_cheat, 0, 1, {}}; }
};

struct SimConfig {
  int rounds = 100;
  double delta = 0.9;
  std::uint64_t seed = 1;
  double detection_tol = 1e-6;
  // Positive: AoI is estimated by the queue simulator with this many events
  // per round and detection uses a relative band instead of detection_tol.
  std::uint64_t noisy_events = 0;
  double noisy_band = 0.02;
};

struct RoundRecord {
  int round = 0;
  std::optional<Realization> realization;
  std::vector<double> rates;
  std::vector<double> aoi;
  std::vector<double> cost;
  bool detected = false;
  bool punishing = false;
};

struct SimTrace {
  std::vector<RoundRecord> rounds;
  std::optional<int> trigger_round;
  std::vector<double> discounted;
  // discounted plus the closed-form tail of the state reached at round T.
  std::vector<double> extrapolated;
  std::vector<double> average;
  double delta = 0.0;
  std::uint64_t seed = 0;
  std::string rng_algorithm;
  bool bayesian = false;
};

SimTrace run(const GameEnvironment& env, const MechanismProfiles& plan,
             const std::vector<Strategy>& strategies, const SimConfig& config);

// lambda_{-i} = (Delta_i - 1/lambda_i) lambda_i mu - lambda_i.
double infer_rival_rate(double observed_aoi, double own_rate, double mu);

struct CertificateEntry {
  std::size_t platform = 0;
  std::optional<Realization> realization;
  double worst_margin = 0.0;
  double worst_rate = 0.0;
  double best_response_margin = 0.0;
};

struct Certificate {
  std::vector<CertificateEntry> entries;
  double worst_margin = 0.0;
  bool ok(double tol = 1e-8) const { return worst_margin >= -tol; }
};

// Deviation grid is multiplicative around each cooperative rate, spanning
// [rate / spread, rate * spread] on a log scale.
struct DeviationGrid {
  int points = 1000;
  double spread = 10.0;
};

Certificate certify_no_deviation(const CooperationPlan& plan, const SystemParams& params,
                                 double delta, const DeviationGrid& grid = {},
                                 double detection_tol = 1e-6);
Certificate certify_no_deviation(const ApproxCooperationPlan& plan, const BayesianSpec& spec,
                                 double delta, const DeviationGrid& grid = {},
                                 double detection_tol = 1e-6);

// Columns: round,realization,detected,punishing,rate_<i>...,aoi_<i>...,cost_<i>...
void write_trace_csv(const SimTrace& trace, std::ostream& os);
nlohmann::json trace_summary_json(const SimTrace& trace);

}  // namespace aoigame

#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "aoigame/model.hpp"
#include "aoigame/repeated_sim.hpp"

namespace aoigame::cli {

inline constexpr int kSchemaVersion = 1;
inline constexpr std::uint64_t kDefaultSeed = 20240521;

enum ExitCode : int { ok = 0, config_error = 1, numerical_failure = 2, invariant_violation = 3 };

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StrategyConfig {
  std::string kind = "comply";  // comply | deviate | cheat
  std::size_t platform = 0;
  int round = 1;
  std::optional<double> rate;
};

struct SimulationConfig {
  int rounds = 500;
  double delta = 0.9;
  std::string mechanism = "plan";  // plan | per_realization
  std::vector<StrategyConfig> strategies;
  std::uint64_t noisy_events = 0;
};

struct QueueRun {
  std::vector<double> rates;
  double mu = 1.0;
  std::uint64_t events = 1000000;
  bool own_preemption = true;
};

struct ScenarioConfig {
  int schema_version = kSchemaVersion;
  std::string mode = "complete";
  double mu = 1.0;
  std::vector<double> costs;
  double c_high = 0.0, c_low = 0.0, p_high = 0.0;
  std::vector<double> incumbent_costs;
  std::vector<double> deltas;
  std::vector<double> mu_values;
  std::vector<double> min_cost_values;
  std::vector<std::size_t> family_n;
  std::optional<SimulationConfig> simulation;
  std::vector<QueueRun> queue;
  std::uint64_t seed = kDefaultSeed;

  bool bayesian() const { return mode == "bayesian"; }
  SystemParams params() const;
  BayesianSpec spec() const;
  // Spec with the incumbent list replaced by n - 1 copies of its first entry.
  BayesianSpec spec_with_n(std::size_t n) const;
};

ScenarioConfig parse_config(const nlohmann::json& j);
ScenarioConfig load_config(const std::string& path);

struct RunOptions {
  std::string format = "csv";
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
};

// Writes the command's table to `out`. Throws ConfigError, NumericalError,
// ConsistencyError and friends; see exit_code_for.
void run_command(const std::string& command, const ScenarioConfig& config, const RunOptions& opts,
                 std::ostream& out);

const std::vector<std::string>& commands();

// Maps an in-flight exception to the documented exit code and writes a
// one-line message to `err`.
int exit_code_for(std::exception_ptr ep, std::ostream& err);

}  // namespace aoigame::cli

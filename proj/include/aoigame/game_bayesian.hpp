#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "aoigame/game_complete.hpp"
#include "aoigame/model.hpp"
#include "aoigame/solvers.hpp"

namespace aoigame {

struct BayesianEquilibriumResult {
  BayesianRateProfile profile;
  double platform1_high = 0.0;
  double platform1_low = 0.0;
  double platform1_expected = 0.0;
  std::vector<double> incumbent_costs;
  double social = 0.0;
  // Order: rate1_high, rate1_low, incumbents.
  std::vector<double> residuals;
  int iterations = 0;
};

// Platform 0 best-responds per realization; incumbents best-respond to the
// expected total, c_i lambda_i^2 = 1 + (E[lambda_0] + sum_{j != i} lambda_j) / mu.
BayesianEquilibriumResult bayesian_nash(const BayesianSpec& spec, const SolveOptions& opts = {});

// Stationary point of the expected social cost.
BayesianEquilibriumResult bayesian_social_optimum(const BayesianSpec& spec,
                                                  const SolveOptions& opts = {});

// Gradient of the expected social cost over (rate1_high, rate1_low, incumbents).
std::vector<double> bayesian_social_gradient(const BayesianRateProfile& profile,
                                             const BayesianSpec& spec);

// Complete-information Nash play with platform 0's cost revealed: (high, low).
std::pair<EquilibriumResult, EquilibriumResult> per_realization_benchmark(
    const BayesianSpec& spec, const SolveOptions& opts = {});

struct InfoAdvantageRow {
  double p_high = 0.0;
  double incomplete_avg = 0.0;
  double complete_avg = 0.0;
  // p - R(p); nonnegative exactly when the incomplete average is not better.
  double ratio_gap = 0.0;
  double difference() const { return incomplete_avg - complete_avg; }
};

struct InfoAdvantageReport {
  double incomplete_high = 0.0;
  double complete_high = 0.0;
  double incomplete_low = 0.0;
  double complete_low = 0.0;
  double incomplete_avg = 0.0;
  double complete_avg = 0.0;
  bool high_not_better = false;
  // Smallest p such that the incomplete average is no better than the
  // complete one for every p' in [p, 1]. Zero when that holds everywhere.
  double threshold_ratio = 0.0;
  double threshold_direct = 0.0;
  bool interior = false;
};

// R(p) = [pi_C,L - pi_I,L] / [pi_C,L - pi_I,L + pi_I,H - pi_C,H] evaluated at p.
double info_advantage_ratio(const BayesianSpec& spec, double p, const SolveOptions& opts = {});
InfoAdvantageRow info_advantage_at(const BayesianSpec& spec, double p,
                                   const SolveOptions& opts = {});
std::vector<InfoAdvantageRow> info_advantage_sweep(const BayesianSpec& spec, double step,
                                                   const SolveOptions& opts = {});
// Sweep analogue of the threshold: smallest grid p with the condition holding
// on every grid point at or above it.
double sweep_threshold(const std::vector<InfoAdvantageRow>& rows);

// Raises ConsistencyError if the two threshold routes disagree by > 1e-6.
InfoAdvantageReport info_advantage_report(const BayesianSpec& spec, const SolveOptions& opts = {});

PoaResult bayesian_poa_ratio(const BayesianSpec& spec, const SolveOptions& opts = {});

}  // namespace aoigame

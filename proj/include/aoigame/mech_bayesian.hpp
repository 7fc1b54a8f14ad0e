#pragma once

#include <cstddef>
#include <vector>

#include "aoigame/game_bayesian.hpp"
#include "aoigame/game_complete.hpp"
#include "aoigame/mech_complete.hpp"
#include "aoigame/model.hpp"
#include "aoigame/solvers.hpp"

namespace aoigame {

// Social optimum of the complete-information game in which platform 0's cost
// is replaced by its mean.
EquilibriumResult approx_social_optimum(const BayesianSpec& spec, const SolveOptions& opts = {});

struct ApproxThresholds {
  double platform1_low = 0.0;
  double platform1_high = 0.0;
  std::vector<double> incumbents;  // platforms 1..n-1
  double platform1_max() const { return platform1_low > platform1_high ? platform1_low : platform1_high; }
  Realization platform1_binding() const {
    return platform1_high > platform1_low ? Realization::high : Realization::low;
  }
  double max_all() const;
};

// Closed forms; each is checked against the cost-difference form and a
// ConsistencyError is raised on disagreement > 1e-6.
ApproxThresholds approx_thresholds(const BayesianSpec& spec, const SolveOptions& opts = {});

struct CheatReport {
  bool applicable = false;
  double truthful_cost = 0.0;  // c_H realization playing its own optimum rate
  double cheat_cost = 0.0;     // c_H realization playing the c_L optimum rate
  bool profitable = false;
  double condition_lhs = 0.0;  // sqrt(c_H + S) sqrt(c_L + S)
  double condition_rhs = 0.0;  // c_H
  bool condition_holds = false;
  double s = 0.0;
};

CheatReport cheat_incentive(const BayesianSpec& spec, const SolveOptions& opts = {});

struct ApproxCooperationPlan {
  double delta = 0.0;
  Regime regime;
  RateProfile profile;
  ApproxThresholds thresholds;
  RateProfile reference_hat;
  BayesianRateProfile reference_nash;
  std::vector<bool> binding;
  // Platform 0's two realization-specific smaller roots and the argmax.
  double root_low = 0.0;
  double root_high = 0.0;
  Realization platform1_branch = Realization::low;
  bool branch_tie = false;
  // False when some indifference discriminant is negative beyond rounding:
  // no single rate then satisfies every no-deviation constraint, and the
  // vertex of the violated quadratic is used.
  bool feasible = true;
  double worst_discriminant = 0.0;
  std::vector<double> residuals;
};

ApproxCooperationPlan approx_cooperation_profile(const BayesianSpec& spec, double delta,
                                                 const SolveOptions& opts = {});

struct ApproxRatioRow {
  std::size_t n = 0;
  double approx_ratio = 0.0;  // expected social cost at lambda_hat / optimum
  double poa_ratio = 0.0;     // expected social cost at Nash / optimum
};

std::vector<ApproxRatioRow> approximation_ratio(const std::vector<BayesianSpec>& family,
                                                const SolveOptions& opts = {});

// Expected one-shot cost of every platform when the single-rate profile is played.
double approx_platform1_cost(Realization r, const RateProfile& profile, const BayesianSpec& spec);
double approx_incumbent_cost(std::size_t i, const RateProfile& profile, const BayesianSpec& spec);

}  // namespace aoigame

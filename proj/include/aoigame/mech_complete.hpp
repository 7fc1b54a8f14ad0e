#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "aoigame/game_complete.hpp"
#include "aoigame/model.hpp"
#include "aoigame/solvers.hpp"

namespace aoigame {

struct Regime {
  enum class Kind { large, medium, small };
  Kind kind = Kind::large;
  // medium: number of platforms whose threshold exceeds delta.
  std::size_t j = 0;
  std::string label() const;
};

struct CooperationPlan {
  double delta = 0.0;
  Regime regime;
  RateProfile profile;
  std::vector<double> thresholds;
  RateProfile reference_nash;
  RateProfile reference_optimum;
  // Platforms whose rate sits strictly above the reference optimum.
  std::vector<bool> binding;
  // Indices sorted by nondecreasing cost.
  std::vector<std::size_t> sorted_order;
  // Indifference equation residuals for binding platforms (0 otherwise).
  std::vector<double> residuals;
  bool feasible = true;
};

struct ThresholdForms {
  double closed = 0.0;
  double cost_difference = 0.0;
};

// Both expressions of the per-platform threshold against the optimum/Nash pair.
ThresholdForms delta_threshold_forms(std::size_t i, const RateProfile& optimum,
                                     const RateProfile& nash, const SystemParams& params);

// Smallest delta at which platform i complies with the social optimum under
// Nash reversion. Throws ConsistencyError if the two forms differ by > 1e-6.
double delta_threshold(std::size_t i, const SystemParams& params, const SolveOptions& opts = {});
std::vector<double> delta_thresholds(const SystemParams& params, const SolveOptions& opts = {});

struct DeviationValue {
  double deviate = 0.0;
  double comply = 0.0;
  double margin() const { return deviate - comply; }
};

// Discounted totals: one-shot best response followed by perpetual
// punishment, versus perpetual cooperation.
DeviationValue deviation_value(std::size_t i, const RateProfile& coop, const SystemParams& params,
                               double delta, const RateProfile& punishment);
DeviationValue deviation_value(std::size_t i, const RateProfile& coop, const SystemParams& params,
                               double delta, const SolveOptions& opts = {});
// Same with an explicit deviation rate; a deviation that does not raise the
// rate is not detected and is followed by cooperation.
DeviationValue deviation_value_at(std::size_t i, double rate, const RateProfile& coop,
                                  const SystemParams& params, double delta,
                                  const RateProfile& punishment);

// Roots of c x^2 - 2 M x + K = 0, with M = sqrt(c) (delta sqrt(K_pun) + (1 - delta) sqrt(K)).
struct IndifferenceRoots {
  double smaller = 0.0;
  double larger = 0.0;
  double discriminant = 0.0;
};
IndifferenceRoots indifference_roots(double c, double k_coop, double k_punish, double delta);

CooperationPlan cooperation_profile(const SystemParams& params, double delta,
                                    const SolveOptions& opts = {});

// (delta, social cost of the plan / optimal social cost).
std::vector<std::pair<double, double>> social_cost_ratio_curve(const SystemParams& params,
                                                               const std::vector<double>& grid,
                                                               const SolveOptions& opts = {});

}  // namespace aoigame

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "aoigame/model.hpp"
#include "aoigame/solvers.hpp"

namespace aoigame {

struct EquilibriumResult {
  RateProfile profile;
  std::vector<double> per_platform_costs;
  double social = 0.0;
  std::vector<double> residuals;
  int iterations = 0;
};

// sqrt((1 + rival_total / mu) / c).
double best_response(double rival_total, double c, double mu);

// c_i lambda_i^2 = 1 + lambda_{-i} / mu for every i.
EquilibriumResult nash_equilibrium(const SystemParams& params, const SolveOptions& opts = {});

// Stationary point of the social cost; per platform
// lambda_i^2 (c_i + (1/mu) sum_{j != i} 1/lambda_j) = 1 + lambda_{-i} / mu.
EquilibriumResult social_optimum(const SystemParams& params, const SolveOptions& opts = {});

// Gradient of the social cost with respect to each rate.
std::vector<double> social_cost_gradient(const RateProfile& profile, const SystemParams& params);

// nullopt ratio means the solve diverged past the rate cap.
struct PoaResult {
  std::optional<double> ratio;
  bool unbounded() const { return !ratio.has_value(); }
};

PoaResult poa_ratio(const SystemParams& params, const SolveOptions& opts = {});

enum class Perturbation { own_cost, rival_cost, mu, rival_rate };

struct StaticsReport {
  Perturbation kind;
  std::size_t platform = 0;
  double base_rate = 0.0;
  double perturbed_rate = 0.0;
  int observed_sign = 0;
  int expected_sign = 0;
  bool matches() const { return observed_sign == expected_sign; }
};

// Sign of the change in lambda_i^* after a small increase of the chosen
// quantity. For rival_rate, lambda_j of `rival` is raised exogenously and
// platform i best-responds.
StaticsReport comparative_statics_check(const SystemParams& params, std::size_t i,
                                        Perturbation kind, std::size_t rival = 0,
                                        double step = 1e-3, const SolveOptions& opts = {});

}  // namespace aoigame

#pragma once

// Domain types and closed-form AoI / cost evaluations for N platforms sharing
// an LCFS-preemptive M/M/1 delivery channel.
//
// Platform indices are zero-based throughout the library. In the Bayesian
// setting, platform 0 is the entrant with a private two-point cost and
// platforms 1..n-1 are the incumbents.

#include <cstddef>
#include <string>
#include <vector>

namespace aoigame {

enum class Realization { high, low };

std::string to_string(Realization r);

class SystemParams {
 public:
  SystemParams(double mu, std::vector<double> costs);

  std::size_t n() const { return costs_.size(); }
  double mu() const { return mu_; }
  double cost(std::size_t i) const;
  const std::vector<double>& costs() const { return costs_; }

  // Stable permutation that sorts costs nondecreasing: sorted[k] = costs[order[k]].
  const std::vector<std::size_t>& cost_order() const { return order_; }

  SystemParams with_cost(std::size_t i, double c) const;
  SystemParams with_mu(double mu) const;

 private:
  double mu_;
  std::vector<double> costs_;
  std::vector<std::size_t> order_;
};

class BayesianSpec {
 public:
  BayesianSpec(double c_high, double c_low, double p_high,
               std::vector<double> incumbent_costs, double mu);

  double c_high() const { return c_high_; }
  double c_low() const { return c_low_; }
  double p_high() const { return p_high_; }
  double mu() const { return mu_; }
  const std::vector<double>& incumbent_costs() const { return incumbent_costs_; }
  std::size_t n() const { return incumbent_costs_.size() + 1; }

  // p_H c_H + (1 - p_H) c_L, recomputed on every call.
  double mean_cost() const { return p_high_ * c_high_ + (1.0 - p_high_) * c_low_; }
  double cost_of(Realization r) const { return r == Realization::high ? c_high_ : c_low_; }
  double probability_of(Realization r) const {
    return r == Realization::high ? p_high_ : 1.0 - p_high_;
  }

  // mean_cost <= c_2 <= ... <= c_N. Violations are allowed but flagged.
  bool ordering_holds() const;
  std::string ordering_warning() const;

  // Complete-information game in which platform 0's cost is fixed.
  SystemParams realized(Realization r) const;
  SystemParams with_mean_cost() const;

  BayesianSpec with_p_high(double p) const;

 private:
  double c_high_;
  double c_low_;
  double p_high_;
  std::vector<double> incumbent_costs_;
  double mu_;
};

class RateProfile {
 public:
  RateProfile() = default;
  explicit RateProfile(std::vector<double> rates);

  std::size_t n() const { return rates_.size(); }
  double operator[](std::size_t i) const { return rates_.at(i); }
  const std::vector<double>& rates() const { return rates_; }
  double total() const;
  double rival_total(std::size_t i) const;
  RateProfile with_rate(std::size_t i, double rate) const;

 private:
  std::vector<double> rates_;
};

struct BayesianRateProfile {
  double rate1_high = 0.0;
  double rate1_low = 0.0;
  std::vector<double> incumbent_rates;

  BayesianRateProfile() = default;
  BayesianRateProfile(double high, double low, std::vector<double> incumbents);

  std::size_t n() const { return incumbent_rates.size() + 1; }
  double rate1(Realization r) const { return r == Realization::high ? rate1_high : rate1_low; }
  double incumbent_total() const;
  // Full rate vector played when platform 0's realization is r.
  RateProfile realized(Realization r) const;
  // Realization-specific rates are ordered as expected for c_H > c_L.
  bool ordered() const { return rate1_high <= rate1_low; }
};

// Delta_i = (sum_j lambda_j / lambda_i) * (1 / sum_j lambda_j + 1 / mu).
double aoi(std::size_t i, const RateProfile& profile, double mu);

// AoI of a platform with own rate `own` facing total rival rate `rivals`.
double aoi_given_rivals(double own, double rivals, double mu);

// pi_i = Delta_i + c_i lambda_i.
double platform_cost(std::size_t i, const RateProfile& profile, const SystemParams& params);
double cost_given_rivals(double own, double rivals, double unit_cost, double mu);
double social_cost(const RateProfile& profile, const SystemParams& params);

double bayesian_platform1_cost(Realization r, const BayesianRateProfile& profile,
                               const BayesianSpec& spec);
// Expected cost of incumbent `i` (1 <= i < n), averaged over platform 0's
// realization.
double bayesian_incumbent_cost(std::size_t i, const BayesianRateProfile& profile,
                               const BayesianSpec& spec);
double bayesian_social_cost(const BayesianRateProfile& profile, const BayesianSpec& spec);

void require_positive_rate(double rate, const char* what);

}  // namespace aoigame

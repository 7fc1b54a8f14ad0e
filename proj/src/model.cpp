#include "aoigame/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "aoigame/errors.hpp"

namespace aoigame {

namespace {

void require_positive(double v, const std::string& what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(what + " must be positive and finite (got " + std::to_string(v) + ")");
  }
}

}  // namespace

std::string to_string(Realization r) { return r == Realization::high ? "high" : "low"; }

void require_positive_rate(double rate, const char* what) { require_positive(rate, what); }

SystemParams::SystemParams(double mu, std::vector<double> costs)
    : mu_(mu), costs_(std::move(costs)) {
  if (costs_.empty()) throw DomainError("at least one platform is required");
  require_positive(mu_, "bandwidth mu");
  for (double c : costs_) require_positive(c, "unit sampling cost");
  order_.resize(costs_.size());
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  std::stable_sort(order_.begin(), order_.end(),
                   [this](std::size_t a, std::size_t b) { return costs_[a] < costs_[b]; });
}

double SystemParams::cost(std::size_t i) const {
  if (i >= costs_.size()) throw DomainError("platform index out of range");
  return costs_[i];
}

SystemParams SystemParams::with_cost(std::size_t i, double c) const {
  auto costs = costs_;
  if (i >= costs.size()) throw DomainError("platform index out of range");
  costs[i] = c;
  return SystemParams(mu_, std::move(costs));
}

SystemParams SystemParams::with_mu(double mu) const { return SystemParams(mu, costs_); }

BayesianSpec::BayesianSpec(double c_high, double c_low, double p_high,
                           std::vector<double> incumbent_costs, double mu)
    : c_high_(c_high),
      c_low_(c_low),
      p_high_(p_high),
      incumbent_costs_(std::move(incumbent_costs)),
      mu_(mu) {
  require_positive(c_high_, "c_high");
  require_positive(c_low_, "c_low");
  if (!(c_low_ < c_high_)) throw DomainError("c_low must be strictly below c_high");
  if (!(p_high_ >= 0.0 && p_high_ <= 1.0)) throw DomainError("p_high must lie in [0, 1]");
  if (incumbent_costs_.empty()) throw DomainError("at least one incumbent platform is required");
  for (double c : incumbent_costs_) require_positive(c, "incumbent cost");
  require_positive(mu_, "bandwidth mu");
}

bool BayesianSpec::ordering_holds() const {
  if (mean_cost() > incumbent_costs_.front()) return false;
  return std::is_sorted(incumbent_costs_.begin(), incumbent_costs_.end());
}

std::string BayesianSpec::ordering_warning() const {
  if (ordering_holds()) return {};
  std::ostringstream os;
  os << "cost ordering mean_cost <= c_2 <= ... <= c_N does not hold (mean_cost=" << mean_cost()
     << ")";
  return os.str();
}

SystemParams BayesianSpec::realized(Realization r) const {
  std::vector<double> costs{cost_of(r)};
  costs.insert(costs.end(), incumbent_costs_.begin(), incumbent_costs_.end());
  return SystemParams(mu_, std::move(costs));
}

SystemParams BayesianSpec::with_mean_cost() const {
  std::vector<double> costs{mean_cost()};
  costs.insert(costs.end(), incumbent_costs_.begin(), incumbent_costs_.end());
  return SystemParams(mu_, std::move(costs));
}

BayesianSpec BayesianSpec::with_p_high(double p) const {
  return BayesianSpec(c_high_, c_low_, p, incumbent_costs_, mu_);
}

RateProfile::RateProfile(std::vector<double> rates) : rates_(std::move(rates)) {
  if (rates_.empty()) throw DomainError("rate profile must not be empty");
  for (double r : rates_) require_positive(r, "sampling rate");
}

double RateProfile::total() const { return std::accumulate(rates_.begin(), rates_.end(), 0.0); }

double RateProfile::rival_total(std::size_t i) const {
  if (i >= rates_.size()) throw DomainError("platform index out of range");
  double s = 0.0;
  for (std::size_t j = 0; j < rates_.size(); ++j) {
    if (j != i) s += rates_[j];
  }
  return s;
}

RateProfile RateProfile::with_rate(std::size_t i, double rate) const {
  auto rates = rates_;
  if (i >= rates.size()) throw DomainError("platform index out of range");
  rates[i] = rate;
  return RateProfile(std::move(rates));
}

BayesianRateProfile::BayesianRateProfile(double high, double low, std::vector<double> incumbents)
    : rate1_high(high), rate1_low(low), incumbent_rates(std::move(incumbents)) {
  require_positive(rate1_high, "rate1_high");
  require_positive(rate1_low, "rate1_low");
  if (incumbent_rates.empty()) throw DomainError("at least one incumbent rate is required");
  for (double r : incumbent_rates) require_positive(r, "incumbent rate");
}

double BayesianRateProfile::incumbent_total() const {
  return std::accumulate(incumbent_rates.begin(), incumbent_rates.end(), 0.0);
}

RateProfile BayesianRateProfile::realized(Realization r) const {
  std::vector<double> rates{rate1(r)};
  rates.insert(rates.end(), incumbent_rates.begin(), incumbent_rates.end());
  return RateProfile(std::move(rates));
}

double aoi_given_rivals(double own, double rivals, double mu) {
  require_positive(own, "own sampling rate");
  require_positive(mu, "bandwidth mu");
  if (!(rivals >= 0.0) || !std::isfinite(rivals)) {
    throw DomainError("rival rate must be nonnegative and finite");
  }
  const double total = own + rivals;
  return total / own * (1.0 / total + 1.0 / mu);
}

double aoi(std::size_t i, const RateProfile& profile, double mu) {
  if (i >= profile.n()) throw DomainError("platform index out of range");
  return aoi_given_rivals(profile[i], profile.rival_total(i), mu);
}

double cost_given_rivals(double own, double rivals, double unit_cost, double mu) {
  require_positive(unit_cost, "unit sampling cost");
  return aoi_given_rivals(own, rivals, mu) + unit_cost * own;
}

double platform_cost(std::size_t i, const RateProfile& profile, const SystemParams& params) {
  if (profile.n() != params.n()) throw DomainError("profile size does not match platform count");
  return aoi(i, profile, params.mu()) + params.cost(i) * profile[i];
}

double social_cost(const RateProfile& profile, const SystemParams& params) {
  double s = 0.0;
  for (std::size_t i = 0; i < params.n(); ++i) s += platform_cost(i, profile, params);
  return s;
}

double bayesian_platform1_cost(Realization r, const BayesianRateProfile& profile,
                               const BayesianSpec& spec) {
  if (profile.n() != spec.n()) throw DomainError("profile size does not match platform count");
  return cost_given_rivals(profile.rate1(r), profile.incumbent_total(), spec.cost_of(r),
                           spec.mu());
}

double bayesian_incumbent_cost(std::size_t i, const BayesianRateProfile& profile,
                               const BayesianSpec& spec) {
  if (profile.n() != spec.n()) throw DomainError("profile size does not match platform count");
  if (i == 0 || i >= spec.n()) throw DomainError("incumbent index must lie in [1, n)");
  const double own = profile.incumbent_rates[i - 1];
  const double others = profile.incumbent_total() - own;
  const double p = spec.p_high();
  const double aoi_high = aoi_given_rivals(own, profile.rate1_high + others, spec.mu());
  const double aoi_low = aoi_given_rivals(own, profile.rate1_low + others, spec.mu());
  return p * aoi_high + (1.0 - p) * aoi_low + spec.incumbent_costs()[i - 1] * own;
}

double bayesian_social_cost(const BayesianRateProfile& profile, const BayesianSpec& spec) {
  const double p = spec.p_high();
  double s = p * bayesian_platform1_cost(Realization::high, profile, spec) +
             (1.0 - p) * bayesian_platform1_cost(Realization::low, profile, spec);
  for (std::size_t i = 1; i < spec.n(); ++i) s += bayesian_incumbent_cost(i, profile, spec);
  return s;
}

}  // namespace aoigame

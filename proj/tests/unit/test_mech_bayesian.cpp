#include <doctest.h>

#include <cmath>
#include <random>

#include "aoigame/errors.hpp"
#include "aoigame/mech_bayesian.hpp"
#include "../oracles.hpp"

using namespace aoigame;

namespace {

const BayesianSpec kHiddenCost(100, 10, 0.1, {20}, 0.1);

BayesianSpec random_spec(std::mt19937_64& gen) {
  std::uniform_int_distribution<int> n(1, 4);
  std::uniform_real_distribution<double> lc(std::log(0.05), std::log(20.0));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double a = std::exp(lc(gen)), b = std::exp(lc(gen));
  std::vector<double> inc(static_cast<std::size_t>(n(gen)));
  for (auto& v : inc) v = std::exp(lc(gen));
  return BayesianSpec(std::max(a, b) * 1.01, std::min(a, b), u(gen), inc, std::exp(lc(gen)));
}

// Bayesian equilibrium by Gauss-Seidel on the restated best responses:
// returns (high, low, incumbents...).
std::vector<double> bayes_nash_gs(const BayesianSpec& s) {
  const std::size_t m = s.incumbent_costs().size();
  std::vector<double> x(m + 2, 1.0);
  for (int it = 0; it < 100000; ++it) {
    double change = 0.0;
    auto upd = [&](std::size_t k, double y) {
      change = std::max(change, std::fabs(y - x[k]));
      x[k] = y;
    };
    double inc = 0.0;
    for (std::size_t k = 2; k < x.size(); ++k) inc += x[k];
    upd(0, std::sqrt((1.0 + inc / s.mu()) / s.c_high()));
    upd(1, std::sqrt((1.0 + inc / s.mu()) / s.c_low()));
    for (std::size_t k = 2; k < x.size(); ++k) {
      inc = 0.0;
      for (std::size_t j = 2; j < x.size(); ++j) inc += x[j];
      const double e = s.p_high() * x[0] + (1.0 - s.p_high()) * x[1];
      upd(k, std::sqrt((1.0 + (e + inc - x[k]) / s.mu()) / s.incumbent_costs()[k - 2]));
    }
    if (change < 1e-14) break;
  }
  return x;
}

struct Margins {
  std::function<double(double)> low, high;
  std::vector<std::function<double(double)>> incumbents;
};

// Deviation margins at the mean-cost optimum as functions of delta.
Margins margins(const BayesianSpec& s) {
  std::vector<double> c{s.mean_cost()};
  c.insert(c.end(), s.incumbent_costs().begin(), s.incumbent_costs().end());
  const auto hat = oracle::optimum_gs(c, s.mu());
  const auto ne = bayes_nash_gs(s);
  const double mu = s.mu(), p = s.p_high();
  const double total = std::accumulate(hat.begin(), hat.end(), 0.0);
  double inc_ne = 0.0;
  for (std::size_t k = 2; k < ne.size(); ++k) inc_ne += ne[k];
  const double pun0 = p * oracle::cost(ne[0], inc_ne, s.c_high(), mu) +
                      (1.0 - p) * oracle::cost(ne[1], inc_ne, s.c_low(), mu);
  Margins m;
  auto platform0 = [=](double cr) {
    const double r = total - hat[0];
    const double b = std::sqrt((1.0 + r / mu) / cr);
    return [=](double d) {
      const double w = d / (1.0 - d);
      return oracle::cost(b, r, cr, mu) + w * pun0 - oracle::cost(hat[0], r, cr, mu) -
             w * oracle::cost(hat[0], r, s.mean_cost(), mu);
    };
  };
  m.low = platform0(s.c_low());
  m.high = platform0(s.c_high());
  for (std::size_t i = 1; i < hat.size(); ++i) {
    const double ci = c[i];
    const double r = total - hat[i];
    const double b = std::sqrt((1.0 + r / mu) / ci);
    const double own = ne[i + 1];
    const double others = inc_ne - own;
    const double pun = p * oracle::cost(own, ne[0] + others, ci, mu) +
                       (1.0 - p) * oracle::cost(own, ne[1] + others, ci, mu);
    m.incumbents.push_back([=](double d) {
      return oracle::deviation_margin(b, hat[i], r, ci, mu, pun, d);
    });
  }
  return m;
}

}  // namespace

TEST_CASE("approximate optimum examples") {
  const BayesianSpec sym(1.6, 0.4, 0.5, {1.0, 1.0}, 0.7);
  const auto hat = approx_social_optimum(sym).profile;
  for (std::size_t i = 0; i < 3; ++i) CHECK(hat[i] == doctest::Approx(1.0).epsilon(1e-9));

  for (double p : {0.0, 1.0}) {
    const auto s = kHiddenCost.with_p_high(p);
    const auto a = approx_social_optimum(s).profile;
    const auto b = social_optimum(s.realized(p == 1.0 ? Realization::high : Realization::low)).profile;
    CHECK(a[0] == doctest::Approx(b[0]));
    CHECK(a[1] == doctest::Approx(b[1]));
  }
  const auto f = approx_social_optimum(kHiddenCost).profile;
  CHECK(std::fabs(f[0] / f[1] - 1.0) <= 0.1);
  CHECK(f[0] > f[1]);
}

TEST_CASE("property: under-sampling of the approximate optimum") {
  std::mt19937_64 gen(43);
  for (int k = 0; k < 100; ++k) {
    const auto s = random_spec(gen);
    const auto hat = approx_social_optimum(s).profile;
    const auto opt = bayesian_social_optimum(s).profile;
    const double p = s.p_high();
    CHECK(hat[0] <= p * opt.rate1_high + (1.0 - p) * opt.rate1_low + 1e-8);
    for (std::size_t i = 1; i < s.n(); ++i) CHECK(hat[i] <= opt.incumbent_rates[i - 1] + 1e-8);
  }
}

TEST_CASE("hidden-cost thresholds") {
  const auto t = approx_thresholds(kHiddenCost);
  CHECK(std::fabs(t.platform1_low - 0.7) <= 0.05);
  CHECK(std::fabs(t.incumbents[0] - 0.3) <= 0.05);
  CHECK(t.platform1_binding() == Realization::low);
  CHECK(t.platform1_max() == t.platform1_low);
  CHECK(t.incumbents[0] <= t.platform1_max());
}

TEST_CASE("thresholds agree with bisection on the deviation margin") {
  for (const auto& s : {kHiddenCost, BayesianSpec(1.6, 0.4, 0.5, {1.0}, 1.0),
                        BayesianSpec(3.0, 1.0, 0.3, {2.0, 2.5}, 0.5)}) {
    const auto t = approx_thresholds(s);
    const auto m = margins(s);
    CHECK(std::fabs(t.platform1_low - oracle::bisect(m.low, 1e-9, 1.0 - 1e-9)) <= 1e-6);
    CHECK(std::fabs(t.platform1_high - oracle::bisect(m.high, 1e-9, 1.0 - 1e-9)) <= 1e-6);
    for (std::size_t i = 0; i < t.incumbents.size(); ++i) {
      CHECK(std::fabs(t.incumbents[i] - oracle::bisect(m.incumbents[i], 1e-9, 1.0 - 1e-9)) <= 1e-6);
    }
  }
}

TEST_CASE("degenerate distribution reduces to the complete-information threshold") {
  const auto s = BayesianSpec(1.5, 0.5, 1.0, {1.0}, 1.0);
  const auto t = approx_thresholds(s);
  const auto c = delta_thresholds(SystemParams(1.0, {1.5, 1.0}));
  CHECK(t.platform1_high == doctest::Approx(c[0]).epsilon(1e-8));
  CHECK(t.incumbents[0] == doctest::Approx(c[1]).epsilon(1e-8));
}

TEST_CASE("cheat incentive") {
  const auto big = cheat_incentive(BayesianSpec(2.0, 1.0, 0.5, {1.5}, 1e6));
  CHECK(big.applicable);
  CHECK_FALSE(big.profitable);
  CHECK(big.condition_holds);
  CHECK(big.s < 1e-5);

  CHECK_FALSE(cheat_incentive(kHiddenCost.with_p_high(1.0)).applicable);

  // Direct evaluation of the two one-shot costs.
  const auto rep = cheat_incentive(kHiddenCost);
  const auto opt = bayesian_social_optimum(kHiddenCost).profile;
  const double r = opt.incumbent_total();
  CHECK(rep.truthful_cost == doctest::Approx(oracle::cost(opt.rate1_high, r, 100.0, 0.1)));
  CHECK(rep.cheat_cost == doctest::Approx(oracle::cost(opt.rate1_low, r, 100.0, 0.1)));
  CHECK(rep.profitable == (rep.cheat_cost < rep.truthful_cost));

  std::mt19937_64 gen(47);
  for (int k = 0; k < 100; ++k) {
    const auto c = cheat_incentive(random_spec(gen));
    if (!c.applicable) continue;
    CHECK(c.profitable == !c.condition_holds);
  }
  // A spec where the cheat pays.
  const auto pays = cheat_incentive(BayesianSpec(2.0, 1.0, 0.5, {1.5}, 0.1));
  CHECK(pays.profitable);
  CHECK_FALSE(pays.condition_holds);
}

TEST_CASE("hidden-cost cooperation profiles") {
  const auto hat = approx_social_optimum(kHiddenCost).profile;
  const auto large = approx_cooperation_profile(kHiddenCost, 0.9);
  CHECK(large.regime.kind == Regime::Kind::large);
  CHECK(large.profile[0] == doctest::Approx(hat[0]));
  CHECK(large.profile[1] == doctest::Approx(hat[1]));

  const auto mid = approx_cooperation_profile(kHiddenCost, 0.5);
  CHECK(mid.regime.kind == Regime::Kind::medium);
  CHECK(mid.profile[1] == doctest::Approx(hat[1]).epsilon(1e-12));
  CHECK(mid.profile[0] > hat[0]);
  CHECK(mid.profile[0] < mid.reference_nash.rate1_low);
  CHECK(mid.platform1_branch == Realization::low);
  CHECK(mid.profile[0] == doctest::Approx(std::max(mid.root_low, mid.root_high)));

  // Vanishing patience: platform 0 plays its low-cost best response and
  // incumbents best-respond to it.
  const auto tiny = approx_cooperation_profile(kHiddenCost, 1e-4);
  const auto lo = nash_equilibrium(kHiddenCost.realized(Realization::low)).profile;
  CHECK(std::fabs(tiny.profile[0] / lo[0] - 1.0) <= 1e-2);
  CHECK(std::fabs(tiny.profile[1] / lo[1] - 1.0) <= 1e-2);
}

TEST_CASE("approximate profiles over a delta grid") {
  for (const auto& s : {kHiddenCost, BayesianSpec(1.5, 0.5, 0.5, {1.0}, 1.0)}) {
    std::vector<double> prev;
    for (int k = 0; k < 100; ++k) {
      const double d = 0.005 + 0.99 * k / 99.0;
      const auto plan = approx_cooperation_profile(s, d);
      for (std::size_t i = 0; i < s.n(); ++i) {
        CHECK(plan.profile[i] >= plan.reference_hat[i] - 1e-9);
        if (!prev.empty()) CHECK(plan.profile[i] <= prev[i] + 1e-9);
        CHECK(plan.residuals[i] <= 1e-8);
      }
      if (d >= plan.thresholds.max_all()) CHECK(plan.regime.kind == Regime::Kind::large);
      prev = plan.profile.rates();
    }
  }
}

TEST_CASE("degenerate distribution reduces to the complete-information plan") {
  const auto s = BayesianSpec(1.5, 0.5, 0.0, {1.0}, 1.0);
  for (double d : {0.1, 0.3, 0.6}) {
    const auto a = approx_cooperation_profile(s, d);
    const auto b = cooperation_profile(SystemParams(1.0, {0.5, 1.0}), d);
    CHECK(a.profile[0] == doctest::Approx(b.profile[0]).epsilon(1e-8));
    CHECK(a.profile[1] == doctest::Approx(b.profile[1]).epsilon(1e-8));
  }
}

TEST_CASE("approximation ratio") {
  std::vector<BayesianSpec> fam;
  for (std::size_t n = 2; n <= 6; ++n) fam.emplace_back(1.5, 0.5, 0.5, std::vector<double>(n - 1, 1.0), 1.0);
  const auto rows = approximation_ratio(fam);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const double n = static_cast<double>(rows[k].n);
    CHECK(rows[k].approx_ratio >= 1.0);
    CHECK(rows[k].approx_ratio < n / (n - 1.0));
    if (k > 0) {
      CHECK(rows[k].approx_ratio < rows[k - 1].approx_ratio);
      CHECK(rows[k].poa_ratio > rows[k - 1].poa_ratio);
    }
  }
  const auto sym = approximation_ratio({BayesianSpec(1.6, 0.4, 0.5, {1.0}, 1.0)});
  CHECK(sym[0].approx_ratio < 2.0);
  for (double p : {0.0, 1.0}) {
    const auto r = approximation_ratio({BayesianSpec(1.5, 0.5, p, {1.0}, 1.0)});
    CHECK(r[0].approx_ratio == doctest::Approx(1.0).epsilon(1e-10));
  }
}

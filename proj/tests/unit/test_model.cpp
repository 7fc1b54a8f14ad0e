#include <doctest.h>

#include <cmath>
#include <random>

#include "aoigame/errors.hpp"
#include "aoigame/model.hpp"
#include "aoigame/queue_sim.hpp"
#include "../oracles.hpp"

using namespace aoigame;

TEST_CASE("aoi examples") {
  CHECK(aoi(0, RateProfile({1.0}), 1.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(aoi(0, RateProfile({1.0, 1.0}), 1.0) == doctest::Approx(3.0).epsilon(1e-14));
  const RateProfile p({0.5, 1.5});
  CHECK(aoi(0, p, 2.0) == doctest::Approx(4.0).epsilon(1e-14));
  // Cross-check against the discrete-event estimate.
  const auto est = simulate(p, 2.0, 1000000, 11);
  CHECK(std::fabs(est.platforms[0].estimate / 4.0 - 1.0) < 0.02);
}

TEST_CASE("aoi rejects non-positive inputs") {
  CHECK_THROWS_AS(RateProfile({1.0, 0.0}), DomainError);
  CHECK_THROWS_AS(aoi(0, RateProfile({1.0}), 0.0), DomainError);
  CHECK_THROWS_AS(aoi(2, RateProfile({1.0, 1.0}), 1.0), DomainError);
  CHECK_THROWS_AS(SystemParams(1.0, {1.0, -1.0}), DomainError);
  CHECK_THROWS_AS(BayesianSpec(1.0, 2.0, 0.5, {1.0}, 1.0), DomainError);
  CHECK_THROWS_AS(BayesianSpec(2.0, 1.0, 1.5, {1.0}, 1.0), DomainError);
}

TEST_CASE("platform and social cost examples") {
  const SystemParams p(1.0, {1.0, 1.0});
  CHECK(platform_cost(0, RateProfile({1.0, 1.0}), p) == doctest::Approx(4.0));
  CHECK(platform_cost(0, RateProfile({1.0}), SystemParams(1.0, {1.0})) == doctest::Approx(3.0));
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  // Symmetric equilibrium from c l^2 = 1 + l / mu.
  CHECK(platform_cost(0, RateProfile({phi, phi}), p) == doctest::Approx(4.2360680).epsilon(1e-8));
  CHECK(social_cost(RateProfile({1.0, 1.0}), p) == doctest::Approx(8.0).epsilon(1e-14));
  CHECK(social_cost(RateProfile({1.0}), SystemParams(1.0, {1.0})) == doctest::Approx(3.0));
  CHECK(social_cost(RateProfile({phi, phi}), p) ==
        doctest::Approx(oracle::social({phi, phi}, {1.0, 1.0}, 1.0)).epsilon(1e-14));
  CHECK(social_cost(RateProfile({phi, phi}), p) == doctest::Approx(8.472136).epsilon(1e-7));
}

TEST_CASE("bayesian cost examples") {
  const BayesianRateProfile prof(1.0, 1.0, {1.0});
  CHECK(bayesian_platform1_cost(Realization::high, prof, BayesianSpec(2.0, 0.5, 0.3, {1.0}, 1.0)) ==
        doctest::Approx(5.0));
  CHECK(bayesian_platform1_cost(Realization::low, prof, BayesianSpec(2.0, 0.5, 0.3, {1.0}, 1.0)) ==
        doctest::Approx(3.5));

  const BayesianRateProfile q(1.0, 2.0, {1.0});
  const BayesianSpec s(2.0, 0.5, 0.5, {1.0}, 1.0);
  CHECK(bayesian_incumbent_cost(1, q, s) == doctest::Approx(4.5));
  CHECK_THROWS_AS(bayesian_incumbent_cost(0, q, s), DomainError);

  // Degenerate distributions.
  const BayesianSpec s0 = s.with_p_high(0.0), s1 = s.with_p_high(1.0);
  CHECK(bayesian_incumbent_cost(1, q, s0) ==
        doctest::Approx(platform_cost(1, RateProfile({2.0, 1.0}), s0.realized(Realization::low))));
  CHECK(bayesian_incumbent_cost(1, q, s1) ==
        doctest::Approx(platform_cost(1, RateProfile({1.0, 1.0}), s1.realized(Realization::high))));
  CHECK(bayesian_social_cost(q, s0) ==
        doctest::Approx(social_cost(q.realized(Realization::low), s0.realized(Realization::low))));
  CHECK(bayesian_social_cost(q, s1) ==
        doctest::Approx(social_cost(q.realized(Realization::high), s1.realized(Realization::high))));
}

TEST_CASE("bayesian costs match a Monte-Carlo average over realizations") {
  const BayesianSpec s(1.5, 0.5, 0.5, {1.0}, 1.0);
  const BayesianRateProfile q(0.8, 1.3, {0.9});
  std::mt19937_64 gen(5);
  std::bernoulli_distribution high(s.p_high());
  const int n = 200000;
  double sum = 0.0, sq = 0.0, inc = 0.0;
  for (int k = 0; k < n; ++k) {
    const bool h = high(gen);
    const double l1 = h ? 0.8 : 1.3;
    const double c1 = h ? 1.5 : 0.5;
    const double v = oracle::social({l1, 0.9}, {c1, 1.0}, 1.0);
    sum += v;
    sq += v * v;
    inc += oracle::cost(0.9, l1, 1.0, 1.0);
  }
  const double mean = sum / n;
  const double se = std::sqrt((sq / n - mean * mean) / n);
  CHECK(std::fabs(bayesian_social_cost(q, s) - mean) <= 3.0 * se);
  CHECK(std::fabs(bayesian_incumbent_cost(1, q, s) - inc / n) < 0.01);
}

TEST_CASE("bayesian social cost decomposes into its terms") {
  const BayesianSpec s(3.0, 0.7, 0.35, {1.2, 2.0}, 0.8);
  const BayesianRateProfile q(0.6, 1.1, {0.9, 0.7});
  const double direct = oracle::bayes_social({0.6, 1.1, 0.9, 0.7}, 3.0, 0.7, 0.35, {1.2, 2.0}, 0.8);
  const double terms = 0.35 * bayesian_platform1_cost(Realization::high, q, s) +
                       0.65 * bayesian_platform1_cost(Realization::low, q, s) +
                       bayesian_incumbent_cost(1, q, s) + bayesian_incumbent_cost(2, q, s);
  CHECK(bayesian_social_cost(q, s) == doctest::Approx(direct).epsilon(1e-13));
  CHECK(bayesian_social_cost(q, s) == doctest::Approx(terms).epsilon(1e-13));
}

TEST_CASE("aoi monotonicity and cost convexity on a grid") {
  const double h = 1e-4;
  for (double own : {0.1, 0.5, 1.0, 3.0}) {
    for (double riv : {0.0, 0.3, 2.0}) {
      for (double mu : {0.1, 1.0, 5.0}) {
        CHECK(aoi_given_rivals(own + h, riv, mu) < aoi_given_rivals(own, riv, mu));
        CHECK(aoi_given_rivals(own, riv + h, mu) > aoi_given_rivals(own, riv, mu));
        CHECK(aoi_given_rivals(own, riv, mu + h) < aoi_given_rivals(own, riv, mu));
        for (double c : {0.1, 1.0, 10.0}) {
          const double d2 = cost_given_rivals(own + h, riv, c, mu) - 2.0 * cost_given_rivals(own, riv, c, mu) +
                            cost_given_rivals(own - h, riv, c, mu);
          CHECK(d2 > 0.0);
        }
      }
    }
  }
}

TEST_CASE("permuting identical-cost platforms permutes costs") {
  const SystemParams p(1.3, {1.0, 2.0, 2.0});
  const RateProfile a({0.7, 0.4, 0.9}), b({0.7, 0.9, 0.4});
  CHECK(platform_cost(1, a, p) == doctest::Approx(platform_cost(2, b, p)));
  CHECK(platform_cost(2, a, p) == doctest::Approx(platform_cost(1, b, p)));
  CHECK(social_cost(a, p) == doctest::Approx(social_cost(b, p)));
}

TEST_CASE("cost order permutation and ordering flag") {
  const SystemParams p(1.0, {3.0, 1.0, 2.0, 1.0});
  CHECK(p.cost_order() == std::vector<std::size_t>{1, 3, 2, 0});
  CHECK(p.costs() == std::vector<double>{3.0, 1.0, 2.0, 1.0});
  const BayesianSpec ok(100, 10, 0.1, {20}, 0.1);
  CHECK(ok.mean_cost() == doctest::Approx(19.0));
  CHECK(ok.ordering_holds());
  const BayesianSpec bad(100, 10, 0.5, {20}, 0.1);
  CHECK_FALSE(bad.ordering_holds());
  CHECK_FALSE(bad.ordering_warning().empty());
}

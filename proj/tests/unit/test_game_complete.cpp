#include <doctest.h>

#include <cmath>
#include <random>

#include "aoigame/errors.hpp"
#include "aoigame/game_complete.hpp"
#include "../oracles.hpp"

using namespace aoigame;

namespace {

const double kPhi = (1.0 + std::sqrt(5.0)) / 2.0;

double nash_residual(const RateProfile& x, const SystemParams& p, std::size_t i) {
  return p.cost(i) * x[i] * x[i] - 1.0 - x.rival_total(i) / p.mu();
}

double optimum_residual(const RateProfile& x, const SystemParams& p, std::size_t i) {
  double inv = 0.0;
  for (std::size_t j = 0; j < p.n(); ++j) {
    if (j != i) inv += 1.0 / x[j];
  }
  return x[i] * x[i] * (p.cost(i) + inv / p.mu()) - 1.0 - x.rival_total(i) / p.mu();
}

SystemParams random_params(std::mt19937_64& gen) {
  std::uniform_int_distribution<int> n(1, 5);
  std::uniform_real_distribution<double> lc(std::log(0.05), std::log(20.0));
  std::uniform_real_distribution<double> lm(std::log(0.05), std::log(20.0));
  std::vector<double> c(static_cast<std::size_t>(n(gen)));
  for (auto& v : c) v = std::exp(lc(gen));
  return SystemParams(std::exp(lm(gen)), c);
}

}  // namespace

TEST_CASE("best response examples") {
  CHECK(best_response(0.0, 1.0, 1.0) == doctest::Approx(1.0));
  CHECK(best_response(1.0, 1.0, 1.0) == doctest::Approx(1.4142136).epsilon(1e-7));
  CHECK(best_response(1.0, 1.5, 1.0) == doctest::Approx(std::sqrt(4.0 / 3.0)).epsilon(1e-12));
  CHECK_THROWS_AS(best_response(-1.0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(best_response(1.0, 0.0, 1.0), DomainError);
  // Best response minimizes the one-shot cost.
  const double br = best_response(0.7, 1.3, 0.4);
  for (double d : {-1e-3, 1e-3}) {
    CHECK(oracle::cost(br, 0.7, 1.3, 0.4) < oracle::cost(br + d, 0.7, 1.3, 0.4));
  }
}

TEST_CASE("nash examples") {
  CHECK(nash_equilibrium(SystemParams(1.0, {1.0})).profile[0] == doctest::Approx(1.0));
  const auto sym = nash_equilibrium(SystemParams(1.0, {1.0, 1.0}));
  CHECK(std::fabs(sym.profile[0] - 1.6180340) <= 1e-7);
  CHECK(std::fabs(sym.profile[1] - kPhi) <= 1e-8);

  const SystemParams p(1.0, {1.0, 1.5});
  const auto ne = nash_equilibrium(p);
  const auto grid = oracle::grid_nash_2d(1.0, 1.5, 1.0);
  CHECK(std::fabs(ne.profile[0] - grid[0]) <= 1e-3);
  CHECK(std::fabs(ne.profile[1] - grid[1]) <= 1e-3);
  double sum = 0.0;
  for (double v : ne.per_platform_costs) sum += v;
  CHECK(ne.social == doctest::Approx(sum).epsilon(1e-14));
}

TEST_CASE("social optimum examples") {
  const auto sym = social_optimum(SystemParams(1.0, {1.0, 1.0}));
  CHECK(sym.profile[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(sym.profile[1] == doctest::Approx(1.0).epsilon(1e-10));
  // Symmetric closed form 2N sqrt(c) + N^2 / mu.
  CHECK(sym.social == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(social_optimum(SystemParams(1.0, {1.0})).profile[0] == doctest::Approx(1.0));

  const SystemParams p(1.0, {1.0, 1.5});
  const auto so = social_optimum(p);
  const auto grid = oracle::grid_optimum_2d(1.0, 1.5, 1.0);
  CHECK(std::fabs(so.profile[0] - grid[0]) <= 1e-3);
  CHECK(std::fabs(so.profile[1] - grid[1]) <= 1e-3);
  CHECK(so.social < nash_equilibrium(p).social);
  CHECK(so.social <= oracle::social(grid, {1.0, 1.5}, 1.0) + 1e-12);
}

TEST_CASE("symmetric closed forms for larger n") {
  for (std::size_t n : {2u, 3u, 5u}) {
    for (double c : {0.5, 2.0}) {
      for (double mu : {0.5, 3.0}) {
        const SystemParams p(mu, std::vector<double>(n, c));
        const auto so = social_optimum(p);
        const double N = static_cast<double>(n);
        CHECK(so.profile[0] == doctest::Approx(1.0 / std::sqrt(c)).epsilon(1e-10));
        CHECK(so.social == doctest::Approx(2.0 * N * std::sqrt(c) + N * N / mu).epsilon(1e-10));
        const auto ne = nash_equilibrium(p);
        // c l^2 = 1 + (N - 1) l / mu.
        const double b = (N - 1.0) / mu;
        CHECK(ne.profile[0] == doctest::Approx((b + std::sqrt(b * b + 4.0 * c)) / (2.0 * c)).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("poa examples") {
  const auto r = poa_ratio(SystemParams(1.0, {1.0, 1.0}));
  REQUIRE(r.ratio);
  CHECK(std::fabs(*r.ratio - 1.0590170) <= 1e-6);
  CHECK(*poa_ratio(SystemParams(2.0, {3.0})).ratio == doctest::Approx(1.0).epsilon(1e-12));
  double prev = 1.0;
  for (double c : {1e-1, 1e-2, 1e-3}) {
    const auto v = poa_ratio(SystemParams(1.0, {c, 1.0}));
    REQUIRE(v.ratio);
    CHECK(*v.ratio > prev);
    prev = *v.ratio;
  }
}

TEST_CASE("poa reports unbounded when the rate cap is breached") {
  SolveOptions o;
  o.divergence_cap = 50.0;
  const auto r = poa_ratio(SystemParams(1.0, {1e-4, 1.0}), o);
  CHECK(r.unbounded());
}

TEST_CASE("comparative statics signs") {
  const SystemParams p(1.0, {1.0, 1.0});
  CHECK(comparative_statics_check(p, 0, Perturbation::own_cost).observed_sign == -1);
  CHECK(comparative_statics_check(p, 0, Perturbation::mu).observed_sign == -1);
  CHECK(comparative_statics_check(p, 0, Perturbation::rival_cost, 1).observed_sign == -1);
  CHECK(comparative_statics_check(p, 0, Perturbation::rival_rate, 1).observed_sign == 1);
  std::mt19937_64 gen(3);
  for (int k = 0; k < 20; ++k) {
    auto q = random_params(gen);
    if (q.n() < 2) q = SystemParams(q.mu(), {q.cost(0), 1.0});
    for (auto kind : {Perturbation::own_cost, Perturbation::rival_cost, Perturbation::mu,
                      Perturbation::rival_rate}) {
      CHECK(comparative_statics_check(q, 0, kind, 1).matches());
    }
  }
}

TEST_CASE("property: first-order conditions and over-sampling") {
  std::mt19937_64 gen(17);
  for (int k = 0; k < 100; ++k) {
    const auto p = random_params(gen);
    const auto ne = nash_equilibrium(p);
    const auto so = social_optimum(p);
    for (std::size_t i = 0; i < p.n(); ++i) {
      CHECK(std::fabs(nash_residual(ne.profile, p, i)) <= 1e-8 * (1.0 + ne.profile[i] * ne.profile[i]));
      CHECK(std::fabs(optimum_residual(so.profile, p, i)) <= 1e-8 * (1.0 + ne.profile[i] * ne.profile[i]));
      CHECK(ne.profile[i] >= so.profile[i] - 1e-8);
    }
    CHECK(ne.social >= so.social - 1e-8);
    // Gradient vanishes at the optimum.
    for (double g : social_cost_gradient(so.profile, p)) CHECK(std::fabs(g) <= 1e-6);
  }
}

TEST_CASE("property: optimum beats a Nelder-Mead search") {
  std::mt19937_64 gen(23);
  for (int k = 0; k < 10; ++k) {
    const auto p = random_params(gen);
    const auto so = social_optimum(p);
    auto f = [&](const std::vector<double>& x) { return oracle::social(x, p.costs(), p.mu()); };
    const auto x = oracle::minimize_restarts(f, std::vector<double>(p.n(), 1.0));
    CHECK(so.social <= f(x) + 1e-9 * f(x));
    for (std::size_t i = 0; i < p.n(); ++i) CHECK(std::fabs(so.profile[i] - x[i]) <= 1e-3 * (1.0 + x[i]));
  }
}

TEST_CASE("nash is independent of start point") {
  const SystemParams p(0.7, {0.3, 1.1, 2.5});
  SolveOptions damp;
  damp.damping = 0.3;
  const auto a = nash_equilibrium(p);
  const auto b = nash_equilibrium(p, damp);
  for (std::size_t i = 0; i < 3; ++i) CHECK(a.profile[i] == doctest::Approx(b.profile[i]).epsilon(1e-9));
}

#include "doctest.h"

#include <cmath>
#include <limits>

#include "mcinv/nash.hpp"
#include "mcinv/oracle.hpp"
#include "mcinv/stackelberg.hpp"
#include "mcinv/stats.hpp"
#include "test_helpers.hpp"

using namespace mcinv;

TEST_CASE("single follower equals its best response exactly") {
  const MarketConfig cfg = test::reference_market_half_spill();
  DemandModel model = test::uniform_model(2);
  const SampleSet samples = sample(model, 50000, 103);
  const double leader = 40.0;
  const FollowerEquilibrium fe = follower_equilibrium(cfg, model, samples, leader, 1e-4);
  REQUIRE(fe.converged);
  StockVector s = StockVector::zeros(2);
  s[0] = leader;
  CHECK(fe.stocks[0] == best_response_retailer(cfg, model, samples, s, 1));
}

TEST_CASE("zero substitution: followers ignore the leader") {
  const MarketConfig cfg = test::zero_alpha(test::reference_market());
  DemandModel model = test::uniform_model(2);
  const SampleSet samples = sample(model, 50000, 107);
  const FollowerEquilibrium at_zero = follower_equilibrium(cfg, model, samples, 0.0, 1e-4);
  const FollowerEquilibrium at_high = follower_equilibrium(cfg, model, samples, 90.0, 1e-4);
  CHECK(at_zero.stocks[0] == at_high.stocks[0]);

  const SlopeEstimate slope = follower_slope(cfg, model, samples, 50.0, 1, 1.0, 1e-4);
  CHECK(slope.slope == 0.0);
}

TEST_CASE("two followers with cross substitution settle in a few sweeps") {
  MarketConfig cfg;
  cfg.n = 2;
  cfg.c = 2.0;
  cfg.p_m = 10.0;
  cfg.h_m = 1.0;
  cfg.w = {5.0, 4.5};
  cfg.p_r = {9.0, 8.0};
  cfg.h_r = {1.0, 0.8};
  cfg.alpha = {{0.0, 0.3, 0.2}, {0.25, 0.0, 0.2}, {0.2, 0.25, 0.0}};
  cfg = validate_config(cfg);
  DemandModel model = test::uniform_model(3);
  const SampleSet samples = sample(model, 50000, 109);
  const FollowerEquilibrium fe = follower_equilibrium(cfg, model, samples, 30.0, 1e-3);
  REQUIRE(fe.converged);
  // Fixed point: each follower is a best response given the other.
  StockVector s{{30.0, fe.stocks[0], fe.stocks[1]}};
  CHECK(std::abs(best_response_retailer(cfg, model, samples, s, 1) - fe.stocks[0]) <= 1e-3);
  CHECK(std::abs(best_response_retailer(cfg, model, samples, s, 2) - fe.stocks[1]) <= 1e-3);
}

TEST_CASE("two-follower equilibrium matches the exhaustive grid search") {
  MarketConfig cfg;
  cfg.n = 2;
  cfg.c = 2.0;
  cfg.p_m = 10.0;
  cfg.h_m = 1.0;
  cfg.w = {5.0, 4.5};
  cfg.p_r = {9.0, 8.0};
  cfg.h_r = {1.0, 0.8};
  cfg.alpha = {{0.0, 0.3, 0.2}, {0.25, 0.0, 0.2}, {0.2, 0.25, 0.0}};
  cfg = validate_config(cfg);
  const std::vector<Marginal> marginals = {
      Marginal::discrete_dist({15.0, 45.0, 75.0}, {0.25, 0.5, 0.25}),
      Marginal::discrete_dist({10.0, 35.0, 60.0}, {0.25, 0.5, 0.25}),
      Marginal::discrete_dist({12.0, 30.0, 48.0}, {0.5, 0.25, 0.25})};
  const DemandModel model = discrete_model(marginals);
  DiscreteScenario ds;
  ds.cfg = cfg;
  ds.support = product_support(marginals);
  ds.grid = test::grid_linspace(cfg, 110.0, 23);
  ds.validate();

  const double leader = 40.0;
  const auto grid_eqs = grid_follower_nash(ds, leader, 1e-9);
  REQUIRE_FALSE(grid_eqs.empty());

  const SampleSet samples = sample(model, 100000, 173);
  const FollowerEquilibrium fe = follower_equilibrium(cfg, model, samples, leader, 1e-3);
  REQUIRE(fe.converged);

  const double step = ds.grid[1][1] - ds.grid[1][0];
  bool matched = false;
  for (const auto& eq : grid_eqs)
    matched = matched || (std::abs(fe.stocks[0] - eq[0]) <= step + 1e-9 &&
                          std::abs(fe.stocks[1] - eq[1]) <= step + 1e-9);
  CHECK(matched);
}

TEST_CASE("follower map is nonincreasing in the leader's stock") {
  const MarketConfig cfg = test::reference_market_half_spill();
  DemandModel model = test::uniform_model(2);
  const SampleSet samples = sample(model, 50000, 179);
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= 20; ++k) {
    const double leader = 100.0 * k / 20.0;
    const FollowerEquilibrium fe = follower_equilibrium(cfg, model, samples, leader, 1e-4);
    // Composite demand falls pointwise as the leader stocks more, so every
    // order statistic (hence the quantile) is monotone.
    CHECK(fe.stocks[0] <= prev + 1e-12);
    prev = fe.stocks[0];
  }
}

TEST_CASE("follower slope sits in the substitution band") {
  const MarketConfig cfg = test::reference_market_half_spill();
  DemandModel model = test::uniform_model(2);
  const SampleSet samples = sample(model, 100000, 113);
  for (double leader : {20.0, 45.0, 70.0}) {
    const SlopeEstimate est = follower_slope(cfg, model, samples, leader, 1, 1.0, 1e-4);
    CHECK(est.slope >= -0.5 - 4.0 * est.noise);
    CHECK(est.slope <= 4.0 * est.noise);
  }
}

TEST_CASE("follower slope against the discretized best-response oracle") {
  // Composite retailer demand at leader level L is U(0,100) + 0.5 (U(0,100)-L)^+;
  // the oracle evaluates the 0.8-quantile on a fine discretization.
  const MarketConfig cfg = test::reference_market_half_spill();
  DemandModel model = test::uniform_model(2);
  const SampleSet samples = sample(model, 100000, 127);

  const auto oracle_br = [&](double leader) {
    const int grid = 1500;
    std::vector<double> sums;
    sums.reserve(static_cast<std::size_t>(grid) * grid);
    for (int a = 0; a < grid; ++a)
      for (int b = 0; b < grid; ++b) {
        const double dm = (a + 0.5) * 100.0 / grid;
        const double dr = (b + 0.5) * 100.0 / grid;
        sums.push_back(dr + 0.5 * std::max(dm - leader, 0.0));
      }
    return empirical_quantile_inplace(sums, 0.8);
  };

  const double leader = 40.0;
  const double step = 4.0;
  const double oracle_slope = (oracle_br(leader + step) - oracle_br(leader - step)) / (2.0 * step);
  const SlopeEstimate est = follower_slope(cfg, model, samples, leader, 1, step, 1e-4);
  CHECK(std::abs(est.slope - oracle_slope) <= 4.0 * est.noise + 0.02);
}

TEST_CASE("curvature condition: no spill means a weakly held zero") {
  MarketConfig cfg = test::reference_market();
  cfg.alpha[0][1] = 0.0;
  cfg = validate_config(cfg);
  DemandModel model = test::uniform_model(2);
  const SampleSet samples = sample(model, 50000, 131);
  const CurvatureCondition cc =
      curvature_condition_check(cfg, model, samples, StockVector{{50.0, 60.0}}, 1);
  CHECK_FALSE(cc.inconclusive);
  CHECK(cc.value == 0.0);
  CHECK(cc.holds);
}

TEST_CASE("curvature condition: flat conditional density reduces to two terms") {
  // Leader stocked near the top of its support: the conditional spill into
  // the retailer is narrow, so the conditional composite density is nearly
  // flat at mid-range stocks and the derivative term is negligible.
  const MarketConfig cfg = test::reference_market_half_spill();
  DemandModel model = test::uniform_model(2);
  const SampleSet samples = sample(model, 100000, 137);
  const CurvatureCondition cc =
      curvature_condition_check(cfg, model, samples, StockVector{{88.0, 50.0}}, 1);
  REQUIRE_FALSE(cc.inconclusive);
  CHECK(std::abs(cc.term_density_slope) <=
        0.1 * (std::abs(cc.term_density_square) + std::abs(cc.term_coupling)));
  CHECK(cc.value ==
        doctest::Approx(cc.term_density_slope + cc.term_density_square - cc.term_coupling));
}

TEST_CASE("curvature condition needs enough conditioning rows") {
  const MarketConfig cfg = test::reference_market_half_spill();
  DemandModel model = test::uniform_model(2);
  const SampleSet samples = sample(model, 20000, 139);
  // Leader stock above the whole support: no conditioning rows remain.
  const CurvatureCondition cc =
      curvature_condition_check(cfg, model, samples, StockVector{{101.0, 50.0}}, 1);
  CHECK(cc.inconclusive);
}

TEST_CASE("zero substitution: leader search reproduces the simultaneous game") {
  const MarketConfig cfg = test::zero_alpha(test::reference_market());
  DemandModel model = test::uniform_model(2);
  const SampleSet samples = sample(model, 100000, 149);
  const EquilibriumReport nash = nash_solve(cfg, model, samples);
  const StackelbergReport st = stackelberg_solve(cfg, model, samples);
  CHECK(std::abs(st.leader_stock - nash.stocks[0]) <= 5.0 * st.tol);
  CHECK(std::abs(st.follower_stocks[0] - nash.stocks[1]) <= 5.0 * st.tol);
  CHECK(st.quasiconcave);
}

TEST_CASE("one-retailer discrete game matches the exhaustive bilevel search") {
  const std::vector<Marginal> marginals = {
      Marginal::discrete_dist({10.0, 30.0, 55.0, 80.0}, {0.25, 0.25, 0.25, 0.25}),
      Marginal::discrete_dist({5.0, 20.0, 45.0, 70.0}, {0.25, 0.25, 0.25, 0.25})};
  const DemandModel model = discrete_model(marginals);
  DiscreteScenario ds;
  ds.cfg = test::reference_market_half_spill();
  ds.support = product_support(marginals);
  ds.grid = test::grid_linspace(ds.cfg, 120.0, 20);
  ds.validate();
  const GridStackelberg gs = grid_stackelberg(ds);

  const SampleSet samples = sample(model, 100000, 151);
  const StackelbergReport st = stackelberg_solve(ds.cfg, model, samples);
  CHECK(std::abs(st.leader_stock - gs.leader_level) <= ds.grid[0][1] - ds.grid[0][0] + 1e-9);
}

TEST_CASE("wholesale at cost: the leader stocks above the simultaneous level") {
  MarketConfig cfg = test::reference_market_half_spill();
  cfg.w[0] = cfg.c;
  cfg.alpha[1][0] = 0.5;
  cfg.h_r[0] = 2.0;
  cfg = validate_config(cfg);
  DemandModel model = test::uniform_model(2);
  const SampleSet samples = sample(model, 100000, 157);
  const GameComparison cmp = compare_games(cfg, model, samples);
  CHECK(cmp.w_equals_c);
  CHECK(cmp.leader_stock_ordered);
  CHECK(cmp.leader_dominance_ok);
}

TEST_CASE("compare: zero substitution differences vanish within noise") {
  const MarketConfig cfg = test::zero_alpha(test::reference_market());
  DemandModel model = test::uniform_model(2);
  const SampleSet samples = sample(model, 100000, 163);
  const GameComparison cmp = compare_games(cfg, model, samples);
  CHECK(std::abs(cmp.leader_stock_minus_nash) <= 5.0 * cmp.stackelberg.tol);
  CHECK(std::abs(cmp.leader_profit_minus_nash) <= 4.0 * cmp.profit_diff_std_error + 1e-9);
  CHECK(cmp.leader_dominance_ok);
}

TEST_CASE("generic scenario: leading weakly dominates") {
  const MarketConfig cfg = test::reference_market_half_spill();
  DemandModel model = test::uniform_model(2);
  model.marginals[0] = Marginal::exponential_dist(1.0 / 45.0);
  const SampleSet samples = sample(model, 100000, 167);
  const GameComparison cmp = compare_games(cfg, model, samples);
  CHECK(cmp.leader_dominance_ok);
}

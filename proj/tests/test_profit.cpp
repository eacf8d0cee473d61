#include "doctest.h"

#include <cmath>

#include "mcinv/common.hpp"
#include "mcinv/profit.hpp"
#include "mcinv/stats.hpp"
#include "test_helpers.hpp"

using namespace mcinv;

TEST_CASE("all-zero stocks give exactly zero profit") {
  const MarketConfig cfg = test::reference_market();
  DemandModel model = test::uniform_model(2);
  const SampleSet samples = sample(model, 5000, 1);
  const StockVector s = StockVector::zeros(2);
  const ProfitEstimate m = profit_manufacturer(cfg, model, samples, s);
  const ProfitEstimate r = profit_retailer(cfg, model, samples, s, 1);
  CHECK(m.value == 0.0);
  CHECK(m.std_error == 0.0);
  CHECK(r.value == 0.0);
}

TEST_CASE("degenerate demand, stock at demand: deterministic profit") {
  const MarketConfig cfg = test::zero_alpha(test::reference_market());
  DemandModel model;
  model.marginals = {Marginal::discrete_dist({40.0}, {1.0}), Marginal::discrete_dist({20.0}, {1.0})};
  const SampleSet samples = sample(model, 1000, 3);
  const ProfitEstimate m = profit_manufacturer(cfg, model, samples, StockVector{{40.0, 20.0}});
  CHECK(m.value == doctest::Approx(380.0));  // (10-2)*40 + (5-2)*20
  CHECK(m.std_error == 0.0);
}

TEST_CASE("uniform newsvendor closed form") {
  // alpha = 0, demand U(0,100), s = 80, margin 4, holding 1:
  // profit = 4*80 - 5*E(80-U)^+ = 320 - 5*32 = 160.
  const MarketConfig cfg = test::zero_alpha(test::reference_market());
  DemandModel model = test::uniform_model(2);
  const SampleSet samples = sample(model, 100000, 7);
  const ProfitEstimate r = profit_retailer(cfg, model, samples, StockVector{{0.0, 80.0}}, 1);
  CHECK(std::abs(r.value - 160.0) <= 4.0 * r.std_error);
  CHECK(r.std_error > 0.0);
  CHECK(r.std_error < 1.0);
}

TEST_CASE("retailer index is validated") {
  const MarketConfig cfg = test::reference_market();
  DemandModel model = test::uniform_model(2);
  const SampleSet samples = sample(model, 100, 1);
  CHECK_THROWS_AS(profit_retailer(cfg, model, samples, StockVector::zeros(2), 2), ValidationError);
  CHECK_THROWS_AS(profit_retailer(cfg, model, samples, StockVector::zeros(2), 0), ValidationError);
}

TEST_CASE("gradient: decoupled manufacturer matches the empirical first-order condition") {
  const MarketConfig cfg = test::zero_alpha(test::reference_market());
  DemandModel model = test::uniform_model(2);
  const SampleSet samples = sample(model, 100000, 11);
  const StockVector s{{60.0, 50.0}};
  const auto grad = grad_manufacturer(cfg, model, samples, s);

  std::size_t covered = 0;
  for (std::size_t t = 0; t < samples.rows(); ++t)
    if (samples.at(t, 0) <= 60.0) ++covered;
  const double expected = 8.0 - 9.0 * static_cast<double>(covered) / 1e5;
  CHECK(grad[0] == doctest::Approx(expected).epsilon(1e-12));

  // Component vanishes at the critical-fractile quantile.
  std::vector<double> col = samples.column(0);
  const double q = empirical_quantile_inplace(col, cfg.manufacturer_fractile());
  StockVector at_q = s;
  at_q[0] = q;
  const auto grad_q = grad_manufacturer(cfg, model, samples, at_q);
  CHECK(std::abs(grad_q[0]) <= 9.0 * 2e-5 + 1e-9);  // one sample mass away from zero
}

TEST_CASE("gradient at the origin dominates the interior-stocking slack") {
  const MarketConfig cfg = test::reference_market_half_spill();
  DemandModel model = test::uniform_model(2);
  const SampleSet samples = sample(model, 50000, 13);
  const auto grad = grad_manufacturer(cfg, model, samples, StockVector::zeros(2));
  const ConditionReport rep = check_conditions(cfg);
  CHECK(grad[0] >= rep.c2.slack - 1e-9);
}

TEST_CASE("gradient agrees with common-random-number finite differences") {
  const MarketConfig cfg = test::reference_market_half_spill();
  DemandModel model = test::uniform_model(2);
  model.marginals[1] = Marginal::exponential_dist(1.0 / 40.0);
  const SampleSet samples = sample(model, 100000, 17);
  const double h = 1e-2;
  for (const auto& levels : {std::vector<double>{55.0, 45.0}, {70.0, 30.0}, {40.0, 60.0}}) {
    const StockVector s{levels};
    const auto an = grad_manufacturer(cfg, model, samples, s);
    for (int j = 0; j < 2; ++j) {
      StockVector up = s, down = s;
      up[j] += h;
      down[j] -= h;
      const double fd = (profit_manufacturer(cfg, model, samples, up).value -
                         profit_manufacturer(cfg, model, samples, down).value) /
                        (2.0 * h);
      const double denom = std::max({std::abs(an[static_cast<std::size_t>(j)]), std::abs(fd), 0.9});
      CHECK(std::abs(fd - an[static_cast<std::size_t>(j)]) / denom <= 1e-2);
    }
  }
}

TEST_CASE("gradient and hessian reject discrete demand") {
  const MarketConfig cfg = test::reference_market();
  DemandModel model;
  model.marginals = {Marginal::discrete_dist({10.0, 30.0}, {0.5, 0.5}),
                     Marginal::discrete_dist({5.0, 25.0}, {0.5, 0.5})};
  const SampleSet samples = sample(model, 1000, 1);
  CHECK_THROWS_AS(grad_manufacturer(cfg, model, samples, StockVector::zeros(2)), ValidationError);
  CHECK_THROWS_AS(hessian_fd(cfg, model, samples, 0, StockVector::zeros(2)), ValidationError);
}

TEST_CASE("hessian: decoupled games have exactly zero cross terms") {
  const MarketConfig cfg = test::zero_alpha(test::reference_market());
  DemandModel model = test::uniform_model(2);
  const SampleSet samples = sample(model, 20000, 19);
  const HessianFD h = hessian_fd(cfg, model, samples, 0, StockVector{{60.0, 50.0}});
  CHECK(std::abs(h.matrix(0, 1)) <= 1e-12);
  CHECK(std::abs(h.matrix(1, 0)) <= 1e-12);
  CHECK_FALSE(h.noise_flag);
}

TEST_CASE("hessian: own-stock concavity and submodularity signs at interior points") {
  const MarketConfig cfg = test::reference_market_half_spill();
  DemandModel model = test::uniform_model(2);
  const SampleSet samples = sample(model, 100000, 23);
  const StockVector s{{60.0, 45.0}};

  const HessianFD hm = hessian_fd(cfg, model, samples, 0, s);
  CHECK(hm.matrix(0, 0) <= 4.0 * hm.std_errors(0, 0));
  CHECK(hm.matrix(0, 1) <= 4.0 * hm.std_errors(0, 1));

  const HessianFD hr = hessian_fd(cfg, model, samples, 1, s);
  CHECK(hr.matrix(1, 1) <= 4.0 * hr.std_errors(1, 1));
  CHECK(hr.matrix(0, 1) <= 4.0 * hr.std_errors(0, 1));
  // The retailer's own curvature is resolvably negative here.
  CHECK(hr.matrix(1, 1) < -4.0 * hr.std_errors(1, 1));
}

TEST_CASE("hessian flags steps below the density resolution") {
  const MarketConfig cfg = test::reference_market();
  DemandModel model = test::uniform_model(2);
  const SampleSet samples = sample(model, 20000, 29);
  const HessianFD h = hessian_fd(cfg, model, samples, 0, StockVector{{60.0, 50.0}}, 1e-4);
  CHECK(h.noise_flag);
}

TEST_CASE("std error shrinks as one over root n") {
  const MarketConfig cfg = test::reference_market_half_spill();
  DemandModel model = test::uniform_model(2);
  const StockVector s{{60.0, 45.0}};
  const SampleSet small = sample(model, 10000, 37);
  const SampleSet large = sample(model, 160000, 37);
  const ProfitEstimate a = profit_manufacturer(cfg, model, small, s);
  const ProfitEstimate b = profit_manufacturer(cfg, model, large, s);
  CHECK(a.std_error / b.std_error == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("profit estimates are identical under different thread counts") {
  const MarketConfig cfg = test::reference_market_half_spill();
  DemandModel model = test::uniform_model(2);
  const SampleSet samples = sample(model, 50000, 31);
  const StockVector s{{55.0, 44.0}};
  const ProfitEstimate one = profit_manufacturer(cfg, model, samples, s);
  set_max_threads(2);
  const ProfitEstimate two = profit_manufacturer(cfg, model, samples, s);
  const auto grad_two = grad_manufacturer(cfg, model, samples, s);
  set_max_threads(1);
  const auto grad_one = grad_manufacturer(cfg, model, samples, s);
  CHECK(one.value == two.value);
  CHECK(one.std_error == two.std_error);
  CHECK(grad_one == grad_two);
}

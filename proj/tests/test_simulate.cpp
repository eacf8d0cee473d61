#include "doctest.h"

#include <cmath>
#include <sstream>

#include "mcinv/nash.hpp"
#include "mcinv/oracle.hpp"
#include "mcinv/profit.hpp"
#include "mcinv/common.hpp"
#include "mcinv/simulate.hpp"
#include "mcinv/stats.hpp"
#include "test_helpers.hpp"

using namespace mcinv;

TEST_CASE("degenerate demand with exact stock is a steady state") {
  const MarketConfig cfg = test::zero_alpha(test::reference_market());
  DemandModel model;
  model.marginals = {Marginal::discrete_dist({40.0}, {1.0}), Marginal::discrete_dist({20.0}, {1.0})};
  const SimTrace tr = simulate(cfg, model, StockVector{{40.0, 20.0}}, 50, 7);
  for (std::size_t t = 0; t < tr.horizon; ++t) {
    CHECK(tr.sales[tr.idx(t, 0)] == 40.0);
    CHECK(tr.end[tr.idx(t, 0)] == 0.0);
    CHECK(tr.profit[tr.idx(t, 0)] == doctest::Approx(380.0));  // (10-2)*40 + (5-2)*20
    CHECK(tr.profit[tr.idx(t, 1)] == doctest::Approx(80.0));   // (9-5)*20
  }
  CHECK(tr.avg_profit[0] == doctest::Approx(380.0));
  CHECK(tr.profit_std_error[0] == 0.0);
}

TEST_CASE("zero stocks lose all demand at zero profit") {
  const MarketConfig cfg = test::reference_market();
  DemandModel model = test::uniform_model(2);
  const SimTrace tr = simulate(cfg, model, StockVector::zeros(2), 100, 11);
  for (std::size_t t = 0; t < tr.horizon; ++t)
    for (int j = 0; j < 2; ++j) {
      CHECK(tr.profit[tr.idx(t, j)] == 0.0);
      CHECK(tr.sales[tr.idx(t, j)] == 0.0);
    }
}

TEST_CASE("spillover received is bounded by the substitution totals") {
  const MarketConfig cfg = test::reference_market_half_spill();
  DemandModel model = test::uniform_model(2);
  const SimTrace tr = simulate(cfg, model, StockVector{{30.0, 25.0}}, 500, 13);
  for (std::size_t t = 0; t < tr.horizon; ++t)
    for (int k = 0; k < 2; ++k) {
      double cap = 0.0;
      for (int j = 0; j < 2; ++j)
        cap += cfg.alpha[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] *
               tr.primary[tr.idx(t, j)];
      CHECK(tr.spill_in[tr.idx(t, k)] <= cap + 1e-12);
    }
}

TEST_CASE("long-run averages match the static profit model") {
  const MarketConfig cfg = test::reference_market_half_spill();
  DemandModel model = test::uniform_model(2);
  const SampleSet samples = sample(model, 100000, 17);
  const StockVector s{{60.0, 45.0}};
  const SimTrace tr = simulate(cfg, model, s, 30000, 19);
  const ProfitEstimate m = profit_manufacturer(cfg, model, samples, s);
  const ProfitEstimate r = profit_retailer(cfg, model, samples, s, 1);
  CHECK(std::abs(tr.avg_profit[0] - m.value) <=
        3.0 * std::sqrt(tr.profit_std_error[0] * tr.profit_std_error[0] +
                        m.std_error * m.std_error));
  CHECK(std::abs(tr.avg_profit[1] - r.value) <=
        3.0 * std::sqrt(tr.profit_std_error[1] * tr.profit_std_error[1] +
                        r.std_error * r.std_error));
}

TEST_CASE("averages over the two halves agree (regenerating chain)") {
  const MarketConfig cfg = test::reference_market_half_spill();
  DemandModel model = test::uniform_model(2);
  const std::size_t horizon = 40000;
  const SimTrace tr = simulate(cfg, model, StockVector{{55.0, 40.0}}, horizon, 23);
  for (int j = 0; j < 2; ++j) {
    std::vector<double> first, second;
    for (std::size_t t = 1; t <= horizon / 2; ++t) first.push_back(tr.profit[tr.idx(t, j)]);
    for (std::size_t t = horizon / 2 + 1; t < horizon; ++t)
      second.push_back(tr.profit[tr.idx(t, j)]);
    const MeanStdErr a = mean_std_error(first);
    const MeanStdErr b = mean_std_error(second);
    CHECK(std::abs(a.mean - b.mean) <=
          3.0 * std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error));
  }
}

TEST_CASE("simulation is deterministic in the seed") {
  const MarketConfig cfg = test::reference_market();
  DemandModel model = test::uniform_model(2);
  const SimTrace a = simulate(cfg, model, StockVector{{50.0, 40.0}}, 200, 29);
  const SimTrace b = simulate(cfg, model, StockVector{{50.0, 40.0}}, 200, 29);
  CHECK(a.profit == b.profit);
  CHECK(a.sales == b.sales);
}

TEST_CASE("deviation test: equilibrium candidates gain nothing beyond noise") {
  const MarketConfig cfg = test::zero_alpha(test::reference_market());
  DemandModel model = test::uniform_model(2);
  const SampleSet samples = sample(model, 100000, 31);
  const EquilibriumReport rep = nash_solve(cfg, model, samples);
  REQUIRE(rep.converged);

  // Candidates around the retailer's closed-form fractile quantile (80).
  const std::vector<double> candidates = {70.0, 75.0, 80.0, rep.stocks[1], 85.0, 90.0};
  const DeviationResult dev = deviation_test(cfg, model, rep.stocks, 1, candidates, 60000, 37);
  CHECK(dev.best_gain <= 3.0 * dev.std_errors[0]);

  // The stay-put candidate has exactly zero gain.
  const DeviationResult stay = deviation_test(cfg, model, rep.stocks, 1, {rep.stocks[1]}, 5000, 37);
  CHECK(stay.best_gain == 0.0);
}

TEST_CASE("deviation gains track the exact oracle on a discrete instance") {
  DemandModel model;
  model.marginals = {Marginal::discrete_dist({10.0, 30.0}, {0.5, 0.5}),
                     Marginal::discrete_dist({5.0, 25.0}, {0.5, 0.5})};
  DiscreteScenario ds;
  ds.cfg = test::reference_market_half_spill();
  ds.support = product_support(model.marginals);
  ds.grid = test::grid_linspace(ds.cfg, 45.0, 21);
  ds.validate();

  const StockVector s{{20.0, 10.0}};
  const std::vector<double> candidates = {5.0, 15.0, 25.0, 30.0};
  const DeviationResult dev = deviation_test(ds.cfg, model, s, 0, candidates, 60000, 41);
  const double base = exact_profit_channel(ds, s, 0);
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    StockVector moved = s;
    moved[0] = candidates[k];
    const double exact_gain = exact_profit_channel(ds, moved, 0) - base;
    CHECK(std::abs(dev.gains[k] - exact_gain) <= 3.0 * dev.std_errors[k] + 1e-9);
  }
}

TEST_CASE("csv trace has the documented shape") {
  const MarketConfig cfg = test::reference_market();
  DemandModel model = test::uniform_model(2);
  const SimTrace tr = simulate(cfg, model, StockVector{{50.0, 40.0}}, 5, 43);
  std::ostringstream os;
  write_trace_csv(tr, os);
  std::istringstream in(os.str());
  std::string header;
  std::getline(in, header);
  CHECK(header ==
        "period,start_m,order_m,primary_m,spill_in_m,sales_m,lost_m,end_m,profit_m,"
        "start_r1,order_r1,primary_r1,spill_in_r1,sales_r1,lost_r1,end_r1,profit_r1");
  int rows = 0;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 5);
}

TEST_CASE("horizon zero is rejected") {
  const MarketConfig cfg = test::reference_market();
  DemandModel model = test::uniform_model(2);
  CHECK_THROWS_AS(simulate(cfg, model, StockVector::zeros(2), 0, 1), ValidationError);
}

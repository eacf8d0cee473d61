#include "doctest.h"

#include <cmath>

#include "mcinv/common.hpp"
#include "mcinv/demand.hpp"
#include "test_helpers.hpp"

using namespace mcinv;

TEST_CASE("uniform draws stay inside the support") {
  DemandModel model = test::uniform_model(2);
  const SampleSet s = sample(model, 5000, 123);
  for (std::size_t t = 0; t < s.rows(); ++t)
    for (std::size_t j = 0; j < s.cols(); ++j) {
      CHECK(s.at(t, j) >= 0.0);
      CHECK(s.at(t, j) <= 100.0);
    }
}

TEST_CASE("sampling is deterministic and parallelism independent") {
  DemandModel model = test::uniform_model(3);
  model.marginals[1] = Marginal::exponential_dist(0.05);
  model.marginals[2] = Marginal::lognormal_dist(3.0, 0.4);

  const SampleSet a = sample(model, 20000, 99);
  const SampleSet b = sample(model, 20000, 99);
  REQUIRE(a.rows() == b.rows());
  for (std::size_t t = 0; t < a.rows(); ++t)
    for (std::size_t j = 0; j < a.cols(); ++j) CHECK(a.at(t, j) == b.at(t, j));

  set_max_threads(2);
  const SampleSet c = sample(model, 20000, 99);
  set_max_threads(1);
  for (std::size_t t = 0; t < a.rows(); ++t)
    for (std::size_t j = 0; j < a.cols(); ++j) CHECK(a.at(t, j) == c.at(t, j));

  // row t of the matrix equals the standalone row draw
  const std::vector<double> row = draw_row(model, 99, 777);
  for (std::size_t j = 0; j < a.cols(); ++j) CHECK(row[j] == a.at(777, j));

  const SampleSet d = sample(model, 20000, 100);
  bool any_differs = false;
  for (std::size_t t = 0; t < a.rows() && !any_differs; ++t)
    any_differs = a.at(t, 0) != d.at(t, 0);
  CHECK(any_differs);
}

TEST_CASE("discrete marginal empirical mean obeys the CLT bound") {
  DemandModel model;
  model.marginals.push_back(Marginal::discrete_dist({10.0, 30.0}, {0.5, 0.5}));
  const std::size_t n = 100000;
  const SampleSet s = sample(model, n, 2024);
  double sum = 0.0;
  for (std::size_t t = 0; t < n; ++t) sum += s.at(t, 0);
  const double mean = sum / static_cast<double>(n);
  // sd of the two-point distribution is 10
  CHECK(std::abs(mean - 20.0) <= 3.0 * 10.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("zero draws rejected") {
  DemandModel model = test::uniform_model(2);
  CHECK_THROWS_AS(sample(model, 0, 1), ValidationError);
}

TEST_CASE("composite demand matches the worked example") {
  const MarketConfig cfg = test::reference_market_half_spill();
  SUBCASE("zero substitution is the identity") {
    const MarketConfig flat = test::zero_alpha(cfg);
    const std::vector<double> primary = {50.0, 30.0};
    const auto d = composite_demand(flat, StockVector{{40.0, 35.0}}, primary);
    CHECK(d[0] == 50.0);
    CHECK(d[1] == 30.0);
  }
  SUBCASE("manufacturer excess spills half") {
    const auto d = composite_demand(cfg, StockVector{{40.0, 35.0}}, std::vector<double>{50.0, 30.0});
    CHECK(d[0] == doctest::Approx(50.0));  // retailer has no excess
    CHECK(d[1] == doctest::Approx(35.0));  // 30 + 0.5 * (50 - 40)
  }
}

TEST_CASE("substitution is one pass: spilled demand never re-spills") {
  // Both channels out of stock; channel spill must use primary excess only.
  MarketConfig cfg = test::reference_market();
  cfg.alpha = {{0.0, 0.5}, {0.5, 0.0}};
  cfg = validate_config(cfg);
  const std::vector<double> primary = {100.0, 80.0};
  const StockVector s{{10.0, 20.0}};
  const auto d = composite_demand(cfg, s, primary);
  CHECK(d[0] == doctest::Approx(100.0 + 0.5 * (80.0 - 20.0)));
  CHECK(d[1] == doctest::Approx(80.0 + 0.5 * (100.0 - 10.0)));
}

TEST_CASE("composite demand monotonicity and bounds") {
  const MarketConfig cfg = test::reference_market_half_spill();
  DemandModel model = test::uniform_model(2);
  const SampleSet samples = sample(model, 200, 5);
  for (std::size_t t = 0; t < samples.rows(); ++t) {
    std::vector<double> primary(samples.row_ptr(t), samples.row_ptr(t) + samples.cols());
    const StockVector lo{{20.0, 15.0}};
    const StockVector hi{{35.0, 15.0}};
    const auto d_lo = composite_demand(cfg, lo, primary);
    const auto d_hi = composite_demand(cfg, hi, primary);
    CHECK(d_hi[1] <= d_lo[1]);              // nonincreasing in the other channel's stock
    CHECK(d_lo[0] == d_hi[0]);              // own coordinate ignores own stock... channel 0 sees
                                            // only the retailer stock, unchanged here
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK(d_lo[j] >= primary[j]);
      double cap = primary[j];
      for (std::size_t k = 0; k < 2; ++k)
        if (k != j) cap += cfg.alpha[k][j] * primary[k];
      CHECK(d_lo[j] <= cap + 1e-12);
    }
  }
}

TEST_CASE("empirical dependence bootstraps whole rows") {
  DemandModel model;
  model.marginals = {Marginal::uniform_dist(0, 100), Marginal::uniform_dist(0, 100)};
  model.dependence = DemandModel::Dependence::empirical;
  model.empirical_rows = {1.0, 2.0, 10.0, 20.0, 100.0, 200.0};
  model.empirical_count = 3;
  model.validate(2);
  const SampleSet s = sample(model, 1000, 31);
  for (std::size_t t = 0; t < s.rows(); ++t) {
    const double a = s.at(t, 0), b = s.at(t, 1);
    const bool known = (a == 1.0 && b == 2.0) || (a == 10.0 && b == 20.0) ||
                       (a == 100.0 && b == 200.0);
    CHECK(known);
  }
}

TEST_CASE("marginal closed forms") {
  const Marginal u = Marginal::uniform_dist(10.0, 30.0);
  CHECK(u.quantile(0.25) == doctest::Approx(15.0));
  CHECK(u.pdf(20.0) == doctest::Approx(0.05));
  CHECK(u.cdf(20.0) == doctest::Approx(0.5));

  const Marginal e = Marginal::exponential_dist(0.1);
  CHECK(e.cdf(e.quantile(0.3)) == doctest::Approx(0.3).epsilon(1e-9));
  CHECK(e.mean() == doctest::Approx(10.0));

  const Marginal ln = Marginal::lognormal_dist(2.0, 0.5);
  CHECK(ln.cdf(ln.quantile(0.7)) == doctest::Approx(0.7).epsilon(1e-6));

  CHECK_THROWS_AS(Marginal::uniform_dist(-1.0, 5.0).validate(0), ValidationError);
  CHECK_THROWS_AS(Marginal::discrete_dist({1.0, 2.0}, {0.5, 0.6}).validate(0), ValidationError);
}

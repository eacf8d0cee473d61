#pragma once

#include <vector>

#include "mcinv/demand.hpp"
#include "mcinv/market.hpp"

namespace mcinv {

// Brute-force reference implementations on small discrete instances.
// Everything here enumerates the full joint support and the full stock
// grid; no sampling, no iteration. The solvers are cross-checked against
// these results.

/// One atom of a finite joint demand distribution.
struct DemandAtom {
  std::vector<double> demand;  ///< primary demand per channel
  double prob = 0.0;
};

/// A finite instance: market parameters, finite joint support, and a stock
/// grid per channel.
struct DiscreteScenario {
  MarketConfig cfg;
  std::vector<DemandAtom> support;
  std::vector<std::vector<double>> grid;  ///< sorted candidate levels per channel

  /// Checks probabilities sum to one within 1e-12 and that each grid starts
  /// at 0 and reaches beyond the largest possible composite demand.
  void validate() const;
};

/// Builds the joint support as the product of independent discrete marginals.
std::vector<DemandAtom> product_support(const std::vector<Marginal>& marginals);

/// Exact expected profit per channel at stocks s (any nonnegative s, on or
/// off grid). Per-atom contributions are accumulated in a canonical order,
/// so the result is identical no matter how the support is enumerated.
std::vector<double> exact_profit(const DiscreteScenario& ds, const StockVector& s);

/// Exact expected profit of a single channel.
double exact_profit_channel(const DiscreteScenario& ds, const StockVector& s, int channel);

/// All grid points from which no unilateral grid deviation improves the
/// deviating player's exact profit by more than eps.
struct GridEquilibria {
  std::vector<StockVector> points;
  bool empty_flag = false;  ///< set when no grid point qualifies
};
GridEquilibria grid_nash(const DiscreteScenario& ds, double eps = 1e-9);

/// Grid equilibrium of the retailers only, with the manufacturer level
/// pinned. Returns every qualifying retailer-stock combination.
std::vector<std::vector<double>> grid_follower_nash(const DiscreteScenario& ds,
                                                    double leader_level, double eps = 1e-9);

/// Exhaustive leader-follower search: for every leader grid level, compute
/// the retailers' grid equilibrium, then pick the leader level with the best
/// exact leader profit. Ties break toward the lowest stock level. When the
/// follower equilibrium is not unique, the one worst for the leader is used
/// and the result is flagged.
struct GridStackelberg {
  double leader_level = 0.0;
  std::vector<double> follower_levels;
  double leader_profit = 0.0;
  bool follower_multiplicity = false;
  bool follower_missing = false;  ///< some leader level had no follower equilibrium
};
GridStackelberg grid_stackelberg(const DiscreteScenario& ds, double eps = 1e-9);

/// DemandModel with independent discrete marginals matching the scenario's
/// product support (valid only when the support was built as a product).
DemandModel discrete_model(const std::vector<Marginal>& marginals);

}  // namespace mcinv

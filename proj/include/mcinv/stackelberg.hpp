#pragma once

#include <utility>
#include <vector>

#include "mcinv/demand.hpp"
#include "mcinv/market.hpp"
#include "mcinv/nash.hpp"
#include "mcinv/profit.hpp"

namespace mcinv {

/// Retailers' equilibrium among themselves with the manufacturer's stock
/// pinned at `leader_level`.
struct FollowerEquilibrium {
  std::vector<double> stocks;  ///< one level per retailer
  bool converged = false;
  int iterations = 0;
};

FollowerEquilibrium follower_equilibrium(const MarketConfig& cfg, const DemandModel& model,
                                         const SampleSet& samples, double leader_level,
                                         double tol, int max_iter = 200);

/// Central finite difference of the follower map at one leader level, on the
/// same SampleSet. `noise` is a conservative bound from the quantile standard
/// errors at the two evaluation points.
struct SlopeEstimate {
  double slope = 0.0;
  double noise = 0.0;
  bool noise_flag = false;  ///< step below the sample's density resolution
};

SlopeEstimate follower_slope(const MarketConfig& cfg, const DemandModel& model,
                             const SampleSet& samples, double leader_level, int i, double step,
                             double follower_tol);

/// Sufficient condition for the per-retailer feedback term of the leader's
/// reduced objective to have nonpositive curvature. Densities of composite
/// demand come from (conditional) kernel density estimates; the
/// manufacturer's primary density from its closed form; probabilities are
/// empirical frequencies. Requires a continuous demand model.
struct CurvatureCondition {
  bool holds = false;
  double value = 0.0;  ///< left side; nonnegative means the condition holds
  double term_density_slope = 0.0;   ///< conditional-density-derivative term
  double term_density_square = 0.0;  ///< squared-conditional-density term
  double term_coupling = 0.0;        ///< subtracted leader-density term
  bool inconclusive = false;         ///< too few conditioning rows
  std::size_t conditioning_rows = 0;
};

CurvatureCondition curvature_condition_check(const MarketConfig& cfg, const DemandModel& model,
                                             const SampleSet& samples, const StockVector& s,
                                             int i);

struct StackelbergOptions {
  int grid_points = 64;
  double tol = 0.0;          ///< refinement width; <= 0 selects 1e-3 * S_max
  int follower_max_iter = 200;
};

struct StackelbergReport {
  double leader_stock = 0.0;
  std::vector<double> follower_stocks;
  /// Scanned leader objective: (leader level, profit estimate) per grid point.
  std::vector<std::pair<double, double>> leader_profit_curve;
  std::vector<double> slope_estimates;   ///< d follower_i / d leader at the optimum
  std::vector<bool> curvature_flags;     ///< per-retailer curvature condition at the optimum
  std::vector<bool> curvature_inconclusive;
  bool quasiconcave = false;             ///< scanned curve unimodal on the grid
  ProfitEstimate leader_profit;          ///< at the optimum
  std::vector<ProfitEstimate> profits;   ///< every channel at the optimum
  double tol = 0.0;
  double grid_spacing = 0.0;
};

/// Backward-induction leader search: scans the leader objective
/// profit_m(S_m, follower_equilibrium(S_m)) over a grid on [0, S_max] and
/// refines by golden section, around every local maximum when the scan is
/// not unimodal. Follower non-convergence at any level aborts.
StackelbergReport stackelberg_solve(const MarketConfig& cfg, const DemandModel& model,
                                    const SampleSet& samples, const StackelbergOptions& opts = {});

/// Nash and Stackelberg solutions side by side. The leader-dominance check
/// uses the per-row profit difference on the shared SampleSet, so its
/// standard error reflects the common random numbers.
struct GameComparison {
  EquilibriumReport nash;
  StackelbergReport stackelberg;
  double leader_stock_minus_nash = 0.0;
  double leader_profit_minus_nash = 0.0;
  double profit_diff_std_error = 0.0;
  bool leader_dominance_ok = false;   ///< stackelberg >= nash - 4 * diff std error
  bool w_equals_c = false;
  bool leader_stock_ordered = false;  ///< when w == c: leader stock >= nash - 5 tol
};

GameComparison compare_games(const MarketConfig& cfg, const DemandModel& model,
                             const SampleSet& samples, const NashOptions& nash_opts = {},
                             const StackelbergOptions& st_opts = {});

}  // namespace mcinv

#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "mcinv/demand.hpp"
#include "mcinv/market.hpp"
#include "mcinv/profit.hpp"

namespace mcinv {

/// Outcome of the manufacturer's best-response root search.
struct ManufacturerBR {
  double level = 0.0;
  bool corner = false;     ///< stationarity already nonnegative at 0
  bool bracketed = true;   ///< root was bracketed inside [0, S_max]
};

/// Retailer i's best response: the critical-fractile quantile of its
/// composite demand given the other channels' stocks. Composite demand of a
/// channel never depends on that channel's own stock, so this is a direct
/// quantile rather than a fixed point.
double best_response_retailer(const MarketConfig& cfg, const DemandModel& model,
                              const SampleSet& samples, const StockVector& s_others, int i);

/// Manufacturer's best response: bisection root of the empirical
/// stationarity function on [0, S_max]. Returns 0 when the function is
/// already nonnegative at 0 (corner), S_max with bracketed=false when no
/// sign change exists. `xtol <= 0` selects 1e-6 * S_max.
ManufacturerBR best_response_manufacturer(const MarketConfig& cfg, const DemandModel& model,
                                          const SampleSet& samples, const StockVector& s_others,
                                          double xtol = 0.0);

enum class UniqueFlag { proven_by_c2, bracket_coincide, multiple_detected, unknown };

const char* unique_flag_name(UniqueFlag f);

struct NashOptions {
  double tol = 0.0;      ///< componentwise stopping tolerance; <= 0 selects 1e-3 * max S_max
  int max_iter = 200;    ///< maximum Gauss-Seidel sweeps per run
  double damping = 1.0;  ///< relaxation factor in (0, 1]
};

struct EquilibriumReport {
  StockVector stocks;                    ///< limit of the run started from above
  std::vector<ProfitEstimate> profits;   ///< per channel at `stocks`
  std::vector<double> residuals;         ///< |best_response_j(stocks) - stocks_j|
  std::vector<StockVector> trace;        ///< iterates of the run started from above
  std::pair<StockVector, StockVector> bracket;  ///< componentwise hull of the two run limits
  UniqueFlag unique_flag = UniqueFlag::unknown;
  bool converged = false;                ///< both runs met the tolerance
  bool c1_holds = false;                 ///< concavity condition at this config
  bool manufacturer_corner = false;      ///< manufacturer best response at 0 in the solution
  bool manufacturer_bracketed = true;
  double tol = 0.0;                      ///< effective tolerance used
  int iterations_from_below = 0;
  int iterations_from_above = 0;
};

/// Damped Gauss-Seidel best-response iteration run twice, once from the
/// all-zero vector and once from the all-upper-bound vector. The returned
/// stocks are the run-from-above limit; the two limits form the bracket.
EquilibriumReport nash_solve(const MarketConfig& cfg, const DemandModel& model,
                             const SampleSet& samples, const NashOptions& opts = {});

/// Negative-quasi-definiteness diagnostic at s: builds the matrix of each
/// player's own-gradient second partials by finite differences, symmetrizes
/// it, and reports the largest eigenvalue with a delete-one-block jackknife
/// standard error. A negative value beyond noise supports uniqueness.
struct UniquenessDiagnostic {
  Eigen::MatrixXd h;       ///< row j = second partials of player j's profit
  Eigen::MatrixXd h_sym;   ///< h + h^T
  double lambda_max = 0.0;
  double jackknife_se = 0.0;
  bool inconclusive = false;  ///< |lambda_max| below 4x jackknife noise
};

UniquenessDiagnostic uniqueness_diagnostic(const MarketConfig& cfg, const DemandModel& model,
                                           const SampleSet& samples, const StockVector& s);

}  // namespace mcinv

#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "mcinv/demand.hpp"
#include "mcinv/market.hpp"

namespace mcinv {

/// Multi-period trace of the order-up-to dynamics. All per-period fields are
/// flat row-major horizon x channels. Averages exclude the warm-up periods,
/// during which the initial order (up from an empty system) distorts the
/// procurement charge.
struct SimTrace {
  std::size_t horizon = 0;
  int channels = 0;
  std::uint64_t seed = 0;
  int warmup = 1;

  std::vector<double> start;     ///< on-hand inventory before ordering
  std::vector<double> order;     ///< units ordered (restores the base level)
  std::vector<double> primary;   ///< primary demand draw
  std::vector<double> spill_in;  ///< substitution demand received
  std::vector<double> sales;     ///< units sold
  std::vector<double> lost;      ///< demand present at the channel left unserved
  std::vector<double> end;       ///< ending inventory (carried over)
  std::vector<double> profit;    ///< per-period channel profit

  std::vector<double> avg_profit;        ///< per channel, warm-up excluded
  std::vector<double> profit_std_error;  ///< per channel, warm-up excluded

  std::size_t idx(std::size_t t, int j) const {
    return t * static_cast<std::size_t>(channels) + static_cast<std::size_t>(j);
  }
};

/// Runs the period loop: order up to s, draw primary demand, serve it, route
/// the one-pass substitution spillover, serve that from remaining stock,
/// lose the rest, charge holding on ending inventory. Procurement is charged
/// on ordered units and revenue booked on sold units; the manufacturer earns
/// the wholesale margin on retailer orders. Deterministic in (inputs, seed);
/// period t consumes the same draws row t of sample() would produce.
SimTrace simulate(const MarketConfig& cfg, const DemandModel& model, const StockVector& s,
                  std::size_t horizon, std::uint64_t seed);

/// Simulates unilateral deviations of channel j to each candidate level with
/// common seeds and reports the average-profit gain over staying at s_star.
struct DeviationResult {
  double best_gain = 0.0;
  double best_level = 0.0;
  std::vector<double> gains;       ///< aligned with candidates
  std::vector<double> std_errors;  ///< per-period std error of each deviation run
};

DeviationResult deviation_test(const MarketConfig& cfg, const DemandModel& model,
                               const StockVector& s_star, int channel,
                               const std::vector<double>& candidates, std::size_t horizon,
                               std::uint64_t seed);

/// One row per period; per channel the columns start, order, primary,
/// spill_in, sales, lost, end, profit with suffixes _m, _r1, _r2, ...
void write_trace_csv(const SimTrace& trace, std::ostream& os);

}  // namespace mcinv

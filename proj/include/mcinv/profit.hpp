#pragma once

#include <Eigen/Core>
#include <vector>

#include "mcinv/demand.hpp"
#include "mcinv/market.hpp"

namespace mcinv {

/// Monte Carlo estimate of an expected profit.
struct ProfitEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n_draws = 0;
};

/// Per-row profit of one channel for given stocks, written into `out`
/// (size = samples.rows()). All estimates derived from these buffers use
/// the same SampleSet, so they are deterministic functions of s.
void profit_rows(const MarketConfig& cfg, const SampleSet& samples, const StockVector& s,
                 int channel, std::vector<double>& out);

/// Expected manufacturer profit: own-channel sales margin minus overage,
/// plus the wholesale margin collected on every retailer channel.
ProfitEstimate profit_manufacturer(const MarketConfig& cfg, const DemandModel& model,
                                   const SampleSet& samples, const StockVector& s);

/// Expected profit of retailer channel i (1-based channel index).
ProfitEstimate profit_retailer(const MarketConfig& cfg, const DemandModel& model,
                               const SampleSet& samples, const StockVector& s, int i);

/// Analytic first partial derivatives of the manufacturer profit with all
/// probabilities estimated as empirical joint frequencies on the shared
/// SampleSet. Left-tail events use <=, right-tail events use strict >.
/// Rejects discrete demand models.
std::vector<double> grad_manufacturer(const MarketConfig& cfg, const DemandModel& model,
                                      const SampleSet& samples, const StockVector& s);

/// Central finite-difference Hessian of one channel's profit estimate.
struct HessianFD {
  Eigen::MatrixXd matrix;           ///< second/cross partials
  Eigen::MatrixXd std_errors;       ///< per-entry standard error (CRN per-row differences)
  std::vector<Eigen::MatrixXd> block_matrices;  ///< leave-one-block-out matrices (jackknife)
  bool noise_flag = false;          ///< step below the resolution of the sample
  double step = 0.0;
};

/// Finite-difference second and cross partials of channel j's profit on the
/// shared SampleSet. `step <= 0` selects the default step, 1e-2 times the
/// interquartile range of that channel's composite demand at s. Steps well
/// below the local KDE bandwidth are flagged as noise-dominated.
HessianFD hessian_fd(const MarketConfig& cfg, const DemandModel& model, const SampleSet& samples,
                     int channel, const StockVector& s, double step = 0.0);

/// Default finite-difference step for channel j at stocks s.
double default_fd_step(const MarketConfig& cfg, const SampleSet& samples, const StockVector& s,
                       int channel);

}  // namespace mcinv

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mcinv/market.hpp"

namespace mcinv {

/// One marginal distribution of primary demand. Support is contained in
/// [0, inf). The discrete family exists to power the exhaustive reference
/// implementations; derivative-based diagnostics reject it.
struct Marginal {
  enum class Kind { uniform, exponential, lognormal, discrete };

  Kind kind = Kind::uniform;
  double a = 0.0, b = 1.0;      // uniform on [a, b]
  double rate = 1.0;            // exponential
  double mu = 0.0, sigma = 1.0; // lognormal: exp(mu + sigma Z)
  std::vector<double> values;   // discrete support (sorted ascending)
  std::vector<double> probs;    // discrete probabilities (positive, sum 1)

  static Marginal uniform_dist(double a, double b);
  static Marginal exponential_dist(double rate);
  static Marginal lognormal_dist(double mu, double sigma);
  static Marginal discrete_dist(std::vector<double> values, std::vector<double> probs);

  bool is_discrete() const { return kind == Kind::discrete; }

  /// Inverse-CDF transform of a unit uniform.
  double sample_from_unit(double u) const;

  double pdf(double x) const;       // continuous kinds only
  double cdf(double x) const;
  double quantile(double q) const;
  double mean() const;

  /// Throws ValidationError; `index` only labels the message.
  void validate(int index) const;

  std::string kind_name() const;
};

/// Joint distribution of the n+1 primary demands.
struct DemandModel {
  enum class Dependence { independent, empirical };

  std::vector<Marginal> marginals;  ///< one per channel, manufacturer first
  Dependence dependence = Dependence::independent;
  /// Row-major M x (n+1) matrix of joint draws, used when
  /// dependence == empirical; sampling bootstraps whole rows.
  std::vector<double> empirical_rows;
  std::size_t empirical_count = 0;

  bool any_discrete() const;
  void validate(int channels) const;
};

/// Base-stock levels for all n+1 channels.
struct StockVector {
  std::vector<double> levels;

  StockVector() = default;
  explicit StockVector(std::vector<double> v) : levels(std::move(v)) {}
  static StockVector zeros(int channels) { return StockVector(std::vector<double>(channels, 0.0)); }

  double& operator[](int ch) { return levels[static_cast<std::size_t>(ch)]; }
  double operator[](int ch) const { return levels[static_cast<std::size_t>(ch)]; }
  int channels() const { return static_cast<int>(levels.size()); }
};

/// A fixed matrix of primary-demand draws shared by every estimate inside
/// one solve (common random numbers). Row t is one joint realization.
class SampleSet {
public:
  SampleSet() = default;
  SampleSet(std::vector<double> draws, std::size_t rows, std::size_t cols, std::uint64_t seed)
      : draws_(std::move(draws)), rows_(rows), cols_(cols), seed_(seed) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::uint64_t seed() const { return seed_; }

  double at(std::size_t row, std::size_t col) const { return draws_[row * cols_ + col]; }
  const double* row_ptr(std::size_t row) const { return draws_.data() + row * cols_; }
  std::span<const double> flat() const { return draws_; }

  /// Column copy of primary demand for one channel.
  std::vector<double> column(std::size_t col) const;

private:
  std::vector<double> draws_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::uint64_t seed_ = 0;
};

/// Draws n_draws joint realizations. Deterministic in (model, n_draws, seed):
/// every cell is a pure function of (seed, row, column), so the result does
/// not depend on the degree of parallelism. Rejects n_draws == 0.
SampleSet sample(const DemandModel& model, std::size_t n_draws, std::uint64_t seed);

/// One joint draw (row `t` of the matrix sample() would produce).
std::vector<double> draw_row(const DemandModel& model, std::uint64_t seed, std::size_t t);

/// Composite demand for one realization of primary demand: own primary plus
/// the substitution spillover alpha[k][j] * (primary_k - s_k)^+ received from
/// every other channel. Spillover is computed from primary excess only; there
/// is no second round.
std::vector<double> composite_demand(const MarketConfig& cfg, const StockVector& s,
                                     std::span<const double> primary);

/// Composite demand for every row, flat row-major rows x channels.
std::vector<double> composite_matrix(const MarketConfig& cfg, const SampleSet& samples,
                                     const StockVector& s);

/// Composite demand of a single channel for every row.
std::vector<double> composite_column(const MarketConfig& cfg, const SampleSet& samples,
                                     const StockVector& s, int channel);

/// Per-channel maximum of composite demand at all-zero stocks: stocking above
/// this level is strictly dominated, so solvers use it as the search bound.
StockVector stock_upper_bounds(const MarketConfig& cfg, const SampleSet& samples);

}  // namespace mcinv

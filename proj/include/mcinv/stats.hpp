#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace mcinv {

/// Neumaier-compensated accumulator.
class CompensatedSum {
public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Compensated sum over a span, sequential in index order.
double compensated_sum(std::span<const double> xs);

/// Mean and standard error of the mean (sd / sqrt(n)).
struct MeanStdErr {
  double mean = 0.0;
  double std_error = 0.0;
};
MeanStdErr mean_std_error(std::span<const double> xs);

/// Empirical quantile: smallest sample value x with F_hat(x) >= q.
/// q = 1 returns the sample maximum. Does not modify the input.
double empirical_quantile(std::span<const double> xs, double q);

/// In-place variant; reorders the buffer.
double empirical_quantile_inplace(std::vector<double>& xs, double q);

/// Interquartile range of a sample.
double interquartile_range(std::span<const double> xs);

/// Large-sample standard error of the empirical q-quantile,
/// sqrt(q (1-q) / n) / density, for a given density at the quantile.
double quantile_std_error(double q, std::size_t n, double density_at_quantile);

/// Gaussian kernel density estimate with Silverman's rule-of-thumb
/// bandwidth. Density derivatives come from central differences of the
/// smoothed estimate with step = bandwidth / 2.
class KernelDensity {
public:
  static KernelDensity fit(std::span<const double> xs);
  static KernelDensity fit(std::span<const double> xs, double bandwidth);

  double bandwidth() const { return bandwidth_; }
  double pdf(double x) const;
  double pdf_derivative(double x) const;

private:
  std::vector<double> points_;
  double bandwidth_ = 0.0;
};

/// Fixed block partition used for jackknife noise estimates. The block
/// layout depends only on n, never on thread count.
struct JackknifeBlocks {
  static constexpr int kBlocks = 20;
  std::size_t n = 0;
  int blocks(std::size_t n_rows) const;
  /// Block index of row t for a sample of n rows.
  static int block_of(std::size_t t, std::size_t n_rows);
};

/// Delete-one-block jackknife standard error from per-block statistics.
/// `leave_out[b]` must be the statistic recomputed without block b.
double jackknife_std_error(std::span<const double> leave_out);

}  // namespace mcinv

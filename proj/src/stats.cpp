#include "mcinv/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mcinv {

double compensated_sum(std::span<const double> xs) {
  CompensatedSum acc;
  for (double x : xs) acc.add(x);
  return acc.value();
}

MeanStdErr mean_std_error(std::span<const double> xs) {
  MeanStdErr out;
  const std::size_t n = xs.size();
  if (n == 0) return out;
  out.mean = compensated_sum(xs) / static_cast<double>(n);
  if (n == 1) return out;
  CompensatedSum sq;
  for (double x : xs) {
    const double d = x - out.mean;
    sq.add(d * d);
  }
  const double var = sq.value() / static_cast<double>(n - 1);
  out.std_error = std::sqrt(std::max(0.0, var) / static_cast<double>(n));
  return out;
}

double empirical_quantile_inplace(std::vector<double>& xs, double q) {
  if (xs.empty()) throw std::invalid_argument("empirical_quantile: empty sample");
  q = std::clamp(q, 0.0, 1.0);
  const std::size_t n = xs.size();
  const double pos = std::ceil(q * static_cast<double>(n)) - 1.0;
  const std::size_t k = static_cast<std::size_t>(std::clamp(pos, 0.0, static_cast<double>(n - 1)));
  std::nth_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(k), xs.end());
  return xs[k];
}

double empirical_quantile(std::span<const double> xs, double q) {
  std::vector<double> copy(xs.begin(), xs.end());
  return empirical_quantile_inplace(copy, q);
}

double interquartile_range(std::span<const double> xs) {
  std::vector<double> copy(xs.begin(), xs.end());
  const double q1 = empirical_quantile_inplace(copy, 0.25);
  const double q3 = empirical_quantile_inplace(copy, 0.75);
  return q3 - q1;
}

double quantile_std_error(double q, std::size_t n, double density_at_quantile) {
  if (n == 0 || density_at_quantile <= 0.0) return std::numeric_limits<double>::infinity();
  return std::sqrt(q * (1.0 - q) / static_cast<double>(n)) / density_at_quantile;
}

KernelDensity KernelDensity::fit(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("KernelDensity: empty sample");
  MeanStdErr ms = mean_std_error(xs);
  const double sd = ms.std_error * std::sqrt(static_cast<double>(xs.size()));
  const double iqr = interquartile_range(xs);
  double spread = std::min(sd, iqr / 1.34);
  if (spread <= 0.0) spread = std::max(sd, iqr / 1.34);
  if (spread <= 0.0) spread = 1.0;  // degenerate sample; any positive width works
  const double bw = 0.9 * spread * std::pow(static_cast<double>(xs.size()), -0.2);
  return fit(xs, bw);
}

KernelDensity KernelDensity::fit(std::span<const double> xs, double bandwidth) {
  if (xs.empty()) throw std::invalid_argument("KernelDensity: empty sample");
  if (!(bandwidth > 0.0)) throw std::invalid_argument("KernelDensity: bandwidth must be positive");
  KernelDensity k;
  k.points_.assign(xs.begin(), xs.end());
  k.bandwidth_ = bandwidth;
  return k;
}

double KernelDensity::pdf(double x) const {
  const double inv_h = 1.0 / bandwidth_;
  const double norm = inv_h / std::sqrt(2.0 * M_PI) / static_cast<double>(points_.size());
  CompensatedSum acc;
  for (double p : points_) {
    const double z = (x - p) * inv_h;
    acc.add(std::exp(-0.5 * z * z));
  }
  return norm * acc.value();
}

double KernelDensity::pdf_derivative(double x) const {
  const double step = bandwidth_ / 2.0;
  return (pdf(x + step) - pdf(x - step)) / (2.0 * step);
}

int JackknifeBlocks::blocks(std::size_t n_rows) const {
  return static_cast<int>(std::min<std::size_t>(kBlocks, n_rows ? n_rows : 1));
}

int JackknifeBlocks::block_of(std::size_t t, std::size_t n_rows) {
  const std::size_t blocks = std::min<std::size_t>(kBlocks, n_rows ? n_rows : 1);
  return static_cast<int>(t % blocks);
}

double jackknife_std_error(std::span<const double> leave_out) {
  const std::size_t b = leave_out.size();
  if (b < 2) return std::numeric_limits<double>::infinity();
  MeanStdErr ms = mean_std_error(leave_out);
  CompensatedSum sq;
  for (double x : leave_out) {
    const double d = x - ms.mean;
    sq.add(d * d);
  }
  const double factor = static_cast<double>(b - 1) / static_cast<double>(b);
  return std::sqrt(std::max(0.0, factor * sq.value()));
}

}  // namespace mcinv

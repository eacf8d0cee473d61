#include "mcinv/profit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <mutex>

#include "mcinv/common.hpp"
#include "mcinv/stats.hpp"

namespace mcinv {

namespace {

ProfitEstimate estimate_from_rows(const std::vector<double>& rows) {
  const MeanStdErr ms = mean_std_error(rows);
  return ProfitEstimate{ms.mean, ms.std_error, rows.size()};
}

void check_retailer_index(const MarketConfig& cfg, int i) {
  if (i < 1 || i > cfg.n)
    throw ValidationError("retailer index " + std::to_string(i) + " out of range [1, " +
                          std::to_string(cfg.n) + "]");
}

}  // namespace

void profit_rows(const MarketConfig& cfg, const SampleSet& samples, const StockVector& s,
                 int channel, std::vector<double>& out) {
  const std::size_t rows = samples.rows();
  const std::size_t ch = samples.cols();
  out.resize(rows);
  const std::vector<double> comp = composite_matrix(cfg, samples, s);

  if (channel == 0) {
    parallel_for_rows(rows, [&](std::size_t begin, std::size_t end) {
      for (std::size_t t = begin; t < end; ++t) {
        const double* d = comp.data() + t * ch;
        double v = (cfg.p_m - cfg.c) * s[0] -
                   (cfg.p_m - cfg.c + cfg.h_m) * std::max(s[0] - d[0], 0.0);
        for (int i = 1; i <= cfg.n; ++i) {
          const double margin = cfg.wholesale(i) - cfg.c;
          v += margin * (s[i] - std::max(s[i] - d[i], 0.0));
        }
        out[t] = v;
      }
    });
    return;
  }

  check_retailer_index(cfg, channel);
  const double margin = cfg.retail_price(channel) - cfg.wholesale(channel);
  const double overage = margin + cfg.holding(channel);
  parallel_for_rows(rows, [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      const double d = comp[t * ch + static_cast<std::size_t>(channel)];
      out[t] = margin * s[channel] - overage * std::max(s[channel] - d, 0.0);
    }
  });
}

ProfitEstimate profit_manufacturer(const MarketConfig& cfg, const DemandModel&,
                                   const SampleSet& samples, const StockVector& s) {
  std::vector<double> rows;
  profit_rows(cfg, samples, s, 0, rows);
  return estimate_from_rows(rows);
}

ProfitEstimate profit_retailer(const MarketConfig& cfg, const DemandModel&,
                               const SampleSet& samples, const StockVector& s, int i) {
  check_retailer_index(cfg, i);
  std::vector<double> rows;
  profit_rows(cfg, samples, s, i, rows);
  return estimate_from_rows(rows);
}

std::vector<double> grad_manufacturer(const MarketConfig& cfg, const DemandModel& model,
                                      const SampleSet& samples, const StockVector& s) {
  if (model.any_discrete())
    throw ValidationError("grad_manufacturer requires a continuous demand model");

  const std::size_t rows = samples.rows();
  const std::size_t ch = samples.cols();
  const std::vector<double> comp = composite_matrix(cfg, samples, s);

  // covered[k]        = #{ D_k <= s_k }
  // joint[j][k], j!=k = #{ D_k <= s_k and primary_j > s_j }
  // Integer counts make the reduction independent of the chunk layout.
  const int nch = static_cast<int>(ch);
  std::vector<std::int64_t> covered(ch, 0);
  std::vector<std::int64_t> joint(ch * ch, 0);

  std::vector<std::vector<std::int64_t>> covered_parts;
  std::vector<std::vector<std::int64_t>> joint_parts;
  std::mutex parts_mutex;

  parallel_for_rows(rows, [&](std::size_t begin, std::size_t end) {
    std::vector<std::int64_t> cov(ch, 0), jnt(ch * ch, 0);
    for (std::size_t t = begin; t < end; ++t) {
      const double* d = comp.data() + t * ch;
      const double* p = samples.row_ptr(t);
      for (int k = 0; k < nch; ++k) {
        const bool cover_k = d[k] <= s[k];
        if (cover_k) ++cov[static_cast<std::size_t>(k)];
        if (!cover_k) continue;
        for (int j = 0; j < nch; ++j) {
          if (j == k) continue;
          if (p[j] > s[j]) ++jnt[static_cast<std::size_t>(j) * ch + static_cast<std::size_t>(k)];
        }
      }
    }
    std::lock_guard<std::mutex> lock(parts_mutex);
    covered_parts.push_back(std::move(cov));
    joint_parts.push_back(std::move(jnt));
  });
  for (const auto& part : covered_parts)
    for (std::size_t k = 0; k < ch; ++k) covered[k] += part[k];
  for (const auto& part : joint_parts)
    for (std::size_t k = 0; k < ch * ch; ++k) joint[k] += part[k];

  const double inv_n = 1.0 / static_cast<double>(rows);
  const auto p_cov = [&](int k) { return static_cast<double>(covered[static_cast<std::size_t>(k)]) * inv_n; };
  const auto p_joint = [&](int j, int k) {
    return static_cast<double>(joint[static_cast<std::size_t>(j) * ch + static_cast<std::size_t>(k)]) * inv_n;
  };

  std::vector<double> grad(ch, 0.0);
  double spill_term = 0.0;
  for (int i = 1; i <= cfg.n; ++i)
    spill_term += cfg.alpha[0][static_cast<std::size_t>(i)] * (cfg.wholesale(i) - cfg.c) * p_joint(0, i);
  grad[0] = (cfg.p_m - cfg.c) - (cfg.p_m - cfg.c + cfg.h_m) * p_cov(0) - spill_term;

  for (int i = 1; i <= cfg.n; ++i) {
    double g = -cfg.alpha[static_cast<std::size_t>(i)][0] * (cfg.p_m - cfg.c + cfg.h_m) * p_joint(i, 0);
    g += (cfg.wholesale(i) - cfg.c) * (1.0 - p_cov(i));
    for (int l = 1; l <= cfg.n; ++l) {
      if (l == i) continue;
      g -= cfg.alpha[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)] *
           (cfg.wholesale(l) - cfg.c) * p_joint(i, l);
    }
    grad[static_cast<std::size_t>(i)] = g;
  }
  return grad;
}

double default_fd_step(const MarketConfig& cfg, const SampleSet& samples, const StockVector& s,
                       int channel) {
  const std::vector<double> col = composite_column(cfg, samples, s, channel);
  const double iqr = interquartile_range(col);
  if (iqr > 0.0) return 1e-2 * iqr;
  const auto [mn, mx] = std::minmax_element(col.begin(), col.end());
  const double range = *mx - *mn;
  return range > 0.0 ? 1e-2 * range : 1e-2;
}

HessianFD hessian_fd(const MarketConfig& cfg, const DemandModel& model, const SampleSet& samples,
                     int channel, const StockVector& s, double step) {
  if (model.any_discrete())
    throw ValidationError("hessian_fd requires a continuous demand model");
  if (channel != 0) check_retailer_index(cfg, channel);

  const std::size_t rows = samples.rows();
  const int ch = static_cast<int>(samples.cols());
  HessianFD out;
  out.step = step > 0.0 ? step : default_fd_step(cfg, samples, s, channel);
  const double h = out.step;

  {
    const std::vector<double> col = composite_column(cfg, samples, s, channel);
    const KernelDensity kd = KernelDensity::fit(col);
    out.noise_flag = h < 0.1 * kd.bandwidth();
  }

  const int blocks = JackknifeBlocks{}.blocks(rows);
  out.matrix = Eigen::MatrixXd::Zero(ch, ch);
  out.std_errors = Eigen::MatrixXd::Zero(ch, ch);
  std::vector<Eigen::MatrixXd> block_mats(static_cast<std::size_t>(blocks),
                                          Eigen::MatrixXd::Zero(ch, ch));
  std::vector<std::int64_t> block_counts(static_cast<std::size_t>(blocks), 0);
  for (std::size_t t = 0; t < rows; ++t)
    ++block_counts[static_cast<std::size_t>(JackknifeBlocks::block_of(t, rows))];

  std::vector<double> center, plus_a, minus_a, pp, pm, mp, mm, g(rows);
  profit_rows(cfg, samples, s, channel, center);

  const auto shifted = [&](int a, double da, int b, double db) {
    StockVector sv = s;
    sv[a] += da;
    if (b >= 0) sv[b] += db;
    return sv;
  };

  const auto finalize_entry = [&](int a, int b) {
    const MeanStdErr ms = mean_std_error(g);
    out.matrix(a, b) = ms.mean;
    out.std_errors(a, b) = ms.std_error;
    // Per-block partial sums feed the leave-one-block-out matrices.
    std::vector<double> block_sum(static_cast<std::size_t>(blocks), 0.0);
    for (std::size_t t = 0; t < rows; ++t)
      block_sum[static_cast<std::size_t>(JackknifeBlocks::block_of(t, rows))] += g[t];
    const double total = compensated_sum(block_sum);
    for (int bkt = 0; bkt < blocks; ++bkt) {
      const double left_n = static_cast<double>(rows) - static_cast<double>(block_counts[static_cast<std::size_t>(bkt)]);
      block_mats[static_cast<std::size_t>(bkt)](a, b) =
          (total - block_sum[static_cast<std::size_t>(bkt)]) / left_n;
    }
  };

  for (int a = 0; a < ch; ++a) {
    profit_rows(cfg, samples, shifted(a, h, -1, 0.0), channel, plus_a);
    profit_rows(cfg, samples, shifted(a, -h, -1, 0.0), channel, minus_a);
    const double inv_h2 = 1.0 / (h * h);
    for (std::size_t t = 0; t < rows; ++t)
      g[t] = (plus_a[t] - 2.0 * center[t] + minus_a[t]) * inv_h2;
    finalize_entry(a, a);

    for (int b = a + 1; b < ch; ++b) {
      profit_rows(cfg, samples, shifted(a, h, b, h), channel, pp);
      profit_rows(cfg, samples, shifted(a, h, b, -h), channel, pm);
      profit_rows(cfg, samples, shifted(a, -h, b, h), channel, mp);
      profit_rows(cfg, samples, shifted(a, -h, b, -h), channel, mm);
      const double inv_4h2 = 1.0 / (4.0 * h * h);
      for (std::size_t t = 0; t < rows; ++t)
        g[t] = (pp[t] - pm[t] - mp[t] + mm[t]) * inv_4h2;
      finalize_entry(a, b);
      out.matrix(b, a) = out.matrix(a, b);
      out.std_errors(b, a) = out.std_errors(a, b);
      for (auto& bm : block_mats) bm(b, a) = bm(a, b);
    }
  }

  out.block_matrices = std::move(block_mats);
  return out;
}

}  // namespace mcinv

#include "mcinv/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "mcinv/common.hpp"
#include "mcinv/stats.hpp"

namespace mcinv {

SimTrace simulate(const MarketConfig& cfg, const DemandModel& model, const StockVector& s,
                  std::size_t horizon, std::uint64_t seed) {
  if (horizon < 1) throw ValidationError("simulate: horizon must be at least 1");
  const int ch = cfg.channels();
  const std::size_t chu = static_cast<std::size_t>(ch);

  SimTrace tr;
  tr.horizon = horizon;
  tr.channels = ch;
  tr.seed = seed;
  const std::size_t cells = horizon * chu;
  tr.start.resize(cells);
  tr.order.resize(cells);
  tr.primary.resize(cells);
  tr.spill_in.resize(cells);
  tr.sales.resize(cells);
  tr.lost.resize(cells);
  tr.end.resize(cells);
  tr.profit.resize(cells);

  std::vector<double> on_hand(chu, 0.0);
  std::vector<double> first_sales(chu), unmet(chu), received(chu);

  for (std::size_t t = 0; t < horizon; ++t) {
    const std::vector<double> demand = draw_row(model, seed, t);
    double conservation_scale = 1.0;
    for (int j = 0; j < ch; ++j) {
      const std::size_t k = tr.idx(t, j);
      tr.start[k] = on_hand[static_cast<std::size_t>(j)];
      tr.order[k] = s[j] - on_hand[static_cast<std::size_t>(j)];
      tr.primary[k] = demand[static_cast<std::size_t>(j)];
      first_sales[static_cast<std::size_t>(j)] = std::min(demand[static_cast<std::size_t>(j)], s[j]);
      unmet[static_cast<std::size_t>(j)] =
          demand[static_cast<std::size_t>(j)] - first_sales[static_cast<std::size_t>(j)];
      conservation_scale = std::max(conservation_scale, s[j]);
    }
    for (int k = 0; k < ch; ++k) {
      double in = 0.0;
      for (int j = 0; j < ch; ++j)
        in += cfg.alpha[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] *
              unmet[static_cast<std::size_t>(j)];
      received[static_cast<std::size_t>(k)] = in;
    }
    for (int j = 0; j < ch; ++j) {
      const std::size_t k = tr.idx(t, j);
      const double remaining = s[j] - first_sales[static_cast<std::size_t>(j)];
      const double second_sales = std::min(received[static_cast<std::size_t>(j)], remaining);
      const double sold = first_sales[static_cast<std::size_t>(j)] + second_sales;
      const double ending = s[j] - sold;
      tr.spill_in[k] = received[static_cast<std::size_t>(j)];
      tr.sales[k] = sold;
      tr.end[k] = ending;
      tr.lost[k] = tr.primary[k] + tr.spill_in[k] - sold;
      on_hand[static_cast<std::size_t>(j)] = ending;

      const double flow = tr.start[k] + tr.order[k] - sold - ending;
      if (std::abs(flow) > 1e-9 * conservation_scale || ending < -1e-12)
        throw SolverError("simulate: flow conservation violated at period " + std::to_string(t));
    }
    {
      const std::size_t k0 = tr.idx(t, 0);
      double v = cfg.p_m * tr.sales[k0] - cfg.c * tr.order[k0] - cfg.h_m * tr.end[k0];
      for (int i = 1; i <= cfg.n; ++i)
        v += (cfg.wholesale(i) - cfg.c) * tr.order[tr.idx(t, i)];
      tr.profit[k0] = v;
    }
    for (int i = 1; i <= cfg.n; ++i) {
      const std::size_t k = tr.idx(t, i);
      tr.profit[k] = cfg.retail_price(i) * tr.sales[k] - cfg.wholesale(i) * tr.order[k] -
                     cfg.holding(i) * tr.end[k];
    }
  }

  tr.warmup = horizon > 1 ? 1 : 0;
  tr.avg_profit.resize(chu);
  tr.profit_std_error.resize(chu);
  std::vector<double> series;
  series.reserve(horizon - static_cast<std::size_t>(tr.warmup));
  for (int j = 0; j < ch; ++j) {
    series.clear();
    for (std::size_t t = static_cast<std::size_t>(tr.warmup); t < horizon; ++t)
      series.push_back(tr.profit[tr.idx(t, j)]);
    const MeanStdErr ms = mean_std_error(series);
    tr.avg_profit[static_cast<std::size_t>(j)] = ms.mean;
    tr.profit_std_error[static_cast<std::size_t>(j)] = ms.std_error;
  }
  return tr;
}

DeviationResult deviation_test(const MarketConfig& cfg, const DemandModel& model,
                               const StockVector& s_star, int channel,
                               const std::vector<double>& candidates, std::size_t horizon,
                               std::uint64_t seed) {
  if (channel < 0 || channel >= cfg.channels())
    throw ValidationError("deviation_test: channel out of range");
  const SimTrace base = simulate(cfg, model, s_star, horizon, seed);

  DeviationResult out;
  out.gains.reserve(candidates.size());
  out.std_errors.reserve(candidates.size());
  out.best_gain = -std::numeric_limits<double>::infinity();
  std::vector<double> diff;
  for (double level : candidates) {
    StockVector s = s_star;
    s[channel] = std::max(level, 0.0);
    const SimTrace tr = simulate(cfg, model, s, horizon, seed);
    // Same seed, so the per-period profit difference carries the noise of
    // the gain estimate itself.
    diff.clear();
    for (std::size_t t = static_cast<std::size_t>(tr.warmup); t < horizon; ++t)
      diff.push_back(tr.profit[tr.idx(t, channel)] - base.profit[base.idx(t, channel)]);
    const MeanStdErr gain = mean_std_error(diff);
    out.gains.push_back(gain.mean);
    out.std_errors.push_back(gain.std_error);
    if (gain.mean > out.best_gain) {
      out.best_gain = gain.mean;
      out.best_level = level;
    }
  }
  return out;
}

void write_trace_csv(const SimTrace& trace, std::ostream& os) {
  const auto suffix = [](int j) { return j == 0 ? std::string("m") : "r" + std::to_string(j); };
  os << "period";
  for (int j = 0; j < trace.channels; ++j) {
    const std::string tag = suffix(j);
    os << ",start_" << tag << ",order_" << tag << ",primary_" << tag << ",spill_in_" << tag
       << ",sales_" << tag << ",lost_" << tag << ",end_" << tag << ",profit_" << tag;
  }
  os << "\n";
  os.precision(17);
  for (std::size_t t = 0; t < trace.horizon; ++t) {
    os << t;
    for (int j = 0; j < trace.channels; ++j) {
      const std::size_t k = trace.idx(t, j);
      os << ',' << trace.start[k] << ',' << trace.order[k] << ',' << trace.primary[k] << ','
         << trace.spill_in[k] << ',' << trace.sales[k] << ',' << trace.lost[k] << ','
         << trace.end[k] << ',' << trace.profit[k];
    }
    os << "\n";
  }
}

}  // namespace mcinv

#include "mcinv/stackelberg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mcinv/common.hpp"
#include "mcinv/stats.hpp"

namespace mcinv {

namespace {

constexpr double kGoldenRatio = 0.6180339887498949;

struct LeaderEval {
  double profit = 0.0;
  double std_error = 0.0;
  std::vector<double> followers;
};

LeaderEval evaluate_leader(const MarketConfig& cfg, const DemandModel& model,
                           const SampleSet& samples, double leader_level, double follower_tol,
                           int follower_max_iter) {
  const FollowerEquilibrium fe =
      follower_equilibrium(cfg, model, samples, leader_level, follower_tol, follower_max_iter);
  if (!fe.converged) {
    std::ostringstream os;
    os << "follower iteration did not converge at leader level " << leader_level;
    throw SolverError(os.str());
  }
  StockVector s = StockVector::zeros(cfg.channels());
  s[0] = leader_level;
  for (int i = 1; i <= cfg.n; ++i) s[i] = fe.stocks[static_cast<std::size_t>(i - 1)];
  const ProfitEstimate pe = profit_manufacturer(cfg, model, samples, s);
  return LeaderEval{pe.value, pe.std_error, fe.stocks};
}

/// Indices of grid local maxima, with plateaus below `eps` merged; also
/// reports whether the profile is unimodal at that resolution.
struct ScanShape {
  std::vector<std::size_t> peaks;
  bool unimodal = true;
};

ScanShape analyze_scan(const std::vector<double>& v, double eps) {
  ScanShape shape;
  const std::size_t g = v.size();
  if (g < 2) {
    shape.peaks.push_back(0);
    return shape;
  }
  // Significant move sequence must be all ups then all downs.
  bool seen_down = false;
  for (std::size_t k = 0; k + 1 < g; ++k) {
    const double d = v[k + 1] - v[k];
    if (d > eps && seen_down) shape.unimodal = false;
    if (d < -eps) seen_down = true;
  }
  // Liberal local maxima; contiguous plateau runs collapse to their first index.
  bool prev_candidate = false;
  for (std::size_t k = 0; k < g; ++k) {
    const bool left_ok = k == 0 || v[k] >= v[k - 1] - eps;
    const bool right_ok = k + 1 == g || v[k] >= v[k + 1] - eps;
    const bool candidate = left_ok && right_ok;
    const bool same_plateau = candidate && prev_candidate && k > 0 && std::abs(v[k] - v[k - 1]) <= eps;
    if (candidate && !same_plateau) shape.peaks.push_back(k);
    prev_candidate = candidate;
  }
  if (shape.peaks.empty()) shape.peaks.push_back(
      static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin()));
  return shape;
}

}  // namespace

FollowerEquilibrium follower_equilibrium(const MarketConfig& cfg, const DemandModel& model,
                                         const SampleSet& samples, double leader_level,
                                         double tol, int max_iter) {
  FollowerEquilibrium fe;
  fe.stocks.assign(static_cast<std::size_t>(cfg.n), 0.0);
  StockVector s = StockVector::zeros(cfg.channels());
  s[0] = leader_level;
  for (int it = 0; it < max_iter; ++it) {
    double delta = 0.0;
    for (int i = 1; i <= cfg.n; ++i) {
      const double next = best_response_retailer(cfg, model, samples, s, i);
      delta = std::max(delta, std::abs(next - s[i]));
      s[i] = next;
    }
    fe.iterations = it + 1;
    if (delta < tol || cfg.n == 1) {
      // One retailer: its composite demand ignores its own stock, so the
      // first quantile already is the fixed point.
      fe.converged = true;
      break;
    }
  }
  for (int i = 1; i <= cfg.n; ++i) fe.stocks[static_cast<std::size_t>(i - 1)] = s[i];
  return fe;
}

SlopeEstimate follower_slope(const MarketConfig& cfg, const DemandModel& model,
                             const SampleSet& samples, double leader_level, int i, double step,
                             double follower_tol) {
  if (!(step > 0.0)) throw ValidationError("follower_slope: step must be positive");
  SlopeEstimate out;

  const double lo_level = leader_level - step;
  double denom = 2.0 * step;
  double lo_eval = lo_level;
  if (lo_level < 0.0) {  // fall back to a forward difference at the boundary
    lo_eval = leader_level;
    denom = step;
  }
  const FollowerEquilibrium hi =
      follower_equilibrium(cfg, model, samples, leader_level + step, follower_tol, 200);
  const FollowerEquilibrium lo =
      follower_equilibrium(cfg, model, samples, lo_eval, follower_tol, 200);
  const std::size_t idx = static_cast<std::size_t>(i - 1);
  out.slope = (hi.stocks[idx] - lo.stocks[idx]) / denom;

  // Quantile standard errors at both evaluation points, densities by KDE.
  const double q = cfg.retailer_fractile(i);
  double se_sq = 0.0;
  double bandwidth = 0.0;
  for (const auto* fe : {&hi, &lo}) {
    StockVector s = StockVector::zeros(cfg.channels());
    s[0] = (fe == &hi) ? leader_level + step : lo_eval;
    for (int r = 1; r <= cfg.n; ++r) s[r] = fe->stocks[static_cast<std::size_t>(r - 1)];
    const std::vector<double> col = composite_column(cfg, samples, s, i);
    const KernelDensity kd = KernelDensity::fit(col);
    bandwidth = std::max(bandwidth, kd.bandwidth());
    const double density = kd.pdf(fe->stocks[idx]);
    const double se = quantile_std_error(q, samples.rows(), density);
    se_sq += se * se;
  }
  out.noise = std::sqrt(se_sq) / denom;
  out.noise_flag = step < 0.1 * bandwidth;
  return out;
}

CurvatureCondition curvature_condition_check(const MarketConfig& cfg, const DemandModel& model,
                                             const SampleSet& samples, const StockVector& s,
                                             int i) {
  if (model.any_discrete())
    throw ValidationError("curvature_condition_check requires a continuous demand model");
  if (i < 1 || i > cfg.n) throw ValidationError("curvature_condition_check: bad retailer index");

  CurvatureCondition out;
  const double spill_rate = cfg.alpha[0][static_cast<std::size_t>(i)];
  const std::size_t rows = samples.rows();

  const std::vector<double> comp_i = composite_column(cfg, samples, s, i);
  std::vector<double> comp_i_cond;  // rows where the leader's primary demand exceeds its stock
  comp_i_cond.reserve(rows / 2);
  std::size_t leader_excess_rows = 0, covered_i = 0;
  for (std::size_t t = 0; t < rows; ++t) {
    if (samples.at(t, 0) > s[0]) {
      ++leader_excess_rows;
      comp_i_cond.push_back(comp_i[t]);
    }
    if (comp_i[t] <= s[i]) ++covered_i;
  }
  out.conditioning_rows = leader_excess_rows;
  if (leader_excess_rows < 1000) {
    out.inconclusive = true;
    return out;
  }

  const double p_leader_excess = static_cast<double>(leader_excess_rows) / static_cast<double>(rows);
  const double p_leader_covered = 1.0 - p_leader_excess;
  const double p_uncovered_i = 1.0 - static_cast<double>(covered_i) / static_cast<double>(rows);

  const KernelDensity kd_all = KernelDensity::fit(comp_i);
  const KernelDensity kd_cond = KernelDensity::fit(comp_i_cond);
  const double f_all = kd_all.pdf(s[i]);
  const double f_cond = kd_cond.pdf(s[i]);
  const double f_cond_slope = kd_cond.pdf_derivative(s[i]);
  const double f_leader_primary = model.marginals[0].pdf(s[0]);

  out.term_density_slope = spill_rate * spill_rate * f_cond_slope * f_all * p_leader_covered *
                           p_leader_excess * p_uncovered_i;
  out.term_density_square =
      spill_rate * spill_rate * f_cond * f_cond * p_leader_excess * p_leader_excess * f_all;
  out.term_coupling = spill_rate * f_all * f_leader_primary * f_all * p_uncovered_i;
  out.value = out.term_density_slope + out.term_density_square - out.term_coupling;
  out.holds = out.value >= 0.0;
  return out;
}

StackelbergReport stackelberg_solve(const MarketConfig& cfg, const DemandModel& model,
                                    const SampleSet& samples, const StackelbergOptions& opts) {
  StackelbergReport rep;
  const int grid_points = std::max(2, opts.grid_points);
  const StockVector upper = stock_upper_bounds(cfg, samples);
  const double s_top = std::max(upper[0], 1e-9);
  rep.tol = opts.tol > 0.0 ? opts.tol : 1e-3 * std::max(s_top, 1.0);
  rep.grid_spacing = s_top / static_cast<double>(grid_points - 1);
  const double follower_tol = rep.tol / 4.0;

  std::vector<double> levels(static_cast<std::size_t>(grid_points));
  std::vector<double> values(static_cast<std::size_t>(grid_points));
  rep.leader_profit_curve.reserve(levels.size());
  for (int k = 0; k < grid_points; ++k) {
    const double level = rep.grid_spacing * static_cast<double>(k);
    const LeaderEval ev =
        evaluate_leader(cfg, model, samples, level, follower_tol, opts.follower_max_iter);
    levels[static_cast<std::size_t>(k)] = level;
    values[static_cast<std::size_t>(k)] = ev.profit;
    rep.leader_profit_curve.emplace_back(level, ev.profit);
  }

  const auto [vmin_it, vmax_it] = std::minmax_element(values.begin(), values.end());
  const double flat_eps = 1e-3 * std::max(*vmax_it - *vmin_it, 0.0);
  const ScanShape shape = analyze_scan(values, flat_eps);
  rep.quasiconcave = shape.unimodal;

  // Golden-section refinement around a peak index; the scan is deterministic,
  // so refinement is too.
  const auto refine = [&](std::size_t peak) {
    double a = levels[peak > 0 ? peak - 1 : peak];
    double b = levels[peak + 1 < levels.size() ? peak + 1 : peak];
    if (a >= b) return std::make_pair(levels[peak], values[peak]);
    double x1 = b - kGoldenRatio * (b - a);
    double x2 = a + kGoldenRatio * (b - a);
    double f1 = evaluate_leader(cfg, model, samples, x1, follower_tol, opts.follower_max_iter).profit;
    double f2 = evaluate_leader(cfg, model, samples, x2, follower_tol, opts.follower_max_iter).profit;
    while (b - a > rep.tol) {
      if (f1 < f2) {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + kGoldenRatio * (b - a);
        f2 = evaluate_leader(cfg, model, samples, x2, follower_tol, opts.follower_max_iter).profit;
      } else {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - kGoldenRatio * (b - a);
        f1 = evaluate_leader(cfg, model, samples, x1, follower_tol, opts.follower_max_iter).profit;
      }
    }
    const double mid = 0.5 * (a + b);
    const double fm = evaluate_leader(cfg, model, samples, mid, follower_tol, opts.follower_max_iter).profit;
    return std::make_pair(mid, fm);
  };

  std::vector<std::size_t> to_refine;
  if (shape.unimodal) {
    to_refine.push_back(static_cast<std::size_t>(
        std::max_element(values.begin(), values.end()) - values.begin()));
  } else {
    to_refine = shape.peaks;
  }

  double best_level = levels[to_refine.front()];
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t peak : to_refine) {
    const auto [lvl, val] = refine(peak);
    if (val > best_value + 1e-15 || (std::abs(val - best_value) <= 1e-15 && lvl < best_level)) {
      best_value = val;
      best_level = lvl;
    }
  }

  rep.leader_stock = best_level;
  const LeaderEval at_best =
      evaluate_leader(cfg, model, samples, best_level, follower_tol, opts.follower_max_iter);
  rep.follower_stocks = at_best.followers;

  StockVector s_opt = StockVector::zeros(cfg.channels());
  s_opt[0] = best_level;
  for (int i = 1; i <= cfg.n; ++i) s_opt[i] = at_best.followers[static_cast<std::size_t>(i - 1)];
  rep.leader_profit = profit_manufacturer(cfg, model, samples, s_opt);
  rep.profits.resize(static_cast<std::size_t>(cfg.channels()));
  rep.profits[0] = rep.leader_profit;
  for (int i = 1; i <= cfg.n; ++i)
    rep.profits[static_cast<std::size_t>(i)] = profit_retailer(cfg, model, samples, s_opt, i);

  const double slope_step = 0.5 * rep.grid_spacing;
  rep.slope_estimates.resize(static_cast<std::size_t>(cfg.n));
  rep.curvature_flags.assign(static_cast<std::size_t>(cfg.n), false);
  rep.curvature_inconclusive.assign(static_cast<std::size_t>(cfg.n), false);
  for (int i = 1; i <= cfg.n; ++i) {
    rep.slope_estimates[static_cast<std::size_t>(i - 1)] =
        follower_slope(cfg, model, samples, best_level, i, slope_step, follower_tol).slope;
    if (!model.any_discrete()) {
      const CurvatureCondition cc = curvature_condition_check(cfg, model, samples, s_opt, i);
      rep.curvature_flags[static_cast<std::size_t>(i - 1)] = cc.holds;
      rep.curvature_inconclusive[static_cast<std::size_t>(i - 1)] = cc.inconclusive;
    }
  }
  return rep;
}

GameComparison compare_games(const MarketConfig& cfg, const DemandModel& model,
                             const SampleSet& samples, const NashOptions& nash_opts,
                             const StackelbergOptions& st_opts) {
  GameComparison cmp;
  cmp.nash = nash_solve(cfg, model, samples, nash_opts);
  if (!cmp.nash.converged)
    throw SolverError("compare_games: simultaneous-move solve did not converge");
  cmp.stackelberg = stackelberg_solve(cfg, model, samples, st_opts);

  cmp.leader_stock_minus_nash = cmp.stackelberg.leader_stock - cmp.nash.stocks[0];
  cmp.leader_profit_minus_nash = cmp.stackelberg.leader_profit.value - cmp.nash.profits[0].value;

  // Per-row difference of the leader's profit at the two solutions: the
  // common random numbers make this the right noise scale for the
  // dominance comparison.
  StockVector s_st = StockVector::zeros(cfg.channels());
  s_st[0] = cmp.stackelberg.leader_stock;
  for (int i = 1; i <= cfg.n; ++i)
    s_st[i] = cmp.stackelberg.follower_stocks[static_cast<std::size_t>(i - 1)];
  std::vector<double> rows_st, rows_nash;
  profit_rows(cfg, samples, s_st, 0, rows_st);
  profit_rows(cfg, samples, cmp.nash.stocks, 0, rows_nash);
  for (std::size_t t = 0; t < rows_st.size(); ++t) rows_st[t] -= rows_nash[t];
  const MeanStdErr diff = mean_std_error(rows_st);
  cmp.profit_diff_std_error = diff.std_error;
  cmp.leader_dominance_ok = diff.mean >= -4.0 * diff.std_error;

  cmp.w_equals_c = true;
  for (int i = 1; i <= cfg.n; ++i)
    if (cfg.wholesale(i) != cfg.c) cmp.w_equals_c = false;
  if (cmp.w_equals_c)
    cmp.leader_stock_ordered =
        cmp.stackelberg.leader_stock >= cmp.nash.stocks[0] - 5.0 * cmp.stackelberg.tol;
  return cmp;
}

}  // namespace mcinv

#include "mcinv/nash.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdint>

#include "mcinv/common.hpp"
#include "mcinv/stats.hpp"

namespace mcinv {

namespace {

void check_retailer_index(const MarketConfig& cfg, int i) {
  if (i < 1 || i > cfg.n)
    throw ValidationError("retailer index " + std::to_string(i) + " out of range [1, " +
                          std::to_string(cfg.n) + "]");
}

// Empirical stationarity function of the manufacturer's stock: negative of
// the own-stock profit derivative, evaluated with joint frequencies. The
// retailer composite demands are recomputed per candidate level because the
// manufacturer's excess spills into them.
class ManufacturerStationarity {
public:
  ManufacturerStationarity(const MarketConfig& cfg, const SampleSet& samples,
                           const StockVector& s)
      : cfg_(cfg), samples_(samples), s_(s) {
    const std::size_t rows = samples.rows();
    const std::size_t ch = samples.cols();
    // Composite demand at the manufacturer outlet ignores the manufacturer's
    // own stock, so it is fixed during the root search.
    own_composite_ = composite_column(cfg, samples, s, 0);
    // Retailer composite minus the manufacturer spill term.
    retailer_base_.assign(rows * static_cast<std::size_t>(cfg.n), 0.0);
    parallel_for_rows(rows, [&](std::size_t begin, std::size_t end) {
      for (std::size_t t = begin; t < end; ++t) {
        const double* p = samples_.row_ptr(t);
        for (int i = 1; i <= cfg_.n; ++i) {
          double base = p[i];
          for (std::size_t l = 1; l < ch; ++l) {
            if (static_cast<int>(l) == i) continue;
            base += cfg_.alpha[l][static_cast<std::size_t>(i)] *
                    std::max(p[l] - s_[static_cast<int>(l)], 0.0);
          }
          retailer_base_[t * static_cast<std::size_t>(cfg_.n) + static_cast<std::size_t>(i - 1)] = base;
        }
      }
    });
  }

  double operator()(double level) const {
    const std::size_t rows = samples_.rows();
    const int n = cfg_.n;
    std::int64_t covered_own = 0;
    std::vector<std::int64_t> joint(static_cast<std::size_t>(n), 0);
    for (std::size_t t = 0; t < rows; ++t) {
      if (own_composite_[t] <= level) ++covered_own;
      const double* p = samples_.row_ptr(t);
      const double excess = p[0] - level;
      if (excess > 0.0) {
        for (int i = 1; i <= n; ++i) {
          const double d = retailer_base_[t * static_cast<std::size_t>(n) + static_cast<std::size_t>(i - 1)] +
                           cfg_.alpha[0][static_cast<std::size_t>(i)] * excess;
          if (d <= s_[i]) ++joint[static_cast<std::size_t>(i - 1)];
        }
      }
    }
    const double inv_n = 1.0 / static_cast<double>(rows);
    double value = (cfg_.p_m - cfg_.c + cfg_.h_m) * static_cast<double>(covered_own) * inv_n -
                   (cfg_.p_m - cfg_.c);
    for (int i = 1; i <= n; ++i)
      value += cfg_.alpha[0][static_cast<std::size_t>(i)] * (cfg_.wholesale(i) - cfg_.c) *
               static_cast<double>(joint[static_cast<std::size_t>(i - 1)]) * inv_n;
    return value;
  }

private:
  const MarketConfig& cfg_;
  const SampleSet& samples_;
  StockVector s_;
  std::vector<double> own_composite_;
  std::vector<double> retailer_base_;
};

struct SweepResult {
  StockVector limit;
  std::vector<StockVector> trace;
  int iterations = 0;
  bool converged = false;
  bool corner = false;
  bool bracketed = true;
};

SweepResult gauss_seidel(const MarketConfig& cfg, const DemandModel& model,
                         const SampleSet& samples, StockVector start, double tol, int max_iter,
                         double damping, const StockVector& upper) {
  SweepResult res;
  StockVector s = std::move(start);
  res.trace.push_back(s);
  const double br_tol = tol / 8.0;
  for (int it = 0; it < max_iter; ++it) {
    double delta = 0.0;
    {
      const ManufacturerBR br = best_response_manufacturer(cfg, model, samples, s, br_tol);
      res.corner = br.corner;
      res.bracketed = br.bracketed;
      const double next = (1.0 - damping) * s[0] + damping * br.level;
      delta = std::max(delta, std::abs(next - s[0]));
      s[0] = next;
    }
    for (int i = 1; i <= cfg.n; ++i) {
      const double br = best_response_retailer(cfg, model, samples, s, i);
      const double next = (1.0 - damping) * s[i] + damping * br;
      delta = std::max(delta, std::abs(next - s[i]));
      s[i] = next;
    }
    res.trace.push_back(s);
    res.iterations = it + 1;
    if (delta < tol) {
      res.converged = true;
      break;
    }
  }
  (void)upper;
  res.limit = s;
  return res;
}

}  // namespace

const char* unique_flag_name(UniqueFlag f) {
  switch (f) {
    case UniqueFlag::proven_by_c2: return "proven-by-C2";
    case UniqueFlag::bracket_coincide: return "bracket-coincide";
    case UniqueFlag::multiple_detected: return "multiple-detected";
    case UniqueFlag::unknown: return "unknown";
  }
  return "?";
}

double best_response_retailer(const MarketConfig& cfg, const DemandModel& model,
                              const SampleSet& samples, const StockVector& s_others, int i) {
  (void)model;
  check_retailer_index(cfg, i);
  std::vector<double> col = composite_column(cfg, samples, s_others, i);
  return empirical_quantile_inplace(col, cfg.retailer_fractile(i));
}

ManufacturerBR best_response_manufacturer(const MarketConfig& cfg, const DemandModel& model,
                                          const SampleSet& samples, const StockVector& s_others,
                                          double xtol) {
  (void)model;
  const ManufacturerStationarity phi(cfg, samples, s_others);
  std::vector<double> own = composite_column(cfg, samples, s_others, 0);
  const double s_max = *std::max_element(own.begin(), own.end());
  const double width_tol = std::max(xtol > 0.0 ? xtol : 1e-6 * std::max(s_max, 1.0),
                                    1e-12 * std::max(s_max, 1.0));

  if (phi(0.0) >= 0.0) return ManufacturerBR{0.0, true, true};
  if (phi(s_max) < 0.0) return ManufacturerBR{s_max, false, false};

  double lo = 0.0, hi = s_max;
  while (hi - lo > width_tol) {
    const double mid = 0.5 * (lo + hi);
    if (phi(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return ManufacturerBR{0.5 * (lo + hi), false, true};
}

EquilibriumReport nash_solve(const MarketConfig& cfg, const DemandModel& model,
                             const SampleSet& samples, const NashOptions& opts) {
  EquilibriumReport rep;
  const ConditionReport conditions = check_conditions(cfg);
  rep.c1_holds = conditions.c1.holds;

  const StockVector upper = stock_upper_bounds(cfg, samples);
  double top = 0.0;
  for (int j = 0; j < upper.channels(); ++j) top = std::max(top, upper[j]);
  rep.tol = opts.tol > 0.0 ? opts.tol : 1e-3 * std::max(top, 1.0);
  const double damping = std::clamp(opts.damping, 1e-9, 1.0);

  SweepResult from_below = gauss_seidel(cfg, model, samples, StockVector::zeros(cfg.channels()),
                                        rep.tol, opts.max_iter, damping, upper);
  SweepResult from_above =
      gauss_seidel(cfg, model, samples, upper, rep.tol, opts.max_iter, damping, upper);

  rep.stocks = from_above.limit;
  rep.trace = std::move(from_above.trace);
  rep.converged = from_below.converged && from_above.converged;
  rep.manufacturer_corner = from_above.corner;
  rep.manufacturer_bracketed = from_above.bracketed && from_below.bracketed;
  rep.iterations_from_below = from_below.iterations;
  rep.iterations_from_above = from_above.iterations;

  StockVector lower_hull = StockVector::zeros(cfg.channels());
  StockVector upper_hull = StockVector::zeros(cfg.channels());
  double bracket_gap = 0.0;
  for (int j = 0; j < cfg.channels(); ++j) {
    lower_hull[j] = std::min(from_below.limit[j], from_above.limit[j]);
    upper_hull[j] = std::max(from_below.limit[j], from_above.limit[j]);
    bracket_gap = std::max(bracket_gap, upper_hull[j] - lower_hull[j]);
  }
  rep.bracket = {lower_hull, upper_hull};

  if (!rep.converged) {
    rep.unique_flag = UniqueFlag::unknown;
  } else if (conditions.c2.holds) {
    rep.unique_flag = UniqueFlag::proven_by_c2;
  } else if (bracket_gap <= 5.0 * rep.tol) {
    rep.unique_flag = UniqueFlag::bracket_coincide;
  } else {
    rep.unique_flag = UniqueFlag::multiple_detected;
  }

  rep.profits.resize(static_cast<std::size_t>(cfg.channels()));
  rep.profits[0] = profit_manufacturer(cfg, model, samples, rep.stocks);
  for (int i = 1; i <= cfg.n; ++i)
    rep.profits[static_cast<std::size_t>(i)] = profit_retailer(cfg, model, samples, rep.stocks, i);

  rep.residuals.resize(static_cast<std::size_t>(cfg.channels()));
  const ManufacturerBR mbr = best_response_manufacturer(cfg, model, samples, rep.stocks, rep.tol / 8.0);
  rep.residuals[0] = std::abs(mbr.level - rep.stocks[0]);
  for (int i = 1; i <= cfg.n; ++i)
    rep.residuals[static_cast<std::size_t>(i)] =
        std::abs(best_response_retailer(cfg, model, samples, rep.stocks, i) - rep.stocks[i]);

  return rep;
}

UniquenessDiagnostic uniqueness_diagnostic(const MarketConfig& cfg, const DemandModel& model,
                                           const SampleSet& samples, const StockVector& s) {
  const int ch = cfg.channels();
  UniquenessDiagnostic diag;
  diag.h = Eigen::MatrixXd::Zero(ch, ch);

  int blocks = 0;
  std::vector<Eigen::MatrixXd> block_h;
  for (int j = 0; j < ch; ++j) {
    const HessianFD hj = hessian_fd(cfg, model, samples, j, s);
    if (block_h.empty()) {
      blocks = static_cast<int>(hj.block_matrices.size());
      block_h.assign(static_cast<std::size_t>(blocks), Eigen::MatrixXd::Zero(ch, ch));
    }
    for (int k = 0; k < ch; ++k) {
      diag.h(j, k) = hj.matrix(j, k);
      for (int b = 0; b < blocks; ++b)
        block_h[static_cast<std::size_t>(b)](j, k) = hj.block_matrices[static_cast<std::size_t>(b)](j, k);
    }
  }

  diag.h_sym = diag.h + diag.h.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(diag.h_sym);
  diag.lambda_max = solver.eigenvalues().maxCoeff();

  std::vector<double> lambda_blocks;
  lambda_blocks.reserve(static_cast<std::size_t>(blocks));
  for (const auto& hb : block_h) {
    Eigen::MatrixXd sym = hb + hb.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    lambda_blocks.push_back(es.eigenvalues().maxCoeff());
  }
  diag.jackknife_se = jackknife_std_error(lambda_blocks);
  diag.inconclusive = std::abs(diag.lambda_max) < 4.0 * diag.jackknife_se;
  return diag;
}

}  // namespace mcinv

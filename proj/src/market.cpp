#include "mcinv/market.hpp"

#include <cmath>
#include <sstream>

#include "mcinv/common.hpp"

namespace mcinv {

namespace {

std::string format_num(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

}  // namespace

double MarketConfig::retailer_fractile(int ch) const {
  const double margin = retail_price(ch) - wholesale(ch);
  return margin / (margin + holding(ch));
}

double MarketConfig::manufacturer_fractile() const {
  return (p_m - c) / (p_m - c + h_m);
}

bool ConditionReport::c3_all() const {
  for (const auto& f : c3)
    if (!f.holds) return false;
  return true;
}

MarketConfig validate_config(MarketConfig cfg) {
  const auto fail = [](const std::string& msg) { throw ValidationError(msg); };

  if (cfg.n < 1) fail("n must be a positive integer");
  const std::size_t n = static_cast<std::size_t>(cfg.n);
  if (cfg.w.size() != n) fail("w must have n entries");
  if (cfg.p_r.size() != n) fail("p_r must have n entries");
  if (cfg.h_r.size() != n) fail("h_r must have n entries");
  const std::size_t ch = n + 1;
  if (cfg.alpha.size() != ch) fail("alpha must have n+1 rows");
  for (std::size_t j = 0; j < ch; ++j)
    if (cfg.alpha[j].size() != ch)
      fail("alpha row " + std::to_string(j) + " must have n+1 entries");

  if (!(cfg.c >= 0.0)) fail("c < 0");
  if (!(cfg.c < cfg.p_m)) fail("c >= p_m");
  if (!(cfg.h_m >= 0.0)) fail("h_m < 0");
  for (std::size_t i = 0; i < n; ++i) {
    const std::string idx = "[" + std::to_string(i) + "]";
    if (!(cfg.w[i] >= cfg.c)) fail("w" + idx + " < c");
    if (!(cfg.w[i] < cfg.p_r[i])) fail("w" + idx + " >= p_r" + idx);
    if (!(cfg.h_r[i] >= 0.0)) fail("h_r" + idx + " < 0");
  }
  for (std::size_t j = 0; j < ch; ++j) {
    double row_sum = 0.0;
    for (std::size_t k = 0; k < ch; ++k) {
      const double a = cfg.alpha[j][k];
      if (!(a >= 0.0 && a <= 1.0))
        fail("alpha[" + std::to_string(j) + "][" + std::to_string(k) + "] outside [0, 1]");
      if (j == k && a != 0.0)
        fail("alpha[" + std::to_string(j) + "][" + std::to_string(j) + "] must be 0");
      row_sum += a;
    }
    if (row_sum > 1.0 + 1e-12)
      fail("alpha row " + std::to_string(j) + " sums to " + format_num(row_sum));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(cfg.w[i]) || !std::isfinite(cfg.p_r[i]) || !std::isfinite(cfg.h_r[i]))
      fail("non-finite retailer parameter at index " + std::to_string(i));
  }
  if (!std::isfinite(cfg.c) || !std::isfinite(cfg.p_m) || !std::isfinite(cfg.h_m))
    fail("non-finite parameter");

  return cfg;
}

ConditionReport check_conditions(const MarketConfig& cfg) {
  ConditionReport rep;
  double substitution_margin = 0.0;  // sum over retailers of alpha[0][i] * (w_i - c)
  for (int i = 1; i <= cfg.n; ++i)
    substitution_margin +=
        cfg.alpha[0][static_cast<std::size_t>(i)] * (cfg.wholesale(i) - cfg.c);

  rep.c1.slack = (cfg.p_m - cfg.c + cfg.h_m) - substitution_margin;
  rep.c1.holds = rep.c1.slack > 0.0;
  rep.c2.slack = (cfg.p_m - cfg.c) - substitution_margin;
  rep.c2.holds = rep.c2.slack > 0.0;

  rep.c3.resize(static_cast<std::size_t>(cfg.n));
  for (int i = 1; i <= cfg.n; ++i) {
    double rhs = cfg.alpha[static_cast<std::size_t>(i)][0] * (cfg.p_m - cfg.c + cfg.h_m);
    for (int l = 1; l <= cfg.n; ++l) {
      if (l == i) continue;
      rhs += cfg.alpha[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)] *
             (cfg.wholesale(l) - cfg.c);
    }
    auto& flag = rep.c3[static_cast<std::size_t>(i - 1)];
    flag.slack = (cfg.wholesale(i) - cfg.c) - rhs;
    flag.holds = flag.slack > 0.0;
  }
  return rep;
}

}  // namespace mcinv

#pragma once

#include <string>
#include <vector>

namespace mcinv {

/// All exogenous parameters of the one-manufacturer / n-retailer game.
///
/// Channel indexing convention used everywhere in this library:
/// channel 0 is the manufacturer's own outlet, channels 1..n are the
/// retailers. Retailer-specific arrays (w, p_r, h_r) are stored 0-based,
/// so retailer channel `ch` maps to array slot `ch - 1`.
struct MarketConfig {
  int n = 0;                  ///< number of retailers
  double c = 0.0;             ///< unit production cost
  double p_m = 0.0;           ///< manufacturer channel retail price
  double h_m = 0.0;           ///< manufacturer holding cost per unit per period
  std::vector<double> w;      ///< wholesale price per retailer
  std::vector<double> p_r;    ///< retail price per retailer
  std::vector<double> h_r;    ///< holding cost per retailer
  /// Substitution rates, row = origin channel, column = destination channel.
  /// alpha[j][k] is the fraction of channel j's unmet primary demand that
  /// moves to channel k. Diagonal is zero, row sums are at most one.
  std::vector<std::vector<double>> alpha;

  int channels() const { return n + 1; }

  // Channel-indexed accessors, ch in 1..n.
  double wholesale(int ch) const { return w[static_cast<std::size_t>(ch - 1)]; }
  double retail_price(int ch) const { return p_r[static_cast<std::size_t>(ch - 1)]; }
  double holding(int ch) const { return ch == 0 ? h_m : h_r[static_cast<std::size_t>(ch - 1)]; }

  /// Critical fractile of retailer channel ch: (p_r - w) / (p_r - w + h_r).
  double retailer_fractile(int ch) const;
  /// Critical fractile of a decoupled manufacturer outlet: (p_m - c) / (p_m - c + h_m).
  double manufacturer_fractile() const;
};

/// One parameter condition: whether the strict inequality holds and by how much.
struct ConditionFlag {
  bool holds = false;
  double slack = 0.0;  ///< left side minus right side of the inequality
};

/// Evaluation of the three parameter conditions.
///
/// c1: own-channel margin plus holding exceeds the substitution margin the
///     manufacturer would collect by pushing customers to the retailers;
///     guarantees concavity of the manufacturer objective.
/// c2: same comparison without the holding cost; guarantees the manufacturer
///     stocks a positive amount in equilibrium.
/// c3: per retailer, the wholesale margin dominates the margins recoverable
///     through substitution out of that retailer's channel.
struct ConditionReport {
  ConditionFlag c1;
  ConditionFlag c2;
  std::vector<ConditionFlag> c3;  ///< one per retailer

  bool c3_all() const;
};

/// Checks every MarketConfig invariant and returns the config unchanged.
/// Throws ValidationError naming the first violated invariant, e.g.
/// "w[0] >= p_r[0]" or "alpha row 1 sums to 1.2".
///
/// Wholesale prices equal to the production cost are accepted: the
/// zero-wholesale-margin boundary is a meaningful configuration (the game
/// degenerates to pure horizontal competition) and the leader/follower
/// comparison is defined exactly there.
MarketConfig validate_config(MarketConfig cfg);

/// Evaluates the parameter conditions. Flags use strict inequalities, so a
/// slack of exactly zero reports false. Pure function of cfg.
ConditionReport check_conditions(const MarketConfig& cfg);

}  // namespace mcinv

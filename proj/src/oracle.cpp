#include "mcinv/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mcinv/common.hpp"
#include "mcinv/stats.hpp"

namespace mcinv {

namespace {

// Per-realization profit of one channel given composite demand D.
double realization_profit(const MarketConfig& cfg, const StockVector& s,
                          const std::vector<double>& d, int channel) {
  if (channel == 0) {
    double v = (cfg.p_m - cfg.c) * s[0] -
               (cfg.p_m - cfg.c + cfg.h_m) * std::max(s[0] - d[0], 0.0);
    for (int i = 1; i <= cfg.n; ++i) {
      const double margin = cfg.wholesale(i) - cfg.c;
      v += margin * s[i] - margin * std::max(s[i] - d[static_cast<std::size_t>(i)], 0.0);
    }
    return v;
  }
  const double margin = cfg.retail_price(channel) - cfg.wholesale(channel);
  return margin * s[channel] -
         (margin + cfg.holding(channel)) *
             std::max(s[channel] - d[static_cast<std::size_t>(channel)], 0.0);
}

// Order-canonical expectation: contributions are sorted before summation so
// any enumeration order of the support yields bit-identical results.
double canonical_expectation(std::vector<double>& contributions) {
  std::sort(contributions.begin(), contributions.end());
  return compensated_sum(contributions);
}

struct GridIndexer {
  std::vector<std::size_t> sizes;
  std::vector<std::size_t> strides;
  std::size_t total = 1;

  explicit GridIndexer(const std::vector<std::vector<double>>& grid) {
    sizes.reserve(grid.size());
    strides.reserve(grid.size());
    for (const auto& g : grid) {
      strides.push_back(total);
      sizes.push_back(g.size());
      total *= g.size();
    }
  }

  std::size_t index_of(const std::vector<std::size_t>& idx) const {
    std::size_t flat = 0;
    for (std::size_t j = 0; j < idx.size(); ++j) flat += idx[j] * strides[j];
    return flat;
  }

  void decode(std::size_t flat, std::vector<std::size_t>& idx) const {
    for (std::size_t j = 0; j < sizes.size(); ++j) {
      idx[j] = (flat / strides[j]) % sizes[j];
    }
  }
};

constexpr std::size_t kMaxGridPoints = 1'000'000;

}  // namespace

void DiscreteScenario::validate() const {
  if (support.empty()) throw ValidationError("discrete scenario: empty support");
  CompensatedSum total;
  const std::size_t ch = static_cast<std::size_t>(cfg.channels());
  std::vector<double> max_primary(ch, 0.0);
  for (const auto& atom : support) {
    if (atom.demand.size() != ch)
      throw ValidationError("discrete scenario: atom dimension mismatch");
    if (!(atom.prob > 0.0)) throw ValidationError("discrete scenario: atom probability <= 0");
    total.add(atom.prob);
    for (std::size_t j = 0; j < ch; ++j)
      max_primary[j] = std::max(max_primary[j], atom.demand[j]);
  }
  if (std::abs(total.value() - 1.0) > 1e-12)
    throw ValidationError("discrete scenario: probabilities sum to " +
                          std::to_string(total.value()));
  if (grid.size() != ch) throw ValidationError("discrete scenario: grid needs one list per channel");
  for (std::size_t j = 0; j < ch; ++j) {
    const auto& g = grid[j];
    if (g.size() < 2) throw ValidationError("discrete scenario: grid too small");
    if (g.front() != 0.0) throw ValidationError("discrete scenario: grid must include 0");
    for (std::size_t k = 1; k < g.size(); ++k)
      if (!(g[k] > g[k - 1])) throw ValidationError("discrete scenario: grid must be increasing");
    if (!(g.back() > max_primary[j]))
      throw ValidationError("discrete scenario: grid must exceed the largest support demand");
  }
}

std::vector<DemandAtom> product_support(const std::vector<Marginal>& marginals) {
  std::vector<DemandAtom> atoms;
  atoms.push_back(DemandAtom{{}, 1.0});
  for (const auto& m : marginals) {
    if (!m.is_discrete())
      throw ValidationError("product_support requires discrete marginals");
    std::vector<DemandAtom> next;
    next.reserve(atoms.size() * m.values.size());
    for (const auto& atom : atoms) {
      for (std::size_t i = 0; i < m.values.size(); ++i) {
        DemandAtom a = atom;
        a.demand.push_back(m.values[i]);
        a.prob *= m.probs[i];
        next.push_back(std::move(a));
      }
    }
    atoms = std::move(next);
  }
  return atoms;
}

DemandModel discrete_model(const std::vector<Marginal>& marginals) {
  DemandModel model;
  model.marginals = marginals;
  model.dependence = DemandModel::Dependence::independent;
  return model;
}

double exact_profit_channel(const DiscreteScenario& ds, const StockVector& s, int channel) {
  std::vector<double> contributions;
  contributions.reserve(ds.support.size());
  for (const auto& atom : ds.support) {
    const std::vector<double> d = composite_demand(ds.cfg, s, atom.demand);
    contributions.push_back(atom.prob * realization_profit(ds.cfg, s, d, channel));
  }
  return canonical_expectation(contributions);
}

std::vector<double> exact_profit(const DiscreteScenario& ds, const StockVector& s) {
  const int ch = ds.cfg.channels();
  std::vector<std::vector<double>> contributions(static_cast<std::size_t>(ch));
  for (auto& c : contributions) c.reserve(ds.support.size());
  for (const auto& atom : ds.support) {
    const std::vector<double> d = composite_demand(ds.cfg, s, atom.demand);
    for (int j = 0; j < ch; ++j)
      contributions[static_cast<std::size_t>(j)].push_back(
          atom.prob * realization_profit(ds.cfg, s, d, j));
  }
  std::vector<double> out(static_cast<std::size_t>(ch));
  for (int j = 0; j < ch; ++j)
    out[static_cast<std::size_t>(j)] = canonical_expectation(contributions[static_cast<std::size_t>(j)]);
  return out;
}

GridEquilibria grid_nash(const DiscreteScenario& ds, double eps) {
  ds.validate();
  const int ch = ds.cfg.channels();
  GridIndexer indexer(ds.grid);
  if (indexer.total > kMaxGridPoints)
    throw ValidationError("grid_nash: grid product exceeds the exhaustive-search limit");

  // Profit of every player at every grid point.
  std::vector<double> profit(indexer.total * static_cast<std::size_t>(ch));
  std::vector<std::size_t> idx(static_cast<std::size_t>(ch));
  StockVector s = StockVector::zeros(ch);
  for (std::size_t flat = 0; flat < indexer.total; ++flat) {
    indexer.decode(flat, idx);
    for (int j = 0; j < ch; ++j) s[j] = ds.grid[static_cast<std::size_t>(j)][idx[static_cast<std::size_t>(j)]];
    const std::vector<double> p = exact_profit(ds, s);
    for (int j = 0; j < ch; ++j)
      profit[flat * static_cast<std::size_t>(ch) + static_cast<std::size_t>(j)] =
          p[static_cast<std::size_t>(j)];
  }

  // Best achievable profit along each player's own grid line.
  std::vector<double> line_max(indexer.total * static_cast<std::size_t>(ch));
  for (int j = 0; j < ch; ++j) {
    const std::size_t ju = static_cast<std::size_t>(j);
    for (std::size_t flat = 0; flat < indexer.total; ++flat) {
      indexer.decode(flat, idx);
      if (idx[ju] != 0) continue;
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < indexer.sizes[ju]; ++k)
        best = std::max(best, profit[(flat + k * indexer.strides[ju]) * static_cast<std::size_t>(ch) + ju]);
      for (std::size_t k = 0; k < indexer.sizes[ju]; ++k)
        line_max[(flat + k * indexer.strides[ju]) * static_cast<std::size_t>(ch) + ju] = best;
    }
  }

  GridEquilibria out;
  for (std::size_t flat = 0; flat < indexer.total; ++flat) {
    bool eq = true;
    for (int j = 0; j < ch && eq; ++j) {
      const std::size_t ju = static_cast<std::size_t>(j);
      eq = line_max[flat * static_cast<std::size_t>(ch) + ju] <=
           profit[flat * static_cast<std::size_t>(ch) + ju] + eps;
    }
    if (eq) {
      indexer.decode(flat, idx);
      StockVector point = StockVector::zeros(ch);
      for (int j = 0; j < ch; ++j)
        point[j] = ds.grid[static_cast<std::size_t>(j)][idx[static_cast<std::size_t>(j)]];
      out.points.push_back(std::move(point));
    }
  }
  out.empty_flag = out.points.empty();
  return out;
}

std::vector<std::vector<double>> grid_follower_nash(const DiscreteScenario& ds,
                                                    double leader_level, double eps) {
  const int n = ds.cfg.n;
  std::vector<std::vector<double>> retailer_grid(ds.grid.begin() + 1, ds.grid.end());
  GridIndexer indexer(retailer_grid);

  std::vector<double> profit(indexer.total * static_cast<std::size_t>(n));
  std::vector<std::size_t> idx(static_cast<std::size_t>(n));
  StockVector s = StockVector::zeros(n + 1);
  s[0] = leader_level;
  for (std::size_t flat = 0; flat < indexer.total; ++flat) {
    indexer.decode(flat, idx);
    for (int i = 0; i < n; ++i)
      s[i + 1] = retailer_grid[static_cast<std::size_t>(i)][idx[static_cast<std::size_t>(i)]];
    for (int i = 0; i < n; ++i)
      profit[flat * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)] =
          exact_profit_channel(ds, s, i + 1);
  }

  std::vector<double> line_max(indexer.total * static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const std::size_t iu = static_cast<std::size_t>(i);
    for (std::size_t flat = 0; flat < indexer.total; ++flat) {
      indexer.decode(flat, idx);
      if (idx[iu] != 0) continue;
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < indexer.sizes[iu]; ++k)
        best = std::max(best, profit[(flat + k * indexer.strides[iu]) * static_cast<std::size_t>(n) + iu]);
      for (std::size_t k = 0; k < indexer.sizes[iu]; ++k)
        line_max[(flat + k * indexer.strides[iu]) * static_cast<std::size_t>(n) + iu] = best;
    }
  }

  std::vector<std::vector<double>> out;
  for (std::size_t flat = 0; flat < indexer.total; ++flat) {
    bool eq = true;
    for (int i = 0; i < n && eq; ++i) {
      const std::size_t iu = static_cast<std::size_t>(i);
      eq = line_max[flat * static_cast<std::size_t>(n) + iu] <=
           profit[flat * static_cast<std::size_t>(n) + iu] + eps;
    }
    if (eq) {
      indexer.decode(flat, idx);
      std::vector<double> levels(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i)
        levels[static_cast<std::size_t>(i)] =
            retailer_grid[static_cast<std::size_t>(i)][idx[static_cast<std::size_t>(i)]];
      out.push_back(std::move(levels));
    }
  }
  return out;
}

GridStackelberg grid_stackelberg(const DiscreteScenario& ds, double eps) {
  ds.validate();
  GridStackelberg out;
  bool found = false;
  for (double leader : ds.grid[0]) {
    const auto followers = grid_follower_nash(ds, leader, eps);
    if (followers.empty()) {
      out.follower_missing = true;
      continue;
    }
    if (followers.size() > 1) out.follower_multiplicity = true;
    // Evaluate the follower equilibrium worst for the leader.
    double worst_profit = std::numeric_limits<double>::infinity();
    const std::vector<double>* worst = nullptr;
    StockVector s = StockVector::zeros(ds.cfg.channels());
    s[0] = leader;
    for (const auto& f : followers) {
      for (int i = 0; i < ds.cfg.n; ++i) s[i + 1] = f[static_cast<std::size_t>(i)];
      const double lp = exact_profit_channel(ds, s, 0);
      if (lp < worst_profit) {
        worst_profit = lp;
        worst = &f;
      }
    }
    // Strict improvement keeps the lowest leader level on ties.
    if (!found || worst_profit > out.leader_profit) {
      found = true;
      out.leader_level = leader;
      out.leader_profit = worst_profit;
      out.follower_levels = *worst;
    }
  }
  if (!found) throw SolverError("grid_stackelberg: no leader level admits a follower equilibrium");
  return out;
}

}  // namespace mcinv

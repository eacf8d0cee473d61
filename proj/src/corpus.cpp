#include "mcinv/corpus.hpp"

#include <algorithm>
#include <cmath>

#include "mcinv/common.hpp"
#include "mcinv/rng.hpp"

namespace mcinv {

std::uint64_t CorpusRng::cell_seq(std::uint64_t seed, std::uint64_t k) {
  return cell_bits(seed ^ 0xa5b35705db1533bdULL, k, 0);
}

double CorpusRng::to_unit(std::uint64_t bits) { return bits_to_unit(bits); }

namespace {

Marginal random_marginal(CorpusRng& rng, CorpusFamily::Marginals kinds) {
  int pick;
  switch (kinds) {
    case CorpusFamily::Marginals::exponential_only: pick = 1; break;
    case CorpusFamily::Marginals::uniform_only: pick = 0; break;
    default: pick = rng.int_in(0, 2); break;
  }
  switch (pick) {
    case 0: {
      const double a = rng.uniform(0.0, 25.0);
      return Marginal::uniform_dist(a, a + rng.uniform(40.0, 120.0));
    }
    case 1:
      return Marginal::exponential_dist(1.0 / rng.uniform(25.0, 60.0));
    default:
      return Marginal::lognormal_dist(std::log(rng.uniform(25.0, 55.0)), rng.uniform(0.25, 0.5));
  }
}

std::vector<std::vector<double>> random_alpha(CorpusRng& rng, int channels, double lo, double hi) {
  std::vector<std::vector<double>> alpha(static_cast<std::size_t>(channels),
                                         std::vector<double>(static_cast<std::size_t>(channels), 0.0));
  for (int j = 0; j < channels; ++j) {
    double row_sum = 0.0;
    for (int k = 0; k < channels; ++k) {
      if (j == k) continue;
      alpha[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] = rng.uniform(lo, hi);
      row_sum += alpha[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
    }
    if (row_sum > 0.9) {
      const double scale = 0.9 / row_sum;
      for (int k = 0; k < channels; ++k)
        alpha[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] *= scale;
    }
  }
  return alpha;
}

Scenario build_candidate(CorpusRng& rng, const CorpusFamily& fam) {
  Scenario sc;
  MarketConfig& cfg = sc.cfg;
  cfg.n = rng.int_in(fam.n_min, fam.n_max);
  cfg.c = rng.uniform(1.0, 4.0);
  cfg.p_m = cfg.c + rng.uniform(4.0, 10.0);
  const double qm = rng.uniform(fam.fractile_lo, fam.fractile_hi);
  cfg.h_m = (cfg.p_m - cfg.c) * (1.0 - qm) / qm;
  const double qr_lo = fam.fractile_r_lo > 0.0 ? fam.fractile_r_lo : fam.fractile_lo;
  const double qr_hi = fam.fractile_r_hi > 0.0 ? fam.fractile_r_hi : fam.fractile_hi;
  for (int i = 0; i < cfg.n; ++i) {
    const double w = fam.w_equals_c ? cfg.c : cfg.c + rng.uniform(1.0, 4.0);
    const double pr = w + rng.uniform(2.0, 6.0);
    const double qr = rng.uniform(qr_lo, qr_hi);
    cfg.w.push_back(w);
    cfg.p_r.push_back(pr);
    cfg.h_r.push_back((pr - w) * (1.0 - qr) / qr);
  }
  const int ch = cfg.channels();
  cfg.alpha = fam.zero_alpha
                  ? std::vector<std::vector<double>>(static_cast<std::size_t>(ch),
                                                     std::vector<double>(static_cast<std::size_t>(ch), 0.0))
                  : random_alpha(rng, ch, fam.alpha_lo, fam.alpha_hi);
  for (int j = 0; j < ch; ++j) sc.model.marginals.push_back(random_marginal(rng, fam.marginals));
  return sc;
}

}  // namespace

Scenario random_scenario(std::uint64_t seed, const CorpusFamily& family) {
  for (std::uint64_t attempt = 0; attempt < 256; ++attempt) {
    CorpusRng rng(seed + attempt * 0x9e3779b97f4a7c15ULL);
    Scenario sc = build_candidate(rng, family);
    try {
      sc.cfg = validate_config(std::move(sc.cfg));
    } catch (const ValidationError&) {
      continue;
    }
    const ConditionReport rep = check_conditions(sc.cfg);
    if (family.require_c1 && !rep.c1.holds) continue;
    if (family.require_c2 && !rep.c2.holds) continue;
    if (family.require_c3 && !rep.c3_all()) continue;
    return sc;
  }
  throw SolverError("random_scenario: no candidate met the requested conditions");
}

Scenario random_discrete_scenario(std::uint64_t seed, int n, int grid_points) {
  for (std::uint64_t attempt = 0; attempt < 256; ++attempt) {
    CorpusRng rng(seed + 0x51ed2701ULL + attempt * 0x9e3779b97f4a7c15ULL);
    Scenario sc;
    MarketConfig& cfg = sc.cfg;
    cfg.n = n;
    cfg.c = rng.uniform(1.0, 3.0);
    cfg.p_m = cfg.c + rng.uniform(5.0, 9.0);
    const double qm = rng.uniform(0.55, 0.85);
    cfg.h_m = (cfg.p_m - cfg.c) * (1.0 - qm) / qm;
    for (int i = 0; i < n; ++i) {
      const double w = cfg.c + rng.uniform(1.5, 3.5);
      const double pr = w + rng.uniform(2.5, 5.0);
      const double qr = rng.uniform(0.55, 0.85);
      cfg.w.push_back(w);
      cfg.p_r.push_back(pr);
      cfg.h_r.push_back((pr - w) * (1.0 - qr) / qr);
    }
    cfg.alpha = random_alpha(rng, cfg.channels(), 0.15, 0.40);

    // Support sizes keep the product joint support at <= 20 atoms.
    std::vector<int> sizes = n == 1 ? std::vector<int>{4, 5} : std::vector<int>{3, 3, 2};
    for (int j = 0; j < cfg.channels(); ++j) {
      const int m = sizes[static_cast<std::size_t>(j)];
      std::vector<double> values;
      double v = rng.uniform(2.0, 12.0);
      for (int k = 0; k < m; ++k) {
        values.push_back(std::floor(v));
        v += rng.uniform(9.0, 26.0);
      }
      // Dyadic probabilities: integer weights over 16 sum exactly to one.
      std::vector<int> weights(static_cast<std::size_t>(m), 1);
      int rest = 16 - m;
      for (int k = 0; k < m - 1 && rest > 0; ++k) {
        const int take = rng.int_in(0, rest);
        weights[static_cast<std::size_t>(k)] += take;
        rest -= take;
      }
      weights[static_cast<std::size_t>(m - 1)] += rest;
      std::vector<double> probs;
      for (int wgt : weights) probs.push_back(static_cast<double>(wgt) / 16.0);
      sc.model.marginals.push_back(Marginal::discrete_dist(std::move(values), std::move(probs)));
    }

    try {
      sc.cfg = validate_config(std::move(sc.cfg));
    } catch (const ValidationError&) {
      continue;
    }
    const ConditionReport rep = check_conditions(sc.cfg);
    if (!rep.c1.holds || !rep.c2.holds) continue;

    // Grid: 0 to a hair past the largest possible composite demand.
    std::vector<std::vector<double>> grid;
    for (int j = 0; j < cfg.channels(); ++j) {
      double bound = sc.model.marginals[static_cast<std::size_t>(j)].values.back();
      for (int k = 0; k < cfg.channels(); ++k) {
        if (k == j) continue;
        bound += cfg.alpha[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] *
                 sc.model.marginals[static_cast<std::size_t>(k)].values.back();
      }
      std::vector<double> levels;
      const double top = 1.02 * bound;
      for (int g = 0; g < grid_points; ++g)
        levels.push_back(top * static_cast<double>(g) / static_cast<double>(grid_points - 1));
      grid.push_back(std::move(levels));
    }
    sc.grid = std::move(grid);
    return sc;
  }
  throw SolverError("random_discrete_scenario: no candidate met the conditions");
}

std::vector<NamedScenario> make_corpus(int count, std::uint64_t seed, const CorpusFamily& family,
                                       const std::string& prefix) {
  std::vector<NamedScenario> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    NamedScenario ns;
    ns.name = prefix + "-" + std::to_string(i);
    ns.scenario = random_scenario(seed + static_cast<std::uint64_t>(i) * 7919ULL, family);
    out.push_back(std::move(ns));
  }
  return out;
}

}  // namespace mcinv

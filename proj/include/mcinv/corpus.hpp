#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mcinv/scenario_io.hpp"

namespace mcinv {

/// Small deterministic generator for corpus construction; a thin sequential
/// wrapper over the counter hash.
class CorpusRng {
public:
  explicit CorpusRng(std::uint64_t seed) : seed_(seed) {}
  std::uint64_t bits() { return cell_seq(seed_, counter_++); }
  double unit() { return to_unit(bits()); }
  double uniform(double a, double b) { return a + (b - a) * unit(); }
  int int_in(int a, int b) { return a + static_cast<int>(bits() % static_cast<std::uint64_t>(b - a + 1)); }

private:
  static std::uint64_t cell_seq(std::uint64_t seed, std::uint64_t k);
  static double to_unit(std::uint64_t bits);
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

/// Parameter family for random continuous scenarios.
struct CorpusFamily {
  int n_min = 1, n_max = 3;
  bool zero_alpha = false;
  bool w_equals_c = false;
  bool require_c1 = true;
  bool require_c2 = false;
  bool require_c3 = false;
  double alpha_lo = 0.05, alpha_hi = 0.40;
  double fractile_lo = 0.55, fractile_hi = 0.90;
  /// Retailer critical fractiles; defaults to the manufacturer range.
  double fractile_r_lo = 0.0, fractile_r_hi = 0.0;
  enum class Marginals { mixed, exponential_only, uniform_only };
  Marginals marginals = Marginals::mixed;
};

/// Deterministic in (seed, family). Retries internally until the requested
/// parameter conditions hold.
Scenario random_scenario(std::uint64_t seed, const CorpusFamily& family);

/// Random discrete instance with a stock grid: joint support is the product
/// of small discrete marginals (at most ~20 atoms), probabilities are exact
/// dyadic fractions, and each channel grid has `grid_points` levels from 0
/// to just past the largest possible composite demand.
Scenario random_discrete_scenario(std::uint64_t seed, int n, int grid_points = 20);

struct NamedScenario {
  std::string name;
  Scenario scenario;
};

std::vector<NamedScenario> make_corpus(int count, std::uint64_t seed, const CorpusFamily& family,
                                       const std::string& prefix);

}  // namespace mcinv

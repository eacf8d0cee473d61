#include "mcinv/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mcinv/common.hpp"
#include "mcinv/nash.hpp"
#include "mcinv/oracle.hpp"
#include "mcinv/profit.hpp"
#include "mcinv/simulate.hpp"
#include "mcinv/stackelberg.hpp"
#include "mcinv/stats.hpp"

namespace mcinv {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Per-criterion salts decorrelate the scenario streams.
constexpr std::uint64_t kSaltOracleNash = 0x101;
constexpr std::uint64_t kSaltDecoupling = 535;
constexpr std::uint64_t kSaltCurvature = 0x303;
constexpr std::uint64_t kSaltSlope = 0x404;
constexpr std::uint64_t kSaltUniqueness = 0x505;
constexpr std::uint64_t kSaltOrdering = 0x606;
constexpr std::uint64_t kSaltDominance = 0x707;
constexpr std::uint64_t kSaltReduction = 0x808;
constexpr std::uint64_t kSaltGradient = 0x909;

std::uint64_t scenario_seed(const VerifyOptions& opts, std::uint64_t salt, std::uint64_t index) {
  return opts.seed ^ (salt * 0x9e3779b97f4a7c15ULL + index * 0x2545f4914f6cdd1dULL);
}

StockVector interior_point(const MarketConfig& cfg, const SampleSet& samples, CorpusRng& rng,
                           double lo = 0.25, double hi = 0.80) {
  StockVector s = StockVector::zeros(cfg.channels());
  const StockVector zeros = StockVector::zeros(cfg.channels());
  for (int j = 0; j < cfg.channels(); ++j) {
    std::vector<double> col = composite_column(cfg, samples, zeros, j);
    s[j] = empirical_quantile_inplace(col, rng.uniform(lo, hi));
  }
  return s;
}

bool no_profitable_grid_deviation(const DiscreteScenario& ds, const StockVector& point,
                                  double eps) {
  for (int j = 0; j < ds.cfg.channels(); ++j) {
    const double base = exact_profit_channel(ds, point, j);
    for (double level : ds.grid[static_cast<std::size_t>(j)]) {
      StockVector moved = point;
      moved[j] = level;
      if (exact_profit_channel(ds, moved, j) > base + eps) return false;
    }
  }
  return true;
}

double exact_leader_profit_at_level(const DiscreteScenario& ds, double level, double eps = 1e-9) {
  const auto followers = grid_follower_nash(ds, level, eps);
  if (followers.empty()) return -std::numeric_limits<double>::infinity();
  double worst = std::numeric_limits<double>::infinity();
  StockVector s = StockVector::zeros(ds.cfg.channels());
  s[0] = level;
  for (const auto& f : followers) {
    for (int i = 0; i < ds.cfg.n; ++i) s[i + 1] = f[static_cast<std::size_t>(i)];
    worst = std::min(worst, exact_profit_channel(ds, s, 0));
  }
  return worst;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(4);
  os << x;
  return os.str();
}

}  // namespace

PropertyResult verify_oracle_nash(const VerifyOptions& opts) {
  const auto start = Clock::now();
  PropertyResult res;
  res.name = "oracle-equivalence-simultaneous";
  std::ostringstream detail;
  for (int k = 0; k < 10; ++k) {
    const int n = k < 5 ? 1 : 2;
    const std::uint64_t seed = scenario_seed(opts, kSaltOracleNash, static_cast<std::uint64_t>(k));
    const Scenario sc = random_discrete_scenario(seed, n);
    const DiscreteScenario ds = sc.to_discrete();
    const GridEquilibria eqs = grid_nash(ds, 1e-9);
    ++res.checks;
    if (eqs.points.empty()) {
      ++res.failures;
      detail << "[" << k << "] no grid equilibrium; ";
      continue;
    }
    const SampleSet samples = sample(sc.model, opts.samples, seed + 1);
    const EquilibriumReport rep = nash_solve(sc.cfg, sc.model, samples);
    bool matched = false;
    for (const StockVector& eq : eqs.points) {
      bool close = true;
      for (int j = 0; j < ds.cfg.channels() && close; ++j) {
        const auto& g = ds.grid[static_cast<std::size_t>(j)];
        const double step = g[1] - g[0];
        close = std::abs(rep.stocks[j] - eq[j]) <= step * (1.0 + 1e-9);
      }
      if (close && no_profitable_grid_deviation(ds, eq, 1e-9)) {
        matched = true;
        break;
      }
    }
    if (!matched) {
      ++res.failures;
      detail << "[" << k << "] solver stocks not within one grid step of an equilibrium; ";
    }
  }
  res.pass = res.failures == 0;
  res.detail = res.pass ? "10/10 discrete instances matched" : detail.str();
  res.elapsed_s = seconds_since(start);
  return res;
}

PropertyResult verify_oracle_stackelberg(const VerifyOptions& opts) {
  const auto start = Clock::now();
  PropertyResult res;
  res.name = "oracle-equivalence-leader-follower";
  std::ostringstream detail;
  for (int k = 0; k < 10; ++k) {
    const int n = k < 5 ? 1 : 2;
    const std::uint64_t seed = scenario_seed(opts, kSaltOracleNash, static_cast<std::uint64_t>(k));
    const Scenario sc = random_discrete_scenario(seed, n);
    const DiscreteScenario ds = sc.to_discrete();
    const GridStackelberg gs = grid_stackelberg(ds, 1e-9);
    const SampleSet samples = sample(sc.model, opts.samples, seed + 1);
    const StackelbergReport rep = stackelberg_solve(sc.cfg, sc.model, samples);

    ++res.checks;
    const auto& g0 = ds.grid[0];
    const double step0 = g0[1] - g0[0];
    bool ok = std::abs(rep.leader_stock - gs.leader_level) <= step0 * (1.0 + 1e-9);
    if (ok) {
      // The best grid level adjacent to the solver's leader stock must attain
      // the oracle's optimal exact profit.
      const double pos = rep.leader_stock / step0;
      const long lo_idx = std::clamp<long>(static_cast<long>(std::floor(pos)), 0,
                                           static_cast<long>(g0.size()) - 1);
      const long hi_idx = std::clamp<long>(lo_idx + 1, 0, static_cast<long>(g0.size()) - 1);
      const double best_neighbor =
          std::max(exact_leader_profit_at_level(ds, g0[static_cast<std::size_t>(lo_idx)]),
                   exact_leader_profit_at_level(ds, g0[static_cast<std::size_t>(hi_idx)]));
      const double shortfall = gs.leader_profit - best_neighbor;
      ok = shortfall <= 1e-6 * std::max(1.0, std::abs(gs.leader_profit));
      if (!ok)
        detail << "[" << k << "] neighbor profit shortfall " << fmt(shortfall) << "; ";
    } else {
      detail << "[" << k << "] leader " << fmt(rep.leader_stock) << " vs oracle "
             << fmt(gs.leader_level) << "; ";
    }
    if (!ok) ++res.failures;
  }
  res.pass = res.failures == 0;
  res.detail = res.pass ? "10/10 leader optima matched" : detail.str();
  res.elapsed_s = seconds_since(start);
  return res;
}

PropertyResult verify_decoupling(const VerifyOptions& opts) {
  const auto start = Clock::now();
  PropertyResult res;
  res.name = "decoupling-closed-form";
  std::ostringstream detail;
  CorpusFamily fam;
  fam.zero_alpha = true;
  fam.n_min = 1;
  fam.n_max = 2;
  for (int k = 0; k < 20; ++k) {
    const std::uint64_t seed = scenario_seed(opts, kSaltDecoupling, static_cast<std::uint64_t>(k));
    const Scenario sc = random_scenario(seed, fam);
    const SampleSet samples = sample(sc.model, opts.samples, seed + 1);
    const EquilibriumReport nash = nash_solve(sc.cfg, sc.model, samples);
    const StackelbergReport st = stackelberg_solve(sc.cfg, sc.model, samples);

    for (int j = 0; j < sc.cfg.channels(); ++j) {
      const Marginal& m = sc.model.marginals[static_cast<std::size_t>(j)];
      const double q = j == 0 ? sc.cfg.manufacturer_fractile() : sc.cfg.retailer_fractile(j);
      const double quantile = m.quantile(q);
      const double se = quantile_std_error(q, opts.samples, m.pdf(quantile));
      const double tolerance = 2.0 * se;
      const double st_stock =
          j == 0 ? st.leader_stock : st.follower_stocks[static_cast<std::size_t>(j - 1)];
      ++res.checks;
      if (std::abs(nash.stocks[j] - quantile) > tolerance) {
        ++res.failures;
        detail << "[" << k << "] nash ch" << j << " off by "
               << fmt(std::abs(nash.stocks[j] - quantile)) << " > " << fmt(tolerance) << "; ";
      }
      ++res.checks;
      if (std::abs(st_stock - quantile) > tolerance) {
        ++res.failures;
        detail << "[" << k << "] leader-follower ch" << j << " off by "
               << fmt(std::abs(st_stock - quantile)) << " > " << fmt(tolerance) << "; ";
      }
    }
  }
  res.pass = res.failures == 0;
  res.detail = res.pass ? std::to_string(res.checks) + " stocks at closed-form quantiles"
                        : detail.str();
  res.elapsed_s = seconds_since(start);
  return res;
}

PropertyResult verify_curvature_signs(const VerifyOptions& opts) {
  const auto start = Clock::now();
  PropertyResult res;
  res.name = "curvature-signs";
  CorpusFamily fam;
  fam.n_min = 1;
  fam.n_max = 2;
  fam.require_c1 = true;
  int resolvable = 0, bad = 0, total_entries = 0;
  for (int k = 0; k < 50; ++k) {
    const std::uint64_t seed = scenario_seed(opts, kSaltCurvature, static_cast<std::uint64_t>(k));
    const Scenario sc = random_scenario(seed, fam);
    const SampleSet samples = sample(sc.model, opts.samples, seed + 1);
    CorpusRng rng(seed + 2);
    for (int point = 0; point < 5; ++point) {
      const StockVector s = interior_point(sc.cfg, samples, rng);
      for (int player = 0; player < sc.cfg.channels(); ++player) {
        const HessianFD h = hessian_fd(sc.cfg, sc.model, samples, player, s);
        const auto consider = [&](int a, int b) {
          ++total_entries;
          const double eps = 4.0 * h.std_errors(a, b);
          if (std::abs(h.matrix(a, b)) <= eps) return;  // not resolvable
          ++resolvable;
          if (h.matrix(a, b) > eps) ++bad;
        };
        consider(player, player);  // own-stock concavity
        for (int a = 0; a < sc.cfg.channels(); ++a)
          for (int b = a + 1; b < sc.cfg.channels(); ++b) consider(a, b);  // submodularity
      }
    }
  }
  res.checks = resolvable;
  res.failures = bad;
  res.pass = resolvable > 0 && static_cast<double>(bad) <= 0.05 * static_cast<double>(resolvable);
  res.detail = std::to_string(resolvable - bad) + "/" + std::to_string(resolvable) +
               " resolvable entries nonpositive (" + std::to_string(total_entries) + " total)";
  res.elapsed_s = seconds_since(start);
  return res;
}

PropertyResult verify_slope_band(const VerifyOptions& opts) {
  const auto start = Clock::now();
  PropertyResult res;
  res.name = "follower-slope-band";
  CorpusFamily fam;
  fam.n_min = 1;
  fam.n_max = 2;
  fam.alpha_lo = 0.10;
  fam.alpha_hi = 0.40;
  int skipped = 0;
  for (int k = 0; k < 20; ++k) {
    const std::uint64_t seed = scenario_seed(opts, kSaltSlope, static_cast<std::uint64_t>(k));
    const Scenario sc = random_scenario(seed, fam);
    const SampleSet samples = sample(sc.model, opts.samples, seed + 1);
    const StockVector upper = stock_upper_bounds(sc.cfg, samples);
    const double step = upper[0] / 100.0;
    for (int lvl = 0; lvl < 10; ++lvl) {
      const double level = upper[0] * (0.08 + 0.84 * static_cast<double>(lvl) / 9.0);
      for (int i = 1; i <= sc.cfg.n; ++i) {
        const SlopeEstimate est =
            follower_slope(sc.cfg, sc.model, samples, level, i, step, 1e-4 * upper[0]);
        if (est.noise_flag || !std::isfinite(est.noise)) {
          ++skipped;
          continue;
        }
        ++res.checks;
        const double alpha = sc.cfg.alpha[0][static_cast<std::size_t>(i)];
        const double lo = -alpha - 4.0 * est.noise;
        const double hi = 4.0 * est.noise;
        if (est.slope < lo - 1e-12 || est.slope > hi + 1e-12) ++res.failures;
      }
    }
  }
  res.pass = res.checks > 0 && res.failures == 0;
  res.detail = std::to_string(res.checks - res.failures) + "/" + std::to_string(res.checks) +
               " slopes in band, " + std::to_string(skipped) + " unresolved";
  res.elapsed_s = seconds_since(start);
  return res;
}

PropertyResult verify_uniqueness_route(const VerifyOptions& opts) {
  const auto start = Clock::now();
  PropertyResult res;
  res.name = "uniqueness-route";
  std::ostringstream detail;
  CorpusFamily fam;
  fam.n_min = 1;
  fam.n_max = 2;
  fam.require_c2 = true;
  for (int k = 0; k < 20; ++k) {
    const std::uint64_t seed = scenario_seed(opts, kSaltUniqueness, static_cast<std::uint64_t>(k));
    const Scenario sc = random_scenario(seed, fam);
    const SampleSet samples = sample(sc.model, opts.samples, seed + 1);
    const EquilibriumReport rep = nash_solve(sc.cfg, sc.model, samples);
    double gap = 0.0;
    for (int j = 0; j < sc.cfg.channels(); ++j)
      gap = std::max(gap, rep.bracket.second[j] - rep.bracket.first[j]);
    const UniquenessDiagnostic diag = uniqueness_diagnostic(sc.cfg, sc.model, samples, rep.stocks);
    ++res.checks;
    const bool ok = rep.converged && gap <= 5.0 * rep.tol && diag.lambda_max < 0.0 &&
                    !diag.inconclusive;
    if (!ok) {
      ++res.failures;
      detail << "[" << k << "] gap=" << fmt(gap) << " lambda=" << fmt(diag.lambda_max)
             << (diag.inconclusive ? " (inconclusive)" : "") << "; ";
    }
  }
  res.pass = res.failures == 0;
  res.detail = res.pass ? "20/20 equilibria negative-definite with coinciding brackets"
                        : detail.str();
  res.elapsed_s = seconds_since(start);
  return res;
}

PropertyResult verify_leader_ordering(const VerifyOptions& opts) {
  const auto start = Clock::now();
  PropertyResult res;
  res.name = "leader-stock-ordering";
  std::ostringstream detail;
  CorpusFamily fam;
  fam.n_min = 1;
  fam.n_max = 2;
  fam.w_equals_c = true;
  // Bounded demand and strong two-way substitution make the leader's
  // stocking incentive large relative to the solver tolerance.
  fam.marginals = CorpusFamily::Marginals::uniform_only;
  fam.alpha_lo = 0.40;
  fam.alpha_hi = 0.70;
  fam.fractile_lo = 0.60;
  fam.fractile_hi = 0.80;
  fam.fractile_r_lo = 0.50;
  fam.fractile_r_hi = 0.65;
  int strict = 0;
  for (int k = 0; k < 20; ++k) {
    const std::uint64_t seed = scenario_seed(opts, kSaltOrdering, static_cast<std::uint64_t>(k));
    const Scenario sc = random_scenario(seed, fam);
    const SampleSet samples = sample(sc.model, opts.samples, seed + 1);
    const GameComparison cmp = compare_games(sc.cfg, sc.model, samples);
    ++res.checks;
    if (!cmp.leader_stock_ordered) {
      ++res.failures;
      detail << "[" << k << "] leader below simultaneous level by "
             << fmt(-cmp.leader_stock_minus_nash) << "; ";
    }
    if (cmp.leader_stock_minus_nash > 5.0 * cmp.stackelberg.tol) ++strict;
  }
  res.pass = res.failures == 0 && strict >= 10;
  res.detail = "ordered " + std::to_string(res.checks - res.failures) + "/" +
               std::to_string(res.checks) + ", strictly above in " + std::to_string(strict) +
               (res.pass ? "" : " | " + detail.str());
  res.elapsed_s = seconds_since(start);
  return res;
}

PropertyResult verify_leader_dominance(const VerifyOptions& opts) {
  const auto start = Clock::now();
  PropertyResult res;
  res.name = "leader-dominance";
  std::ostringstream detail;
  CorpusFamily fam;
  fam.n_min = 1;
  fam.n_max = 2;
  for (int k = 0; k < 20; ++k) {
    const std::uint64_t seed = scenario_seed(opts, kSaltDominance, static_cast<std::uint64_t>(k));
    const Scenario sc = random_scenario(seed, fam);
    const SampleSet samples = sample(sc.model, opts.samples, seed + 1);
    const GameComparison cmp = compare_games(sc.cfg, sc.model, samples);
    ++res.checks;
    if (!cmp.leader_dominance_ok) {
      ++res.failures;
      detail << "[" << k << "] leader profit short by " << fmt(-cmp.leader_profit_minus_nash)
             << " (4se=" << fmt(4.0 * cmp.profit_diff_std_error) << "); ";
    }
  }
  res.pass = res.failures == 0;
  res.detail = res.pass ? "20/20 scenarios: leading never loses" : detail.str();
  res.elapsed_s = seconds_since(start);
  return res;
}

PropertyResult verify_simulator_reduction(const VerifyOptions& opts) {
  const auto start = Clock::now();
  PropertyResult res;
  res.name = "simulator-reduction";
  std::ostringstream detail;
  CorpusFamily fam;
  fam.n_min = 1;
  fam.n_max = 2;
  for (int k = 0; k < 10; ++k) {
    const std::uint64_t seed = scenario_seed(opts, kSaltReduction, static_cast<std::uint64_t>(k));
    const Scenario sc = random_scenario(seed, fam);
    const SampleSet samples = sample(sc.model, opts.samples, seed + 1);
    const EquilibriumReport nash = nash_solve(sc.cfg, sc.model, samples);
    const SimTrace trace = simulate(sc.cfg, sc.model, nash.stocks, 100000, seed + 2);
    for (int j = 0; j < sc.cfg.channels(); ++j) {
      const double sim = trace.avg_profit[static_cast<std::size_t>(j)];
      const double sim_se = trace.profit_std_error[static_cast<std::size_t>(j)];
      const ProfitEstimate st = nash.profits[static_cast<std::size_t>(j)];
      const double tol = 3.0 * std::sqrt(sim_se * sim_se + st.std_error * st.std_error);
      ++res.checks;
      if (std::abs(sim - st.value) > tol) {
        ++res.failures;
        detail << "[" << k << "] ch" << j << " |" << fmt(sim) << " - " << fmt(st.value)
               << "| > " << fmt(tol) << "; ";
      }
    }
  }
  res.pass = res.failures == 0;
  res.detail = res.pass ? std::to_string(res.checks) + " channel averages match the static model"
                        : detail.str();
  res.elapsed_s = seconds_since(start);
  return res;
}

PropertyResult verify_gradient_consistency(const VerifyOptions& opts) {
  const auto start = Clock::now();
  PropertyResult res;
  res.name = "gradient-consistency";
  std::ostringstream detail;
  CorpusFamily fam;
  fam.n_min = 1;
  fam.n_max = 2;
  const double h = 1e-2;  // quantity units
  for (int k = 0; k < 10; ++k) {
    const std::uint64_t seed = scenario_seed(opts, kSaltGradient, static_cast<std::uint64_t>(k));
    const Scenario sc = random_scenario(seed, fam);
    const SampleSet samples = sample(sc.model, opts.samples, seed + 1);
    CorpusRng rng(seed + 2);
    for (int point = 0; point < 10; ++point) {
      const StockVector s = interior_point(sc.cfg, samples, rng);
      const std::vector<double> an = grad_manufacturer(sc.cfg, sc.model, samples, s);
      for (int j = 0; j < sc.cfg.channels(); ++j) {
        StockVector up = s, down = s;
        up[j] += h;
        down[j] -= h;
        const double fd = (profit_manufacturer(sc.cfg, sc.model, samples, up).value -
                           profit_manufacturer(sc.cfg, sc.model, samples, down).value) /
                          (2.0 * h);
        // Magnitude bound of this component; near-zero components are
        // measured against a tenth of it rather than against themselves.
        double scale;
        if (j == 0) {
          scale = (sc.cfg.p_m - sc.cfg.c) + (sc.cfg.p_m - sc.cfg.c + sc.cfg.h_m);
          for (int i = 1; i <= sc.cfg.n; ++i)
            scale += sc.cfg.alpha[0][static_cast<std::size_t>(i)] *
                     (sc.cfg.wholesale(i) - sc.cfg.c);
        } else {
          scale = sc.cfg.alpha[static_cast<std::size_t>(j)][0] *
                      (sc.cfg.p_m - sc.cfg.c + sc.cfg.h_m) +
                  (sc.cfg.wholesale(j) - sc.cfg.c);
          for (int l = 1; l <= sc.cfg.n; ++l)
            if (l != j)
              scale += sc.cfg.alpha[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)] *
                       (sc.cfg.wholesale(l) - sc.cfg.c);
        }
        const double denom =
            std::max({std::abs(an[static_cast<std::size_t>(j)]), std::abs(fd), 0.1 * scale});
        const double rel = std::abs(fd - an[static_cast<std::size_t>(j)]) / denom;
        ++res.checks;
        if (rel > 1e-2) {
          ++res.failures;
          detail << "[" << k << "/" << point << "] ch" << j << " rel=" << fmt(rel) << "; ";
        }
      }
    }
  }
  res.pass = res.failures == 0;
  res.detail = res.pass
                   ? std::to_string(res.checks) + " components within 1e-2 of finite differences"
                   : detail.str();
  res.elapsed_s = seconds_since(start);
  return res;
}

namespace {

nlohmann::json run_cli_capture(const std::string& cli, const std::string& args,
                               const std::filesystem::path& out_file) {
  const std::string cmd = cli + " " + args + " --out " + out_file.string() + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  if (rc != 0) throw SolverError("CLI command failed (" + std::to_string(rc) + "): " + cmd);
  std::ifstream in(out_file);
  nlohmann::json j;
  in >> j;
  return j;
}

}  // namespace

PropertyResult verify_cli_determinism(const std::string& cli_path, const VerifyOptions& opts) {
  const auto start = Clock::now();
  PropertyResult res;
  res.name = "cli-determinism";
  std::ostringstream detail;

  namespace fs = std::filesystem;
  CorpusRng rng(opts.seed ^ 0xdededededeULL);
  const fs::path dir =
      fs::temp_directory_path() / ("mcinv-verify-" + std::to_string(rng.bits() & 0xffffff));
  fs::create_directories(dir);

  CorpusFamily fam;
  fam.n_min = 2;
  fam.n_max = 2;
  const Scenario cont = random_scenario(opts.seed ^ 0xabcdefULL, fam);
  const fs::path cont_path = dir / "scenario.json";
  {
    std::ofstream out(cont_path);
    out << scenario_to_json(cont).dump(2) << "\n";
  }
  const Scenario disc = random_discrete_scenario(opts.seed ^ 0x123457ULL, 1);
  const fs::path disc_path = dir / "discrete.json";
  {
    std::ofstream out(disc_path);
    out << scenario_to_json(disc).dump(2) << "\n";
  }

  const std::string cp = cont_path.string();
  const std::string dp = disc_path.string();
  const std::vector<std::pair<std::string, std::vector<std::string>>> cases = {
      {"check", {"check " + cp, "check " + cp}},
      {"nash",
       {"nash " + cp + " --samples 20000 --seed 7 --tol 1e-3",
        "nash " + cp + " --samples 20000 --seed 7 --tol 1e-3",
        "nash " + cp + " --samples 20000 --seed 7 --tol 1e-3 --threads 2"}},
      {"stackelberg",
       {"stackelberg " + cp + " --samples 20000 --seed 3 --grid 33",
        "stackelberg " + cp + " --samples 20000 --seed 3 --grid 33 --threads 2"}},
      {"compare",
       {"compare " + cp + " --samples 15000 --seed 5", "compare " + cp + " --samples 15000 --seed 5"}},
      {"simulate",
       {"simulate " + cp + " --horizon 20000 --seed 9 --stocks 40,30,30",
        "simulate " + cp + " --horizon 20000 --seed 9 --stocks 40,30,30"}},
      {"oracle", {"oracle " + dp, "oracle " + dp}},
      {"best-response",
       {"best-response " + cp + " --samples 20000 --seed 11 --channel 1 --stocks 35,0,25",
        "best-response " + cp + " --samples 20000 --seed 11 --channel 1 --stocks 35,0,25"}},
  };

  int case_idx = 0;
  for (const auto& [name, runs] : cases) {
    ++res.checks;
    std::string first_payload;
    bool ok = true;
    for (std::size_t r = 0; r < runs.size(); ++r) {
      const fs::path out_file =
          dir / ("out-" + std::to_string(case_idx) + "-" + std::to_string(r) + ".json");
      try {
        const nlohmann::json rep = run_cli_capture(cli_path, runs[r], out_file);
        const std::string payload = rep.at("results").dump();
        if (r == 0) {
          first_payload = payload;
        } else if (payload != first_payload) {
          ok = false;
        }
      } catch (const std::exception& e) {
        ok = false;
        detail << "[" << name << "] " << e.what() << "; ";
      }
    }
    if (!ok) {
      ++res.failures;
      detail << "[" << name << "] payload mismatch; ";
    }
    ++case_idx;
  }
  std::error_code ec;
  fs::remove_all(dir, ec);

  res.pass = res.failures == 0;
  res.detail = res.pass ? std::to_string(res.checks) + " commands byte-identical across reruns"
                        : detail.str();
  res.elapsed_s = seconds_since(start);
  return res;
}

std::vector<PropertyResult> run_property_suite(const VerifyOptions& opts) {
  std::vector<PropertyResult> out;
  out.push_back(verify_curvature_signs(opts));
  out.push_back(verify_slope_band(opts));
  out.push_back(verify_uniqueness_route(opts));
  out.push_back(verify_leader_ordering(opts));
  out.push_back(verify_simulator_reduction(opts));
  return out;
}

}  // namespace mcinv

// mcinv: solver CLI for the one-manufacturer / n-retailer stocking game.
//
// Subcommands: check, best-response, nash, stackelberg, compare, simulate,
// verify, oracle. Every command writes a JSON report ("results" payload is
// reproducible byte-for-byte from scenario + seeds). Exit codes: 0 success,
// 1 failed verification properties, 2 validation error, 3 solver
// non-convergence.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include "mcinv/common.hpp"
#include "mcinv/corpus.hpp"
#include "mcinv/nash.hpp"
#include "mcinv/oracle.hpp"
#include "mcinv/profit.hpp"
#include "mcinv/scenario_io.hpp"
#include "mcinv/simulate.hpp"
#include "mcinv/stackelberg.hpp"
#include "mcinv/verify.hpp"

namespace {

using nlohmann::json;
using namespace mcinv;

struct CommonFlags {
  std::string scenario_path;
  std::size_t samples = 100000;
  std::uint64_t seed = 0;
  double tol = 0.0;
  int grid = 64;
  std::string out;
  std::string format = "json";
  int threads = 1;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool needs_scenario = true) {
  if (needs_scenario)
    cmd->add_option("scenario", flags.scenario_path, "scenario JSON file")->required();
  cmd->add_option("--samples", flags.samples, "Monte Carlo sample count");
  cmd->add_option("--seed", flags.seed, "sample seed");
  cmd->add_option("--tol", flags.tol, "solver tolerance (0 = auto)");
  cmd->add_option("--grid", flags.grid, "leader scan grid points");
  cmd->add_option("--out", flags.out, "report file (default stdout)");
  cmd->add_option("--format", flags.format, "json | csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--threads", flags.threads, "worker threads for row loops");
}

json profit_to_json(const ProfitEstimate& p) {
  return json{{"value", p.value}, {"std_error", p.std_error}, {"n_draws", p.n_draws}};
}

json condition_to_json(const ConditionFlag& f) {
  return json{{"holds", f.holds}, {"slack", f.slack}};
}

json equilibrium_to_json(const EquilibriumReport& rep) {
  json trace = json::array();
  for (const auto& sv : rep.trace) trace.push_back(sv.levels);
  json profits = json::array();
  for (const auto& p : rep.profits) profits.push_back(profit_to_json(p));
  return json{{"stocks", rep.stocks.levels},
              {"profits", profits},
              {"residuals", rep.residuals},
              {"bracket", {{"lower", rep.bracket.first.levels}, {"upper", rep.bracket.second.levels}}},
              {"unique_flag", unique_flag_name(rep.unique_flag)},
              {"converged", rep.converged},
              {"c1_holds", rep.c1_holds},
              {"manufacturer_corner", rep.manufacturer_corner},
              {"tol", rep.tol},
              {"iterations",
               {{"from_below", rep.iterations_from_below}, {"from_above", rep.iterations_from_above}}},
              {"trace", trace}};
}

json stackelberg_to_json(const StackelbergReport& rep) {
  json curve = json::array();
  for (const auto& [level, value] : rep.leader_profit_curve)
    curve.push_back(json::array({level, value}));
  json profits = json::array();
  for (const auto& p : rep.profits) profits.push_back(profit_to_json(p));
  return json{{"leader_stock", rep.leader_stock},
              {"follower_stocks", rep.follower_stocks},
              {"leader_profit", profit_to_json(rep.leader_profit)},
              {"profits", profits},
              {"slope_estimates", rep.slope_estimates},
              {"curvature_condition", rep.curvature_flags},
              {"curvature_inconclusive", rep.curvature_inconclusive},
              {"quasiconcave", rep.quasiconcave},
              {"tol", rep.tol},
              {"profit_curve", curve}};
}

void emit_report(const CommonFlags& flags, const std::string& command, const Scenario& sc,
                 json results, double wall_ms) {
  json report{{"command", command},
              {"scenario_digest", scenario_digest(sc)},
              {"seed", flags.seed},
              {"samples", flags.samples},
              {"results", std::move(results)},
              {"wall_time_ms", wall_ms}};
  if (flags.out.empty()) {
    std::cout << report.dump(2) << "\n";
  } else {
    std::ofstream out(flags.out);
    if (!out) throw ValidationError("cannot write report to " + flags.out);
    out << report.dump(2) << "\n";
  }
}

void emit_text(const CommonFlags& flags, const std::string& text) {
  if (flags.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(flags.out);
    if (!out) throw ValidationError("cannot write to " + flags.out);
    out << text;
  }
}

std::vector<double> parse_stock_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      out.push_back(std::stod(cell));
    } catch (const std::exception&) {
      throw ValidationError("--stocks: non-numeric entry \"" + cell + "\"");
    }
  }
  return out;
}

class Stopwatch {
public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
  }

private:
  using Clock = std::chrono::steady_clock;
  Clock::time_point start_ = Clock::now();
};

int run_check(const CommonFlags& flags) {
  Stopwatch watch;
  const Scenario sc = load_scenario(flags.scenario_path);
  const ConditionReport rep = check_conditions(sc.cfg);
  json c3 = json::array();
  for (const auto& f : rep.c3) c3.push_back(condition_to_json(f));
  json results{{"valid", true},
               {"c1", condition_to_json(rep.c1)},
               {"c2", condition_to_json(rep.c2)},
               {"c3", c3}};
  emit_report(flags, "check", sc, std::move(results), watch.ms());
  return 0;
}

int run_best_response(const CommonFlags& flags, int channel, const std::string& stocks_csv) {
  Stopwatch watch;
  const Scenario sc = load_scenario(flags.scenario_path);
  const SampleSet samples = sample(sc.model, flags.samples, flags.seed);
  std::vector<double> levels = parse_stock_list(stocks_csv);
  if (static_cast<int>(levels.size()) != sc.cfg.channels())
    throw ValidationError("--stocks must list one level per channel");
  const StockVector s{levels};

  json results;
  if (channel == 0) {
    const ManufacturerBR br = best_response_manufacturer(sc.cfg, sc.model, samples, s, flags.tol);
    results = json{{"channel", 0},
                   {"level", br.level},
                   {"corner", br.corner},
                   {"bracketed", br.bracketed}};
  } else {
    const double level = best_response_retailer(sc.cfg, sc.model, samples, s, channel);
    results = json{{"channel", channel},
                   {"level", level},
                   {"fractile", sc.cfg.retailer_fractile(channel)}};
  }
  emit_report(flags, "best-response", sc, std::move(results), watch.ms());
  return 0;
}

int run_nash(const CommonFlags& flags) {
  Stopwatch watch;
  const Scenario sc = load_scenario(flags.scenario_path);
  const SampleSet samples = sample(sc.model, flags.samples, flags.seed);
  NashOptions opts;
  opts.tol = flags.tol;
  const EquilibriumReport rep = nash_solve(sc.cfg, sc.model, samples, opts);
  if (flags.format == "csv") {
    std::ostringstream os;
    os << "sweep";
    for (int j = 0; j < sc.cfg.channels(); ++j) os << ",s" << j;
    os << "\n";
    os.precision(17);
    for (std::size_t t = 0; t < rep.trace.size(); ++t) {
      os << t;
      for (int j = 0; j < sc.cfg.channels(); ++j) os << ',' << rep.trace[t][j];
      os << "\n";
    }
    emit_text(flags, os.str());
  } else {
    emit_report(flags, "nash", sc, equilibrium_to_json(rep), watch.ms());
  }
  return rep.converged ? 0 : 3;
}

int run_stackelberg(const CommonFlags& flags) {
  Stopwatch watch;
  const Scenario sc = load_scenario(flags.scenario_path);
  const SampleSet samples = sample(sc.model, flags.samples, flags.seed);
  StackelbergOptions opts;
  opts.grid_points = flags.grid;
  opts.tol = flags.tol;
  const StackelbergReport rep = stackelberg_solve(sc.cfg, sc.model, samples, opts);
  if (flags.format == "csv") {
    std::ostringstream os;
    os << "leader_level,leader_profit\n";
    os.precision(17);
    for (const auto& [level, value] : rep.leader_profit_curve) os << level << ',' << value << "\n";
    emit_text(flags, os.str());
  } else {
    emit_report(flags, "stackelberg", sc, stackelberg_to_json(rep), watch.ms());
  }
  return 0;
}

int run_compare(const CommonFlags& flags) {
  Stopwatch watch;
  const Scenario sc = load_scenario(flags.scenario_path);
  const SampleSet samples = sample(sc.model, flags.samples, flags.seed);
  NashOptions nash_opts;
  nash_opts.tol = flags.tol;
  StackelbergOptions st_opts;
  st_opts.grid_points = flags.grid;
  st_opts.tol = flags.tol;
  const GameComparison cmp = compare_games(sc.cfg, sc.model, samples, nash_opts, st_opts);
  json results{{"nash", equilibrium_to_json(cmp.nash)},
               {"stackelberg", stackelberg_to_json(cmp.stackelberg)},
               {"leader_stock_minus_nash", cmp.leader_stock_minus_nash},
               {"leader_profit_minus_nash", cmp.leader_profit_minus_nash},
               {"profit_diff_std_error", cmp.profit_diff_std_error},
               {"leader_dominance_ok", cmp.leader_dominance_ok},
               {"w_equals_c", cmp.w_equals_c},
               {"leader_stock_ordered", cmp.leader_stock_ordered}};
  emit_report(flags, "compare", sc, std::move(results), watch.ms());
  return 0;
}

int run_simulate(const CommonFlags& flags, std::size_t horizon, const std::string& stocks_csv) {
  Stopwatch watch;
  const Scenario sc = load_scenario(flags.scenario_path);
  StockVector s;
  if (stocks_csv.empty()) {
    // Default to the simultaneous-game equilibrium stocks.
    const SampleSet samples = sample(sc.model, flags.samples, flags.seed);
    NashOptions opts;
    opts.tol = flags.tol;
    const EquilibriumReport rep = nash_solve(sc.cfg, sc.model, samples, opts);
    if (!rep.converged) throw SolverError("simulate: equilibrium solve did not converge");
    s = rep.stocks;
  } else {
    std::vector<double> levels = parse_stock_list(stocks_csv);
    if (static_cast<int>(levels.size()) != sc.cfg.channels())
      throw ValidationError("--stocks must list one level per channel");
    s = StockVector{levels};
  }
  const SimTrace trace = simulate(sc.cfg, sc.model, s, horizon, flags.seed);
  if (flags.format == "csv") {
    std::ostringstream os;
    write_trace_csv(trace, os);
    emit_text(flags, os.str());
    return 0;
  }
  json results{{"stocks", s.levels},
               {"horizon", trace.horizon},
               {"warmup", trace.warmup},
               {"avg_profit", trace.avg_profit},
               {"profit_std_error", trace.profit_std_error}};
  emit_report(flags, "simulate", sc, std::move(results), watch.ms());
  return 0;
}

int run_oracle(const CommonFlags& flags) {
  Stopwatch watch;
  const Scenario sc = load_scenario(flags.scenario_path);
  const DiscreteScenario ds = sc.to_discrete();
  const GridEquilibria eqs = grid_nash(ds);
  const GridStackelberg gs = grid_stackelberg(ds);
  json nash_pts = json::array();
  for (const auto& p : eqs.points) nash_pts.push_back(p.levels);
  json exact_at_first = json::array();
  if (!eqs.points.empty())
    exact_at_first = json(exact_profit(ds, eqs.points.front()));
  json results{{"nash_equilibria", nash_pts},
               {"nash_empty", eqs.empty_flag},
               {"exact_profit_at_first_equilibrium", exact_at_first},
               {"stackelberg",
                {{"leader_level", gs.leader_level},
                 {"follower_levels", gs.follower_levels},
                 {"leader_profit", gs.leader_profit},
                 {"follower_multiplicity", gs.follower_multiplicity},
                 {"follower_missing", gs.follower_missing}}}};
  emit_report(flags, "oracle", sc, std::move(results), watch.ms());
  return 0;
}

int run_verify(const CommonFlags& flags) {
  Stopwatch watch;
  VerifyOptions opts;
  opts.samples = flags.samples;
  opts.seed = flags.seed;
  const std::vector<PropertyResult> props = run_property_suite(opts);
  json arr = json::array();
  bool all_pass = true;
  for (const auto& p : props) {
    std::cout << (p.pass ? "[PASS] " : "[FAIL] ") << p.name << " — " << p.detail << " ("
              << static_cast<int>(p.elapsed_s) << "s)\n";
    arr.push_back(json{{"name", p.name},
                       {"pass", p.pass},
                       {"checks", p.checks},
                       {"failures", p.failures},
                       {"detail", p.detail}});
    all_pass = all_pass && p.pass;
  }
  json report{{"command", "verify"},
              {"seed", flags.seed},
              {"samples", flags.samples},
              {"results", {{"properties", arr}, {"all_pass", all_pass}}},
              {"wall_time_ms", watch.ms()}};
  if (!flags.out.empty()) {
    std::ofstream out(flags.out);
    out << report.dump(2) << "\n";
  }
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nash and Stackelberg stocking equilibria for one manufacturer and n retailers"};
  app.require_subcommand(1);

  CommonFlags flags;
  int br_channel = 0;
  std::string stocks_csv;
  std::size_t horizon = 10000;

  auto* check = app.add_subcommand("check", "validate a scenario and evaluate its conditions");
  add_common(check, flags);
  auto* best = app.add_subcommand("best-response", "one channel's best response to given stocks");
  add_common(best, flags);
  best->add_option("--channel", br_channel, "0 = manufacturer, 1..n = retailer")->required();
  best->add_option("--stocks", stocks_csv, "comma-separated stock levels (own entry ignored)")
      ->required();
  auto* nash = app.add_subcommand("nash", "simultaneous-move equilibrium");
  add_common(nash, flags);
  auto* stackelberg = app.add_subcommand("stackelberg", "manufacturer-led equilibrium");
  add_common(stackelberg, flags);
  auto* compare = app.add_subcommand("compare", "Nash vs Stackelberg side by side");
  add_common(compare, flags);
  auto* simulate_cmd = app.add_subcommand("simulate", "multi-period base-stock simulation");
  add_common(simulate_cmd, flags);
  simulate_cmd->add_option("--horizon", horizon, "number of periods");
  simulate_cmd->add_option("--stocks", stocks_csv, "base-stock levels (default: Nash stocks)");
  auto* verify = app.add_subcommand("verify", "run the structural property suite");
  add_common(verify, flags, /*needs_scenario=*/false);
  auto* oracle = app.add_subcommand("oracle", "exhaustive grid search on a discrete scenario");
  add_common(oracle, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return 0;  // --help
    std::cerr << e.what() << "\n";
    return 2;
  }

  set_max_threads(flags.threads);
  try {
    if (check->parsed()) return run_check(flags);
    if (best->parsed()) return run_best_response(flags, br_channel, stocks_csv);
    if (nash->parsed()) return run_nash(flags);
    if (stackelberg->parsed()) return run_stackelberg(flags);
    if (compare->parsed()) return run_compare(flags);
    if (simulate_cmd->parsed()) return run_simulate(flags, horizon, stocks_csv);
    if (verify->parsed()) return run_verify(flags);
    if (oracle->parsed()) return run_oracle(flags);
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

#pragma once

#include <optional>
#include <string>

#include "mcinv/demand.hpp"
#include "mcinv/market.hpp"
#include "mcinv/oracle.hpp"

#include <nlohmann/json_fwd.hpp>

namespace mcinv {

/// A parsed scenario file: market parameters, demand model, and (for
/// discrete instances) an optional per-channel stock grid.
struct Scenario {
  MarketConfig cfg;
  DemandModel model;
  std::optional<std::vector<std::vector<double>>> grid;

  /// Discrete scenarios (all marginals discrete, independent) can be turned
  /// into an exhaustive instance; requires the grid block.
  DiscreteScenario to_discrete() const;
};

/// Parses and validates a scenario JSON object. Top-level keys: "n", "c",
/// "p_m", "h_m", "w", "p_r", "h_r", "alpha" (row-major (n+1) x (n+1)),
/// "marginals" (list of {"kind", ...}), "dependence" ("independent" or
/// {"empirical": csv path}), optional "grid" (per-channel level lists).
/// Marginal parameters: uniform {a, b}, exponential {rate}, lognormal
/// {mu, sigma}, discrete {values, probs}.
Scenario parse_scenario(const nlohmann::json& j, const std::string& base_dir = "");

Scenario load_scenario(const std::string& path);

/// Serializes a scenario back to the same schema.
nlohmann::json scenario_to_json(const Scenario& sc);

/// FNV-1a hash of the canonical serialized scenario, as 16 hex digits.
/// Identical scenarios always digest identically.
std::string scenario_digest(const Scenario& sc);

/// Loads a headerless numeric CSV matrix (used for empirical joint draws).
std::vector<std::vector<double>> load_csv_matrix(const std::string& path);

}  // namespace mcinv

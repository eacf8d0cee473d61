#include "mcinv/scenario_io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mcinv/common.hpp"

namespace mcinv {

namespace {

using nlohmann::json;

double require_number(const json& j, const std::string& key) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw ValidationError("scenario: missing or non-numeric \"" + key + "\"");
  return j.at(key).get<double>();
}

std::vector<double> require_number_list(const json& j, const std::string& key) {
  if (!j.contains(key) || !j.at(key).is_array())
    throw ValidationError("scenario: missing or non-array \"" + key + "\"");
  std::vector<double> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) throw ValidationError("scenario: non-numeric entry in \"" + key + "\"");
    out.push_back(v.get<double>());
  }
  return out;
}

Marginal parse_marginal(const json& j, int index) {
  const std::string tag = "marginal " + std::to_string(index);
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
    throw ValidationError("scenario: " + tag + " needs a \"kind\" string");
  const std::string kind = j.at("kind").get<std::string>();
  Marginal m;
  if (kind == "uniform") {
    m = Marginal::uniform_dist(require_number(j, "a"), require_number(j, "b"));
  } else if (kind == "exponential") {
    m = Marginal::exponential_dist(require_number(j, "rate"));
  } else if (kind == "lognormal") {
    m = Marginal::lognormal_dist(require_number(j, "mu"), require_number(j, "sigma"));
  } else if (kind == "discrete") {
    m = Marginal::discrete_dist(require_number_list(j, "values"), require_number_list(j, "probs"));
  } else {
    throw ValidationError("scenario: " + tag + " has unknown kind \"" + kind + "\"");
  }
  m.validate(index);
  return m;
}

json marginal_to_json(const Marginal& m) {
  json j;
  j["kind"] = m.kind_name();
  switch (m.kind) {
    case Marginal::Kind::uniform:
      j["a"] = m.a;
      j["b"] = m.b;
      break;
    case Marginal::Kind::exponential:
      j["rate"] = m.rate;
      break;
    case Marginal::Kind::lognormal:
      j["mu"] = m.mu;
      j["sigma"] = m.sigma;
      break;
    case Marginal::Kind::discrete:
      j["values"] = m.values;
      j["probs"] = m.probs;
      break;
  }
  return j;
}

}  // namespace

DiscreteScenario Scenario::to_discrete() const {
  if (!grid.has_value())
    throw ValidationError("scenario: discrete instance requires a \"grid\" block");
  for (const auto& m : model.marginals)
    if (!m.is_discrete())
      throw ValidationError("scenario: exhaustive search requires discrete marginals only");
  if (model.dependence != DemandModel::Dependence::independent)
    throw ValidationError("scenario: exhaustive search requires independent marginals");
  DiscreteScenario ds;
  ds.cfg = cfg;
  ds.support = product_support(model.marginals);
  ds.grid = *grid;
  ds.validate();
  return ds;
}

Scenario parse_scenario(const json& j, const std::string& base_dir) {
  if (!j.is_object()) throw ValidationError("scenario: root must be a JSON object");

  Scenario sc;
  if (!j.contains("n") || !j.at("n").is_number_integer())
    throw ValidationError("scenario: missing or non-integer \"n\"");
  sc.cfg.n = j.at("n").get<int>();
  sc.cfg.c = require_number(j, "c");
  sc.cfg.p_m = require_number(j, "p_m");
  sc.cfg.h_m = require_number(j, "h_m");
  sc.cfg.w = require_number_list(j, "w");
  sc.cfg.p_r = require_number_list(j, "p_r");
  sc.cfg.h_r = require_number_list(j, "h_r");

  if (!j.contains("alpha") || !j.at("alpha").is_array())
    throw ValidationError("scenario: missing or non-array \"alpha\"");
  for (const auto& row : j.at("alpha")) {
    if (!row.is_array()) throw ValidationError("scenario: alpha rows must be arrays");
    std::vector<double> r;
    for (const auto& v : row) {
      if (!v.is_number()) throw ValidationError("scenario: non-numeric alpha entry");
      r.push_back(v.get<double>());
    }
    sc.cfg.alpha.push_back(std::move(r));
  }
  sc.cfg = validate_config(std::move(sc.cfg));

  if (!j.contains("marginals"))
    throw ValidationError("scenario: missing \"marginals\"");
  int idx = 0;
  for (const auto& m : j.at("marginals")) sc.model.marginals.push_back(parse_marginal(m, idx++));

  if (j.contains("dependence")) {
    const auto& dep = j.at("dependence");
    if (dep.is_string() && dep.get<std::string>() == "independent") {
      sc.model.dependence = DemandModel::Dependence::independent;
    } else if (dep.is_object() && dep.contains("empirical")) {
      sc.model.dependence = DemandModel::Dependence::empirical;
      std::filesystem::path p = dep.at("empirical").get<std::string>();
      if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
      const auto matrix = load_csv_matrix(p.string());
      sc.model.empirical_count = matrix.size();
      for (const auto& row : matrix) {
        if (row.size() != sc.model.marginals.size())
          throw ValidationError("scenario: empirical CSV row width must equal channel count");
        sc.model.empirical_rows.insert(sc.model.empirical_rows.end(), row.begin(), row.end());
      }
    } else if (dep.is_object() && dep.contains("empirical_inline")) {
      sc.model.dependence = DemandModel::Dependence::empirical;
      for (const auto& row : dep.at("empirical_inline")) {
        if (row.size() != sc.model.marginals.size())
          throw ValidationError("scenario: empirical_inline row width must equal channel count");
        for (const auto& v : row) sc.model.empirical_rows.push_back(v.get<double>());
        ++sc.model.empirical_count;
      }
    } else {
      throw ValidationError(
          "scenario: \"dependence\" must be \"independent\" or {\"empirical\": path}");
    }
  }
  sc.model.validate(sc.cfg.channels());

  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    if (!g.is_array()) throw ValidationError("scenario: \"grid\" must be a list of level lists");
    std::vector<std::vector<double>> grid;
    for (const auto& row : g) {
      std::vector<double> levels;
      for (const auto& v : row) levels.push_back(v.get<double>());
      grid.push_back(std::move(levels));
    }
    sc.grid = std::move(grid);
  }
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open scenario file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ValidationError("malformed scenario JSON in " + path + ": " + e.what());
  }
  return parse_scenario(j, std::filesystem::path(path).parent_path().string());
}

json scenario_to_json(const Scenario& sc) {
  json j;
  j["n"] = sc.cfg.n;
  j["c"] = sc.cfg.c;
  j["p_m"] = sc.cfg.p_m;
  j["h_m"] = sc.cfg.h_m;
  j["w"] = sc.cfg.w;
  j["p_r"] = sc.cfg.p_r;
  j["h_r"] = sc.cfg.h_r;
  j["alpha"] = sc.cfg.alpha;
  json marginals = json::array();
  for (const auto& m : sc.model.marginals) marginals.push_back(marginal_to_json(m));
  j["marginals"] = std::move(marginals);
  if (sc.model.dependence == DemandModel::Dependence::independent) {
    j["dependence"] = "independent";
  } else {
    // Inline the draws: digests must not depend on an external file's path.
    json rows = json::array();
    const std::size_t ch = sc.model.marginals.size();
    for (std::size_t r = 0; r < sc.model.empirical_count; ++r) {
      json row = json::array();
      for (std::size_t c = 0; c < ch; ++c) row.push_back(sc.model.empirical_rows[r * ch + c]);
      rows.push_back(std::move(row));
    }
    j["dependence"] = json{{"empirical_inline", std::move(rows)}};
  }
  if (sc.grid.has_value()) j["grid"] = *sc.grid;
  return j;
}

std::string scenario_digest(const Scenario& sc) {
  const std::string canonical = scenario_to_json(sc).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

std::vector<std::vector<double>> load_csv_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open CSV file: " + path);
  std::vector<std::vector<double>> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ValidationError("CSV " + path + " line " + std::to_string(lineno) +
                              ": non-numeric cell \"" + cell + "\"");
      }
    }
    if (!out.empty() && row.size() != out.front().size())
      throw ValidationError("CSV " + path + " line " + std::to_string(lineno) +
                            ": inconsistent column count");
    out.push_back(std::move(row));
  }
  if (out.empty()) throw ValidationError("CSV " + path + " is empty");
  return out;
}

}  // namespace mcinv

#include "ewmcast/config.hpp"

#include <fstream>

namespace ewmcast {

namespace {

using nlohmann::json;

const json& require(const json& j, const std::string& path, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw ConfigError(path + "." + key + ": missing required field");
  return j.at(key);
}

double get_number(const json& j, const std::string& path, const char* key) {
  const json& v = require(j, path, key);
  if (!v.is_number()) throw ConfigError(path + "." + key + ": expected a number");
  return v.get<double>();
}

double get_number_or(const json& j, const std::string& path, const char* key,
                     double fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return get_number(j, path, key);
}

long long get_integer(const json& j, const std::string& path, const char* key) {
  const json& v = require(j, path, key);
  if (!v.is_number_integer())
    throw ConfigError(path + "." + key + ": expected an integer");
  return v.get<long long>();
}

long long get_integer_or(const json& j, const std::string& path, const char* key,
                         long long fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return get_integer(j, path, key);
}

std::string get_string(const json& j, const std::string& path, const char* key) {
  const json& v = require(j, path, key);
  if (!v.is_string()) throw ConfigError(path + "." + key + ": expected a string");
  return v.get<std::string>();
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  ExperimentConfig cfg;

  // scenario
  const json& sc = require(j, "config", "scenario");
  cfg.scenario.type = get_string(sc, "scenario", "type");
  if (cfg.scenario.type != "single_cell" && cfg.scenario.type != "sfn")
    throw ConfigError("scenario.type: must be \"single_cell\" or \"sfn\"");
  cfg.scenario.num_users = static_cast<int>(get_integer(sc, "scenario", "num_users"));
  if (cfg.scenario.num_users < 1)
    throw ConfigError("scenario.num_users: must be >= 1");
  cfg.scenario.cell_radius_m =
      get_number_or(sc, "scenario", "cell_radius_m", cfg.scenario.cell_radius_m);
  cfg.scenario.min_distance_m =
      get_number_or(sc, "scenario", "min_distance_m", cfg.scenario.min_distance_m);
  cfg.scenario.playground_m =
      get_number_or(sc, "scenario", "playground_m", cfg.scenario.playground_m);
  if (cfg.scenario.type == "single_cell") {
    if (cfg.scenario.cell_radius_m <= 0.0)
      throw ConfigError("scenario.cell_radius_m: must be > 0");
    if (cfg.scenario.min_distance_m <= 0.0 ||
        cfg.scenario.min_distance_m >= cfg.scenario.cell_radius_m)
      throw ConfigError("scenario.min_distance_m: must be in (0, cell_radius_m)");
  } else if (cfg.scenario.playground_m <= 0.0) {
    throw ConfigError("scenario.playground_m: must be > 0");
  }

  RadioParams& radio = cfg.scenario.radio;
  radio.isd_m = get_number_or(sc, "scenario", "isd_m", radio.isd_m);
  if (radio.isd_m <= 0.0) throw ConfigError("scenario.isd_m: must be > 0");
  radio.tx_power_dbm = get_number_or(sc, "scenario", "tx_power_dbm", radio.tx_power_dbm);
  radio.noise_dbm = get_number_or(sc, "scenario", "noise_dbm", radio.noise_dbm);
  radio.pathloss_a = get_number_or(sc, "scenario", "pathloss_a", radio.pathloss_a);
  radio.pathloss_b = get_number_or(sc, "scenario", "pathloss_b", radio.pathloss_b);
  if (sc.contains("shadowing")) {
    const json& sh = sc.at("shadowing");
    if (!sh.is_object()) throw ConfigError("scenario.shadowing: expected an object");
    if (sh.contains("enabled")) {
      if (!sh.at("enabled").is_boolean())
        throw ConfigError("scenario.shadowing.enabled: expected a boolean");
      radio.shadowing.enabled = sh.at("enabled").get<bool>();
    }
    radio.shadowing.sigma_db =
        get_number_or(sh, "scenario.shadowing", "sigma_db", radio.shadowing.sigma_db);
    if (radio.shadowing.sigma_db < 0.0)
      throw ConfigError("scenario.shadowing.sigma_db: must be >= 0");
    radio.shadowing.seed = static_cast<std::uint64_t>(
        get_integer_or(sh, "scenario.shadowing", "seed",
                       static_cast<long long>(radio.shadowing.seed)));
  }

  const json& mcs = require(sc, "scenario", "mcs");
  if (!mcs.is_array() || mcs.empty())
    throw ConfigError("scenario.mcs: expected a non-empty array");
  for (std::size_t i = 0; i < mcs.size(); ++i) {
    const std::string path = "scenario.mcs[" + std::to_string(i) + "]";
    const json& e = mcs[i];
    if (!e.is_object()) throw ConfigError(path + ": expected an object");
    McsEntry entry;
    entry.name = e.contains("name") ? get_string(e, path, "name")
                                    : "mcs" + std::to_string(i + 1);
    entry.spectral_efficiency = get_number(e, path, "spectral_efficiency");
    entry.sinr_threshold_db = get_number(e, path, "sinr_threshold_db");
    entry.transition_width_db =
        get_number_or(e, path, "transition_width_db", 1.0);
    if (entry.transition_width_db <= 0.0)
      throw ConfigError(path + ".transition_width_db: must be > 0");
    if (i > 0 && entry.sinr_threshold_db <= cfg.scenario.mcs.back().sinr_threshold_db)
      throw ConfigError(path + ".sinr_threshold_db: thresholds must be strictly increasing");
    cfg.scenario.mcs.push_back(entry);
  }

  // message
  const json& msg = require(j, "config", "message");
  const json& layers = require(msg, "message", "layer_sizes");
  if (!layers.is_array() || layers.empty())
    throw ConfigError("message.layer_sizes: expected a non-empty array");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (!layers[i].is_number_integer() || layers[i].get<long long>() < 1)
      throw ConfigError("message.layer_sizes[" + std::to_string(i) +
                        "]: must be an integer >= 1");
    cfg.message.layer_sizes.push_back(layers[i].get<int>());
  }
  cfg.message.packet_bits =
      static_cast<long>(get_integer_or(msg, "message", "packet_bits", cfg.message.packet_bits));
  if (cfg.message.packet_bits < 1)
    throw ConfigError("message.packet_bits: must be >= 1");

  const std::size_t L = cfg.message.layer_sizes.size();
  cfg.scenario.num_subchannels = static_cast<int>(
      get_integer_or(sc, "scenario", "num_subchannels", static_cast<long long>(L)));
  if (cfg.scenario.num_subchannels < static_cast<int>(L))
    throw ConfigError("scenario.num_subchannels: must cover one subchannel per window");

  // sla
  const json& sla = require(j, "config", "sla");
  cfg.sla.q_hat = get_number(sla, "sla", "q_hat");
  if (!(cfg.sla.q_hat > 0.0 && cfg.sla.q_hat <= 1.0))
    throw ConfigError("sla.q_hat: must be in (0, 1]");
  const json& targets = require(sla, "sla", "coverage_targets");
  if (!targets.is_array() || targets.size() != L)
    throw ConfigError("sla.coverage_targets: expected one entry per layer");
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (!targets[i].is_number())
      throw ConfigError("sla.coverage_targets[" + std::to_string(i) + "]: expected a number");
    const double t = targets[i].get<double>();
    if (!(t >= 0.0 && t <= 1.0))
      throw ConfigError("sla.coverage_targets[" + std::to_string(i) + "]: must be in [0, 1]");
    cfg.sla.coverage_targets.push_back(t);
  }
  const json& caps = require(sla, "sla", "budget_caps");
  if (!caps.is_array() || caps.size() != L)
    throw ConfigError("sla.budget_caps: expected one entry per layer");
  for (std::size_t i = 0; i < caps.size(); ++i) {
    if (!caps[i].is_number_integer() || caps[i].get<long long>() < 1)
      throw ConfigError("sla.budget_caps[" + std::to_string(i) + "]: must be an integer >= 1");
    cfg.sla.budget_caps.push_back(caps[i].get<int>());
  }

  cfg.field_size = static_cast<int>(get_integer_or(j, "config", "field_size", 256));
  if (cfg.field_size != 2 && cfg.field_size != 256)
    throw ConfigError("field_size: must be 2 or 256");

  if (j.contains("mcs_candidates")) {
    const json& cands = j.at("mcs_candidates");
    if (!cands.is_array()) throw ConfigError("mcs_candidates: expected an array");
    for (std::size_t i = 0; i < cands.size(); ++i) {
      if (!cands[i].is_number_integer() || cands[i].get<long long>() < 1 ||
          cands[i].get<long long>() > static_cast<long long>(cfg.scenario.mcs.size()))
        throw ConfigError("mcs_candidates[" + std::to_string(i) +
                          "]: must be a valid MCS index");
      cfg.mcs_candidates.push_back(cands[i].get<int>());
    }
  }

  cfg.exact_cap = get_integer_or(j, "config", "exact_cap", cfg.exact_cap);
  if (cfg.exact_cap < 1) throw ConfigError("exact_cap: must be >= 1");
  cfg.trials = static_cast<long>(get_integer_or(j, "config", "trials", cfg.trials));
  if (cfg.trials < 1) throw ConfigError("trials: must be >= 1");
  cfg.seed = static_cast<std::uint64_t>(
      get_integer_or(j, "config", "seed", static_cast<long long>(cfg.seed)));
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  return parse_config(j);
}

Scenario ExperimentConfig::build_scenario() const {
  McsTable table(scenario.mcs);
  if (scenario.type == "single_cell") {
    return build_single_cell(scenario.num_users, scenario.cell_radius_m,
                             scenario.min_distance_m, scenario.radio,
                             std::move(table), field_size,
                             scenario.num_subchannels);
  }
  return build_sfn(scenario.num_users, scenario.playground_m, scenario.radio,
                   std::move(table), field_size, scenario.num_subchannels);
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json sc;
  sc["type"] = scenario.type;
  sc["num_users"] = scenario.num_users;
  if (scenario.type == "single_cell") {
    sc["cell_radius_m"] = scenario.cell_radius_m;
    sc["min_distance_m"] = scenario.min_distance_m;
  } else {
    sc["playground_m"] = scenario.playground_m;
  }
  sc["isd_m"] = scenario.radio.isd_m;
  sc["tx_power_dbm"] = scenario.radio.tx_power_dbm;
  sc["noise_dbm"] = scenario.radio.noise_dbm;
  sc["pathloss_a"] = scenario.radio.pathloss_a;
  sc["pathloss_b"] = scenario.radio.pathloss_b;
  sc["shadowing"] = {{"enabled", scenario.radio.shadowing.enabled},
                     {"sigma_db", scenario.radio.shadowing.sigma_db},
                     {"seed", scenario.radio.shadowing.seed}};
  sc["num_subchannels"] = scenario.num_subchannels;
  sc["mcs"] = nlohmann::json::array();
  for (const McsEntry& e : scenario.mcs) {
    sc["mcs"].push_back({{"name", e.name},
                         {"spectral_efficiency", e.spectral_efficiency},
                         {"sinr_threshold_db", e.sinr_threshold_db},
                         {"transition_width_db", e.transition_width_db}});
  }
  nlohmann::json j;
  j["scenario"] = sc;
  j["message"] = {{"layer_sizes", message.layer_sizes},
                  {"packet_bits", message.packet_bits}};
  j["sla"] = {{"q_hat", sla.q_hat},
              {"coverage_targets", sla.coverage_targets},
              {"budget_caps", sla.budget_caps}};
  j["field_size"] = field_size;
  if (!mcs_candidates.empty()) j["mcs_candidates"] = mcs_candidates;
  j["exact_cap"] = exact_cap;
  j["trials"] = trials;
  j["seed"] = seed;
  return j;
}

}  // namespace ewmcast

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "ewmcast/optimizer.hpp"
#include "ewmcast/scenario.hpp"
#include "ewmcast/service_model.hpp"

namespace ewmcast {

// Raised on schema violations; the message names the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScenarioConfig {
  std::string type;  // "single_cell" | "sfn"
  int num_users = 1;
  double cell_radius_m = 290.0;     // single_cell
  double min_distance_m = 10.0;     // single_cell
  double playground_m = 1200.0;     // sfn
  RadioParams radio;
  int num_subchannels = 1;
  std::vector<McsEntry> mcs;
};

struct MessageConfig {
  std::vector<int> layer_sizes;
  long packet_bits = 8192;  // carried as metadata only
};

struct ExperimentConfig {
  ScenarioConfig scenario;
  MessageConfig message;
  SlaConstraints sla;
  int field_size = 256;
  std::vector<int> mcs_candidates;  // exact solver; empty = all
  long long exact_cap = 10'000'000;
  long trials = 10'000;
  std::uint64_t seed = 1;

  LayeredMessage layered_message() const { return LayeredMessage(message.layer_sizes); }
  Scenario build_scenario() const;
  nlohmann::json to_json() const;  // normalized form (defaults filled in)
};

ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

}  // namespace ewmcast

#include "ewmcast/experiment.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "json.hpp"

#include "ewmcast/config.hpp"
#include "ewmcast/optimizer.hpp"
#include "ewmcast/packet_sim.hpp"

namespace ewmcast {

namespace {

using nlohmann::json;

// Doubles destined for JSON are rounded through their 12-significant-digit
// decimal form so the emitted text is stable and format-bounded.
double json_round(double value) {
  return std::strtod(format_sig(value).c_str(), nullptr);
}

json round_vector(const std::vector<double>& v) {
  json arr = json::array();
  for (double x : v) arr.push_back(json_round(x));
  return arr;
}

struct SolveBundle {
  EvaluatedPolicy evaluated;
  std::string solver;
};

json policy_json(const SolveBundle& bundle, const std::string& config_hash,
                 std::uint64_t seed) {
  const EvaluatedPolicy& ev = bundle.evaluated;
  json j;
  j["solver"] = bundle.solver;
  j["model"] = ev.model;
  j["mcs"] = ev.policy.mcs;
  j["budget"] = ev.policy.budget;
  j["profit"] = ev.profit;
  j["cost"] = ev.cost;
  j["ratio"] = json_round(ev.ratio);
  j["feasible"] = ev.feasible;
  j["level_coverage"] = round_vector(ev.level_coverage);
  j["config_hash"] = config_hash;
  j["seed"] = seed;
  return j;
}

class OutputSet {
 public:
  void add(const std::string& name, std::string content) {
    files_[name] = std::move(content);
  }

  void write_all(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    for (const auto& [name, content] : files_) {
      std::ofstream out(dir / name, std::ios::binary);
      if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
      out << content;
    }
  }

 private:
  std::map<std::string, std::string> files_;
};

std::string coverage_csv(const Scenario& scenario, const EvaluatedPolicy& ev,
                         const SimulationReport* sim, const std::string& config_hash,
                         std::uint64_t seed) {
  const int L = ev.qos.num_levels();
  std::ostringstream out;
  out << "# config_hash=" << config_hash << " seed=" << seed << "\n";
  const bool radial = scenario.kind() == ScenarioKind::kSingleCell;
  out << "user";
  if (radial)
    out << ",distance_m";
  else
    out << ",grid_row,grid_col";
  out << ",x_m,y_m,sinr_db";
  for (int i = 1; i <= L; ++i) out << ",win_prob_" << i;
  for (int i = 1; i <= L; ++i) out << ",delta_" << i;
  out << ",qos_level";
  if (sim) {
    for (int i = 1; i <= L; ++i) out << ",emp_win_" << i;
    for (int i = 1; i <= L; ++i) out << ",emp_level_" << i;
  }
  out << "\n";
  for (int u = 0; u < scenario.num_users(); ++u) {
    const UserPlacement& p = scenario.user(u);
    out << u;
    if (radial)
      out << "," << format_sig(p.distance_m);
    else
      out << "," << p.grid_row << "," << p.grid_col;
    out << "," << format_sig(p.x) << "," << format_sig(p.y) << ","
        << format_sig(scenario.sinr_db(u));
    for (int i = 0; i < L; ++i) out << "," << format_sig(ev.win_probs[u][i]);
    for (int i = 1; i <= L; ++i) out << "," << static_cast<int>(ev.qos.at(u, i));
    out << "," << ev.qos.user_level(u);
    if (sim) {
      for (int i = 0; i < L; ++i)
        out << "," << format_sig(sim->window_decode_freq[u][i]);
      for (int i = 0; i < L; ++i) out << "," << format_sig(sim->level_freq[u][i]);
    }
    out << "\n";
  }
  return out.str();
}

json summary_json(const RunOptions& options, const ExperimentConfig& cfg,
                  const Scenario& scenario, const SolveBundle& bundle,
                  const SimulationReport* sim, const std::string& config_hash,
                  std::uint64_t seed) {
  const EvaluatedPolicy& ev = bundle.evaluated;
  json j;
  j["command"] = options.command;
  j["solver"] = bundle.solver;
  j["config_hash"] = config_hash;
  j["seed"] = seed;
  j["scenario_type"] = cfg.scenario.type;
  j["num_users"] = scenario.num_users();
  j["num_layers"] = static_cast<int>(cfg.message.layer_sizes.size());
  j["field_size"] = cfg.field_size;
  j["policy"] = {{"mcs", ev.policy.mcs}, {"budget", ev.policy.budget}};
  j["profit"] = ev.profit;
  j["cost"] = ev.cost;
  j["ratio"] = json_round(ev.ratio);
  j["feasible"] = ev.feasible;
  j["level_coverage"] = round_vector(ev.level_coverage);
  j["coverage_targets"] = round_vector(cfg.sla.coverage_targets);
  if (sim) j["trials"] = sim->trials;
  return j;
}

std::string sweep_csv(const Scenario& scenario, const EvaluatedPolicy& uep,
                      const EvaluatedPolicy& mrt, const std::string& config_hash,
                      std::uint64_t seed) {
  const int L = uep.qos.num_levels();
  std::ostringstream out;
  out << "# config_hash=" << config_hash << " seed=" << seed << "\n";
  out << "distance_m";
  for (int i = 1; i <= L; ++i) out << ",uep_prob_" << i;
  for (int i = 1; i <= L; ++i) out << ",uep_delta_" << i;
  for (int i = 1; i <= L; ++i) out << ",mrt_prob_" << i;
  for (int i = 1; i <= L; ++i) out << ",mrt_delta_" << i;
  out << "\n";
  for (int u = 0; u < scenario.num_users(); ++u) {
    out << format_sig(scenario.user(u).distance_m);
    // achieving level ell: any window i >= ell decodable; the analytical
    // handle is the suffix max of P_{u,i}
    for (int ell = 1; ell <= L; ++ell) {
      double suffix = 0.0;
      for (int i = ell; i <= L; ++i) suffix = std::max(suffix, uep.win_probs[u][i - 1]);
      out << "," << format_sig(suffix);
    }
    for (int i = 1; i <= L; ++i) out << "," << static_cast<int>(uep.qos.at(u, i));
    for (int i = 0; i < L; ++i) out << "," << format_sig(mrt.win_probs[u][i]);
    for (int i = 1; i <= L; ++i) out << "," << static_cast<int>(mrt.qos.at(u, i));
    out << "\n";
  }
  return out.str();
}

AllocationPolicy load_policy_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("policy: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("policy: invalid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("mcs") || !j.contains("budget"))
    throw ConfigError("policy: expected an object with mcs and budget arrays");
  AllocationPolicy p;
  for (const auto& v : j.at("mcs")) p.mcs.push_back(v.get<int>());
  for (const auto& v : j.at("budget")) p.budget.push_back(v.get<int>());
  return p;
}

int run_command(const RunOptions& options) {
  ExperimentConfig cfg = load_config(options.config_path);
  if (options.trials) cfg.trials = *options.trials;
  if (options.seed) cfg.seed = *options.seed;
  if (options.cap) cfg.exact_cap = *options.cap;
  if (options.command == "sweep-distance" && cfg.scenario.type != "single_cell")
    throw ConfigError("scenario.type: sweep-distance requires a single_cell scenario");

  const std::string config_hash = fnv1a_hex(cfg.to_json().dump());
  const auto t0 = std::chrono::steady_clock::now();

  const Scenario scenario = cfg.build_scenario();
  const ErasureProfile profile = erasure_profile(scenario);
  const LayeredMessage msg = cfg.layered_message();
  const FieldSize q(cfg.field_size);

  OutputSet outputs;
  {
    json sj = scenario.to_json();
    sj["config_hash"] = config_hash;
    sj["seed"] = cfg.seed;
    outputs.add("scenario.json", sj.dump(2) + "\n");
  }

  auto fail_infeasible = [&](const InfeasibilityReport& report) {
    json j;
    j["command"] = options.command;
    j["config_hash"] = config_hash;
    j["seed"] = cfg.seed;
    j["feasible"] = false;
    j["infeasibility"] = {{"reason", report.reason},
                          {"unmet_levels", report.unmet_levels}};
    OutputSet only_summary;
    only_summary.add("summary.json", j.dump(2) + "\n");
    only_summary.write_all(options.out_dir);
    std::cerr << "infeasible: " << report.reason << "\n";
    return kExitInfeasible;
  };

  SolveBundle bundle;
  const SimulationReport* sim_ptr = nullptr;
  SimulationReport sim;

  if (options.command == "solve-exact") {
    SolveResult result =
        solve_exact(msg, profile, cfg.sla, q, cfg.mcs_candidates, cfg.exact_cap);
    if (std::holds_alternative<InfeasibilityReport>(result))
      return fail_infeasible(std::get<InfeasibilityReport>(result));
    bundle = {std::get<EvaluatedPolicy>(result), "exact"};
  } else if (options.command == "solve-heuristic" || options.command == "sweep-distance") {
    SolveResult result = solve_heuristic(msg, profile, cfg.sla, q);
    if (std::holds_alternative<InfeasibilityReport>(result))
      return fail_infeasible(std::get<InfeasibilityReport>(result));
    bundle = {std::get<EvaluatedPolicy>(result), "heuristic"};
  } else if (options.command == "solve-mrt") {
    bundle = {solve_mrt(msg, profile, cfg.sla, cfg.sla.q_hat), "mrt"};
  } else if (options.command == "simulate") {
    if (options.policy_path) {
      AllocationPolicy p = load_policy_file(*options.policy_path);
      bundle = {evaluate(p, msg, profile, cfg.sla, q), "stored-policy"};
    } else {
      SolveResult result = solve_heuristic(msg, profile, cfg.sla, q);
      if (std::holds_alternative<InfeasibilityReport>(result))
        return fail_infeasible(std::get<InfeasibilityReport>(result));
      bundle = {std::get<EvaluatedPolicy>(result), "heuristic"};
    }
    sim = run_simulation(bundle.evaluated.policy, msg, profile, q, cfg.trials,
                         cfg.seed);
    sim_ptr = &sim;
    json simj = sim.to_json();
    simj["config_hash"] = config_hash;
    outputs.add("simulation.json", simj.dump() + "\n");
  } else {
    throw ConfigError("command: unknown command " + options.command);
  }

  outputs.add("policy.json", policy_json(bundle, config_hash, cfg.seed).dump(2) + "\n");
  outputs.add("coverage.csv",
              coverage_csv(scenario, bundle.evaluated, sim_ptr, config_hash, cfg.seed));
  if (options.command == "sweep-distance") {
    EvaluatedPolicy mrt = solve_mrt(msg, profile, cfg.sla, cfg.sla.q_hat);
    outputs.add("policy_mrt.json",
                policy_json({mrt, "mrt"}, config_hash, cfg.seed).dump(2) + "\n");
    outputs.add("sweep.csv",
                sweep_csv(scenario, bundle.evaluated, mrt, config_hash, cfg.seed));
  }
  outputs.add("summary.json",
              summary_json(options, cfg, scenario, bundle, sim_ptr, config_hash,
                           cfg.seed)
                      .dump(2) +
                  "\n");
  outputs.write_all(options.out_dir);

  const auto elapsed = std::chrono::duration<double>(
      std::chrono::steady_clock::now() - t0);
  std::cout << options.command << ": profit=" << bundle.evaluated.profit
            << " cost=" << bundle.evaluated.cost
            << " ratio=" << format_sig(bundle.evaluated.ratio)
            << " feasible=" << (bundle.evaluated.feasible ? "yes" : "no")
            << " elapsed=" << elapsed.count() << "s\n";
  return kExitOk;
}

}  // namespace

std::string format_sig(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

int run_experiment(const RunOptions& options) {
  try {
    return run_command(options);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const SearchCapExceeded& e) {
    std::cerr << "search cap exceeded: " << e.what() << "\n";
    return kExitSearchCap;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace ewmcast

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kCli = EWMCAST_CLI_PATH;
const std::string kConfigDir = EWMCAST_CONFIG_DIR;

int run_cli(const std::string& args) {
  const std::string cmd = kCli + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "ewmcast_test" / name;
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("malformed config exits 2 and writes nothing") {
  const fs::path dir = fresh_dir("bad");
  const fs::path cfg = fs::temp_directory_path() / "ewmcast_test" / "bad.json";
  fs::create_directories(cfg.parent_path());
  std::ofstream(cfg) << "{ not json";
  CHECK(run_cli("solve-heuristic --config " + cfg.string() + " --out " + dir.string()) == 2);
  CHECK_FALSE(fs::exists(dir));

  std::ofstream(cfg) << R"({"scenario": {"type": "nowhere"}})";
  CHECK(run_cli("solve-heuristic --config " + cfg.string() + " --out " + dir.string()) == 2);
  CHECK_FALSE(fs::exists(dir));

  CHECK(run_cli("solve-heuristic --config /does/not/exist.json --out " + dir.string()) == 2);
}

TEST_CASE("unknown flags and missing subcommand fail cleanly") {
  CHECK(run_cli("") != 0);
  CHECK(run_cli("solve-heuristic") != 0);
}

TEST_CASE("heuristic run writes the documented files") {
  const fs::path dir = fresh_dir("heu");
  const std::string cfg = kConfigDir + "/single_cell.default.json";
  REQUIRE(run_cli("solve-heuristic --config " + cfg + " --out " + dir.string()) == 0);
  CHECK(fs::exists(dir / "policy.json"));
  CHECK(fs::exists(dir / "coverage.csv"));
  CHECK(fs::exists(dir / "summary.json"));
  CHECK(fs::exists(dir / "scenario.json"));

  // 80 users -> comment line + header + 80 rows
  const std::string csv = slurp(dir / "coverage.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 82);

  const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
  CHECK(summary["feasible"] == true);
  CHECK(summary["num_users"] == 80);
  CHECK(summary["config_hash"].is_string());

  // summary coverage equals the delta column means of coverage.csv
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);  // comment
  std::getline(lines, line);  // header
  std::vector<int> delta_cols;
  {
    std::istringstream hdr(line);
    std::string field;
    int idx = 0;
    while (std::getline(hdr, field, ',')) {
      if (field.rfind("delta_", 0) == 0) delta_cols.push_back(idx);
      ++idx;
    }
  }
  REQUIRE(delta_cols.size() == 4);
  std::vector<double> sums(4, 0.0);
  int rows = 0;
  while (std::getline(lines, line)) {
    std::istringstream row(line);
    std::string field;
    int idx = 0;
    std::size_t next = 0;
    while (std::getline(row, field, ',')) {
      if (next < delta_cols.size() && idx == delta_cols[next])
        sums[next++] += std::stod(field);
      ++idx;
    }
    ++rows;
  }
  REQUIRE(rows == 80);
  for (int ell = 0; ell < 4; ++ell) {
    CHECK(summary["level_coverage"][ell].get<double>() ==
          doctest::Approx(sums[ell] / rows).epsilon(1e-9));
  }
}

TEST_CASE("reruns with the same seed are byte-identical") {
  const fs::path a = fresh_dir("det_a");
  const fs::path b = fresh_dir("det_b");
  const std::string cfg = kConfigDir + "/single_cell.default.json";
  REQUIRE(run_cli("simulate --config " + cfg + " --trials 500 --seed 11 --out " + a.string()) == 0);
  REQUIRE(run_cli("simulate --config " + cfg + " --trials 500 --seed 11 --out " + b.string()) == 0);
  int compared = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    const auto name = entry.path().filename();
    CHECK(slurp(entry.path()) == slurp(b / name));
    ++compared;
  }
  CHECK(compared >= 5);  // policy, coverage, summary, scenario, simulation
}

TEST_CASE("sweep-distance requires a single-cell scenario") {
  const fs::path dir = fresh_dir("sweep_sfn");
  const std::string cfg = kConfigDir + "/sfn.default.json";
  CHECK(run_cli("sweep-distance --config " + cfg + " --out " + dir.string()) == 2);
  CHECK_FALSE(fs::exists(dir));
}

TEST_CASE("sweep-distance emits the comparison table") {
  const fs::path dir = fresh_dir("sweep_sc");
  const std::string cfg = kConfigDir + "/single_cell.default.json";
  REQUIRE(run_cli("sweep-distance --config " + cfg + " --out " + dir.string()) == 0);
  CHECK(fs::exists(dir / "sweep.csv"));
  CHECK(fs::exists(dir / "policy_mrt.json"));
  const std::string csv = slurp(dir / "sweep.csv");
  CHECK(csv.find("uep_prob_1") != std::string::npos);
  CHECK(csv.find("mrt_delta_4") != std::string::npos);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 82);
}

TEST_CASE("simulate can replay a stored policy") {
  const fs::path solve_dir = fresh_dir("replay_solve");
  const fs::path sim_dir = fresh_dir("replay_sim");
  const std::string cfg = kConfigDir + "/single_cell.default.json";
  REQUIRE(run_cli("solve-heuristic --config " + cfg + " --out " + solve_dir.string()) == 0);
  REQUIRE(run_cli("simulate --config " + cfg + " --trials 200 --policy " +
                  (solve_dir / "policy.json").string() + " --out " + sim_dir.string()) == 0);
  const auto summary = nlohmann::json::parse(slurp(sim_dir / "summary.json"));
  CHECK(summary["solver"] == "stored-policy");
  const auto a = nlohmann::json::parse(slurp(solve_dir / "policy.json"));
  const auto b = nlohmann::json::parse(slurp(sim_dir / "policy.json"));
  CHECK(a["mcs"] == b["mcs"]);
  CHECK(a["budget"] == b["budget"]);
}

TEST_CASE("exact solver on the default config exceeds the cap") {
  const fs::path dir = fresh_dir("exact_cap");
  const std::string cfg = kConfigDir + "/single_cell.default.json";
  CHECK(run_cli("solve-exact --config " + cfg + " --out " + dir.string()) == 4);
}

TEST_CASE("an unreachable coverage target exits 3 with a report") {
  auto cfg = nlohmann::json::parse(
      slurp(kConfigDir + std::string("/single_cell.default.json")));
  cfg["sla"]["coverage_targets"] = {1.0, 1.0, 1.0, 1.0};
  cfg["sla"]["budget_caps"] = {1, 1, 1, 1};
  const fs::path cfg_path = fs::temp_directory_path() / "ewmcast_test" / "hard.json";
  fs::create_directories(cfg_path.parent_path());
  std::ofstream(cfg_path) << cfg.dump();
  const fs::path dir = fresh_dir("infeasible");
  CHECK(run_cli("solve-heuristic --config " + cfg_path.string() + " --out " +
                dir.string()) == 3);
  const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
  CHECK(summary["feasible"] == false);
  CHECK(summary["infeasibility"]["reason"].is_string());
  CHECK_FALSE(fs::exists(dir / "policy.json"));
}

TEST_CASE("sfn coverage table carries grid coordinates and qos levels") {
  const fs::path dir = fresh_dir("sfn_cov");
  const std::string cfg = kConfigDir + "/sfn.default.json";
  REQUIRE(run_cli("solve-mrt --config " + cfg + " --out " + dir.string()) == 0);
  std::istringstream csv(slurp(dir / "coverage.csv"));
  std::string line;
  std::getline(csv, line);  // comment
  std::getline(csv, line);  // header
  CHECK(line.find("grid_row,grid_col") != std::string::npos);
  CHECK(line.find("qos_level") != std::string::npos);
  int rows = 0;
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == 1700);
}

#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"

#include "ewmcast/config.hpp"
#include "ewmcast/scenario.hpp"

using namespace ewmcast;

namespace {

McsTable small_table() {
  return McsTable({{"low", 0.5, -5.0, 1.0}, {"mid", 2.0, 3.0, 1.0}, {"high", 4.0, 10.0, 1.0}});
}

RadioParams default_radio() { return RadioParams{}; }

}  // namespace

TEST_CASE("mcs table validates ordering") {
  CHECK(small_table().size() == 3);
  CHECK(small_table().entry(2).sinr_threshold_db == 3.0);
  CHECK_THROWS_AS(McsTable({}), std::invalid_argument);
  CHECK_THROWS_AS(McsTable({{"a", 1.0, 0.0, 1.0}, {"b", 2.0, 0.0, 1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(McsTable({{"a", 1.0, 0.0, 0.0}}), std::invalid_argument);
}

TEST_CASE("single-cell layout: 19 stations, one serving, users on the sector axis") {
  const Scenario s = build_single_cell(80, 290.0, 10.0, default_radio(),
                                       small_table(), 256, 4);
  CHECK(s.num_users() == 80);
  CHECK(s.num_stations() == 19);
  CHECK(s.num_serving() == 1);

  // user distances increase along the radial line and stay in range
  double prev = 0.0;
  for (int u = 0; u < s.num_users(); ++u) {
    const UserPlacement& p = s.user(u);
    CHECK(p.distance_m > prev);
    CHECK(p.distance_m > 10.0);
    CHECK(p.distance_m < 290.0);
    CHECK(std::hypot(p.x, p.y) == doctest::Approx(p.distance_m));
    prev = p.distance_m;
  }

  // a single user sits at the midpoint of the radial span
  const Scenario one = build_single_cell(1, 290.0, 10.0, default_radio(),
                                         small_table(), 256, 4);
  CHECK(one.user(0).distance_m == doctest::Approx((10.0 + 290.0) / 2.0));

  CHECK_THROWS_AS(build_single_cell(0, 290.0, 10.0, default_radio(), small_table(), 256, 4),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_single_cell(5, -1.0, 10.0, default_radio(), small_table(), 256, 4),
                  std::invalid_argument);
}

TEST_CASE("sfn layout: 4 serving stations and a truncated square grid") {
  const Scenario s = build_sfn(1700, 1200.0, default_radio(), small_table(), 256, 4);
  CHECK(s.num_users() == 1700);
  CHECK(s.num_stations() == 19);
  CHECK(s.num_serving() == 4);
  // ceil(sqrt(1700)) = 42; row-major truncation
  CHECK(s.user(0).grid_row == 0);
  CHECK(s.user(0).grid_col == 0);
  CHECK(s.user(41).grid_col == 41);
  CHECK(s.user(42).grid_row == 1);
  CHECK(s.user(1699).grid_row == 40);
  CHECK(s.user(1699).grid_col == 19);

  const Scenario four = build_sfn(4, 1000.0, default_radio(), small_table(), 256, 4);
  CHECK(four.num_users() == 4);
  CHECK(four.user(3).grid_row == 1);
  CHECK(four.user(3).grid_col == 1);

  CHECK_THROWS_AS(build_sfn(0, 1000.0, default_radio(), small_table(), 256, 4),
                  std::invalid_argument);
}

TEST_CASE("sinr from explicit geometries") {
  // one serving station, no interferers: pure SNR
  RadioParams radio = default_radio();
  McsTable table = small_table();
  {
    Scenario s(ScenarioKind::kSingleCell, {{0.0, 0.0, true}},
               {{100.0, 0.0, 100.0, -1, -1}}, radio, table, 256, 1);
    const double loss_db = radio.pathloss_a + radio.pathloss_b * std::log10(0.1);
    const double snr_db = radio.tx_power_dbm - loss_db - radio.noise_dbm;
    CHECK(s.sinr_db(0) == doctest::Approx(snr_db).epsilon(1e-9));
  }
  {
    // interference-limited: scaling every transmit power cancels out
    Scenario a(ScenarioKind::kSingleCell,
               {{0.0, 0.0, true}, {500.0, 0.0, false}},
               {{200.0, 0.0, 200.0, -1, -1}}, radio, table, 256, 1);
    RadioParams boosted = radio;
    boosted.tx_power_dbm += 3.0;
    boosted.noise_dbm = -400.0;  // effectively zero
    RadioParams quiet = radio;
    quiet.noise_dbm = -400.0;
    Scenario b(ScenarioKind::kSingleCell,
               {{0.0, 0.0, true}, {500.0, 0.0, false}},
               {{200.0, 0.0, 200.0, -1, -1}}, boosted, table, 256, 1);
    Scenario c(ScenarioKind::kSingleCell,
               {{0.0, 0.0, true}, {500.0, 0.0, false}},
               {{200.0, 0.0, 200.0, -1, -1}}, quiet, table, 256, 1);
    CHECK(b.sinr_db(0) == doctest::Approx(c.sinr_db(0)).epsilon(1e-9));
  }
  {
    // a user equidistant from 4 serving stations collects 4x the power
    std::vector<Station> quad = {{100.0, 0.0, true},
                                 {-100.0, 0.0, true},
                                 {0.0, 100.0, true},
                                 {0.0, -100.0, true}};
    Scenario four(ScenarioKind::kSfn, quad, {{0.0, 0.0, 0.0, 0, 0}}, radio, table, 256, 1);
    Scenario single(ScenarioKind::kSfn, {{100.0, 0.0, true}},
                    {{0.0, 0.0, 0.0, 0, 0}}, radio, table, 256, 1);
    CHECK(four.sinr(0) == doctest::Approx(4.0 * single.sinr(0)).epsilon(1e-9));
  }
  {
    // co-located user: distance clamps to 1 m instead of diverging
    Scenario s(ScenarioKind::kSingleCell, {{0.0, 0.0, true}},
               {{0.0, 0.0, 0.0, -1, -1}}, radio, table, 256, 1);
    CHECK(std::isfinite(s.sinr_db(0)));
  }
}

TEST_CASE("erasure curve: midpoint, saturation, monotonicity") {
  const McsEntry mcs{"m", 1.0, 4.0, 2.0};
  CHECK(erasure_from_sinr(4.0, mcs) == doctest::Approx(0.5));
  CHECK(erasure_from_sinr(4.0 + 10.0 * 2.0, mcs) <= 0.01);
  CHECK(erasure_from_sinr(4.0 - 10.0 * 2.0, mcs) >= 0.99);
  CHECK(erasure_from_sinr(1000.0, mcs) >= 0.0);
  CHECK(erasure_from_sinr(-1000.0, mcs) <= 1.0);
}

TEST_CASE("erasure profile rows are monotone in MCS and distance") {
  const Scenario s = build_single_cell(40, 290.0, 10.0, default_radio(),
                                       small_table(), 256, 4);
  const ErasureProfile profile = erasure_profile(s);
  CHECK(profile.num_users() == 40);
  CHECK(profile.num_mcs() == 3);
  for (int u = 0; u < profile.num_users(); ++u) {
    for (int m = 2; m <= profile.num_mcs(); ++m)
      CHECK(profile.at(u, m) >= profile.at(u, m - 1));
  }
  // farther users fare no better, for every MCS
  for (int m = 1; m <= profile.num_mcs(); ++m) {
    for (int u = 1; u < profile.num_users(); ++u)
      CHECK(profile.at(u, m) >= profile.at(u - 1, m));
  }
}

TEST_CASE("erasure profile type validates its invariants") {
  CHECK_THROWS_AS(ErasureProfile({}), std::invalid_argument);
  CHECK_THROWS_AS(ErasureProfile({{0.5, 0.4}}), std::invalid_argument);
  CHECK_THROWS_AS(ErasureProfile({{0.5, 1.4}}), std::invalid_argument);
  const ErasureProfile ok({{0.1, 0.5}, {0.2, 0.2}});
  CHECK(ok.at(1, 2) == 0.2);
  CHECK_THROWS_AS(ok.at(0, 3), std::out_of_range);
}

TEST_CASE("scenario generation is deterministic") {
  const Scenario a = build_sfn(50, 1200.0, default_radio(), small_table(), 256, 4);
  const Scenario b = build_sfn(50, 1200.0, default_radio(), small_table(), 256, 4);
  for (int u = 0; u < a.num_users(); ++u) CHECK(a.sinr_db(u) == b.sinr_db(u));

  RadioParams shadowed = default_radio();
  shadowed.shadowing.enabled = true;
  shadowed.shadowing.seed = 5;
  const Scenario c = build_sfn(50, 1200.0, shadowed, small_table(), 256, 4);
  const Scenario d = build_sfn(50, 1200.0, shadowed, small_table(), 256, 4);
  bool differs_from_unshadowed = false;
  for (int u = 0; u < c.num_users(); ++u) {
    CHECK(c.sinr_db(u) == d.sinr_db(u));
    if (std::abs(c.sinr_db(u) - a.sinr_db(u)) > 1e-9) differs_from_unshadowed = true;
  }
  CHECK(differs_from_unshadowed);
}

TEST_CASE("bundled default configs load and validate") {
  const ExperimentConfig sc = load_config(std::string(EWMCAST_CONFIG_DIR) +
                                          "/single_cell.default.json");
  CHECK(sc.scenario.type == "single_cell");
  CHECK(sc.scenario.num_users == 80);
  CHECK(sc.message.layer_sizes.size() == 4);
  CHECK(sc.scenario.mcs.size() == 15);
  const Scenario s = sc.build_scenario();
  CHECK(s.num_serving() == 1);
  CHECK(s.to_json().contains("users"));

  const ExperimentConfig sfn = load_config(std::string(EWMCAST_CONFIG_DIR) +
                                           "/sfn.default.json");
  CHECK(sfn.scenario.type == "sfn");
  CHECK(sfn.scenario.num_users == 1700);
  CHECK(sfn.build_scenario().num_serving() == 4);
}

TEST_CASE("config parsing reports the offending field") {
  nlohmann::json j = load_config(std::string(EWMCAST_CONFIG_DIR) +
                                 "/single_cell.default.json")
                         .to_json();
  j["sla"]["q_hat"] = 1.5;
  CHECK_THROWS_WITH_AS(parse_config(j), "sla.q_hat: must be in (0, 1]", ConfigError);
  j["sla"].erase("q_hat");
  CHECK_THROWS_WITH_AS(parse_config(j), "sla.q_hat: missing required field", ConfigError);
  j["sla"]["q_hat"] = 0.95;
  j["scenario"]["mcs"][3]["sinr_threshold_db"] = -100.0;
  CHECK_THROWS_AS(parse_config(j), ConfigError);
}

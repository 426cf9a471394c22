#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace ewmcast {

// One modulation-and-coding scheme. Higher index means higher rate and a
// higher SINR threshold; the packet-erasure curve is a logistic in SINR dB.
struct McsEntry {
  std::string name;
  double spectral_efficiency = 0.0;  // bits/symbol, informational
  double sinr_threshold_db = 0.0;
  double transition_width_db = 1.0;
};

// Ordered MCS list, indexed m = 1..size(). Thresholds strictly increasing.
class McsTable {
 public:
  explicit McsTable(std::vector<McsEntry> entries);

  int size() const { return static_cast<int>(entries_.size()); }
  const McsEntry& entry(int m) const;  // 1-based
  const std::vector<McsEntry>& entries() const { return entries_; }

 private:
  std::vector<McsEntry> entries_;
};

struct ShadowingParams {
  bool enabled = false;
  double sigma_db = 8.0;
  std::uint64_t seed = 1;
};

struct RadioParams {
  double isd_m = 500.0;
  double tx_power_dbm = 46.0;
  double noise_dbm = -104.5;
  double pathloss_a = 128.1;  // PL(dB) = a + b*log10(d_km), d clamped to 1 m
  double pathloss_b = 37.6;
  ShadowingParams shadowing;
};

struct Station {
  double x = 0.0;
  double y = 0.0;
  bool serving = false;
};

struct UserPlacement {
  double x = 0.0;
  double y = 0.0;
  double distance_m = 0.0;  // from the serving reference point
  int grid_row = -1;        // SFN grid coordinates, -1 for radial layouts
  int grid_col = -1;
};

enum class ScenarioKind { kSingleCell, kSfn };

// Base-station geometry plus user placement; all reception quantities are
// derived deterministically from the parameters (shadowing, when enabled,
// is seeded).
class Scenario {
 public:
  Scenario(ScenarioKind kind, std::vector<Station> stations,
           std::vector<UserPlacement> users, RadioParams radio, McsTable mcs,
           int field_size, int num_subchannels);

  ScenarioKind kind() const { return kind_; }
  int num_users() const { return static_cast<int>(users_.size()); }
  int num_stations() const { return static_cast<int>(stations_.size()); }
  int num_serving() const;
  const std::vector<Station>& stations() const { return stations_; }
  const UserPlacement& user(int u) const;
  const McsTable& mcs() const { return mcs_; }
  const RadioParams& radio() const { return radio_; }
  int field_size() const { return field_size_; }
  int num_subchannels() const { return num_subchannels_; }

  // Linear-scale SINR: sum of serving received powers over noise plus the
  // sum of interfering received powers. Distances are clamped to 1 m.
  double sinr(int u) const;
  double sinr_db(int u) const;

  nlohmann::json to_json() const;

 private:
  double rx_power_mw(const Station& s, int u) const;

  ScenarioKind kind_;
  std::vector<Station> stations_;
  std::vector<UserPlacement> users_;
  RadioParams radio_;
  McsTable mcs_;
  int field_size_;
  int num_subchannels_;
};

// Per-user, per-MCS packet erasure probabilities; rows non-decreasing in m.
class ErasureProfile {
 public:
  explicit ErasureProfile(std::vector<std::vector<double>> p);

  int num_users() const { return static_cast<int>(p_.size()); }
  int num_mcs() const { return p_.empty() ? 0 : static_cast<int>(p_.front().size()); }
  double at(int u, int m) const;  // m 1-based

 private:
  std::vector<std::vector<double>> p_;
};

// 19-station hexagonal layout: the centre station serves, two concentric
// rings (6 + 12) interfere. Users sit on the symmetry axis of a cell
// sector, mid-point spaced between min_distance_m and cell_radius_m.
Scenario build_single_cell(int num_users, double cell_radius_m,
                           double min_distance_m, const RadioParams& radio,
                           McsTable mcs, int field_size, int num_subchannels);

// Same 19-station grid with a 4-station serving cluster whose useful powers
// add; users at the vertices of a ceil(sqrt(U)) x ceil(sqrt(U)) square grid
// over the playground, truncated row-major to exactly `grid_users`.
Scenario build_sfn(int grid_users, double playground_m,
                   const RadioParams& radio, McsTable mcs, int field_size,
                   int num_subchannels);

// p[u][m] = 1 - logistic((sinr_db - threshold_m) / width_m), then clamped
// and made non-decreasing along m.
double erasure_from_sinr(double sinr_db, const McsEntry& mcs);
ErasureProfile erasure_profile(const Scenario& scenario);

}  // namespace ewmcast

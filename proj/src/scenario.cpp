#include "ewmcast/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ewmcast/rng.hpp"

namespace ewmcast {

namespace {

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

double standard_normal(SplitMix64& g) {
  // Box-Muller
  double u1 = g.uniform();
  double u2 = g.uniform();
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

// Axial hex coordinates -> planar metres.
struct Axial {
  int q;
  int r;
};

std::vector<Axial> hex_grid_axial(int max_ring) {
  std::vector<Axial> cells;
  cells.push_back({0, 0});
  for (int ring = 1; ring <= max_ring; ++ring) {
    for (int q = -ring; q <= ring; ++q) {
      for (int r = -ring; r <= ring; ++r) {
        const int dist = (std::abs(q) + std::abs(r) + std::abs(q + r)) / 2;
        if (dist == ring) cells.push_back({q, r});
      }
    }
  }
  return cells;
}

std::vector<Station> hex_stations(double isd_m,
                                  const std::vector<Axial>& serving) {
  std::vector<Station> stations;
  for (const Axial& c : hex_grid_axial(2)) {
    Station s;
    s.x = isd_m * (c.q + 0.5 * c.r);
    s.y = isd_m * (std::sqrt(3.0) / 2.0) * c.r;
    s.serving = std::any_of(serving.begin(), serving.end(), [&](const Axial& a) {
      return a.q == c.q && a.r == c.r;
    });
    stations.push_back(s);
  }
  return stations;
}

}  // namespace

McsTable::McsTable(std::vector<McsEntry> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw std::invalid_argument("mcs table: empty");
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].transition_width_db <= 0.0)
      throw std::invalid_argument("mcs table: transition width must be > 0");
    if (i > 0 && entries_[i].sinr_threshold_db <= entries_[i - 1].sinr_threshold_db)
      throw std::invalid_argument("mcs table: thresholds must be strictly increasing");
  }
}

const McsEntry& McsTable::entry(int m) const {
  if (m < 1 || m > size()) throw std::out_of_range("mcs table: index out of range");
  return entries_[m - 1];
}

Scenario::Scenario(ScenarioKind kind, std::vector<Station> stations,
                   std::vector<UserPlacement> users, RadioParams radio,
                   McsTable mcs, int field_size, int num_subchannels)
    : kind_(kind),
      stations_(std::move(stations)),
      users_(std::move(users)),
      radio_(radio),
      mcs_(std::move(mcs)),
      field_size_(field_size),
      num_subchannels_(num_subchannels) {
  if (num_serving() < 1)
    throw std::invalid_argument("scenario: at least one serving station required");
  if (users_.empty()) throw std::invalid_argument("scenario: no users");
  if (field_size_ != 2 && field_size_ != 256)
    throw std::invalid_argument("scenario: field size must be 2 or 256");
  if (num_subchannels_ < 1)
    throw std::invalid_argument("scenario: at least one subchannel required");
}

int Scenario::num_serving() const {
  return static_cast<int>(
      std::count_if(stations_.begin(), stations_.end(),
                    [](const Station& s) { return s.serving; }));
}

const UserPlacement& Scenario::user(int u) const {
  if (u < 0 || u >= num_users())
    throw std::out_of_range("scenario: user index out of range");
  return users_[u];
}

double Scenario::rx_power_mw(const Station& s, int u) const {
  const UserPlacement& p = users_[u];
  double d_m = std::hypot(s.x - p.x, s.y - p.y);
  if (d_m < 1.0) d_m = 1.0;  // co-located user: clamp
  double loss_db =
      radio_.pathloss_a + radio_.pathloss_b * std::log10(d_m / 1000.0);
  if (radio_.shadowing.enabled) {
    const std::size_t station_idx = static_cast<std::size_t>(&s - stations_.data());
    SplitMix64 g(derive_seed(derive_seed(radio_.shadowing.seed, station_idx),
                             static_cast<std::uint64_t>(u)));
    loss_db += radio_.shadowing.sigma_db * standard_normal(g);
  }
  return dbm_to_mw(radio_.tx_power_dbm - loss_db);
}

double Scenario::sinr(int u) const {
  if (u < 0 || u >= num_users())
    throw std::out_of_range("scenario: user index out of range");
  double useful = 0.0;
  double interference = 0.0;
  for (const Station& s : stations_)
    (s.serving ? useful : interference) += rx_power_mw(s, u);
  return useful / (dbm_to_mw(radio_.noise_dbm) + interference);
}

double Scenario::sinr_db(int u) const { return 10.0 * std::log10(sinr(u)); }

nlohmann::json Scenario::to_json() const {
  nlohmann::json j;
  j["kind"] = kind_ == ScenarioKind::kSingleCell ? "single_cell" : "sfn";
  j["stations"] = nlohmann::json::array();
  for (const Station& s : stations_)
    j["stations"].push_back({{"x_m", s.x}, {"y_m", s.y}, {"serving", s.serving}});
  j["users"] = nlohmann::json::array();
  for (int u = 0; u < num_users(); ++u) {
    const UserPlacement& p = users_[u];
    nlohmann::json ju{{"x_m", p.x}, {"y_m", p.y}, {"distance_m", p.distance_m}};
    if (p.grid_row >= 0) {
      ju["grid_row"] = p.grid_row;
      ju["grid_col"] = p.grid_col;
    }
    ju["sinr_db"] = sinr_db(u);
    j["users"].push_back(ju);
  }
  j["field_size"] = field_size_;
  j["num_subchannels"] = num_subchannels_;
  return j;
}

ErasureProfile::ErasureProfile(std::vector<std::vector<double>> p)
    : p_(std::move(p)) {
  if (p_.empty() || p_.front().empty())
    throw std::invalid_argument("erasure profile: empty matrix");
  const std::size_t m = p_.front().size();
  for (const auto& row : p_) {
    if (row.size() != m)
      throw std::invalid_argument("erasure profile: ragged matrix");
    for (std::size_t i = 0; i < m; ++i) {
      if (!(row[i] >= 0.0 && row[i] <= 1.0))
        throw std::invalid_argument("erasure profile: entry outside [0, 1]");
      if (i > 0 && row[i] < row[i - 1])
        throw std::invalid_argument("erasure profile: rows must be non-decreasing in m");
    }
  }
}

double ErasureProfile::at(int u, int m) const {
  if (u < 0 || u >= num_users())
    throw std::out_of_range("erasure profile: user index out of range");
  if (m < 1 || m > num_mcs())
    throw std::out_of_range("erasure profile: mcs index out of range");
  return p_[u][m - 1];
}

Scenario build_single_cell(int num_users, double cell_radius_m,
                           double min_distance_m, const RadioParams& radio,
                           McsTable mcs, int field_size, int num_subchannels) {
  if (num_users < 1)
    throw std::invalid_argument("single cell: at least one user required");
  if (cell_radius_m <= 0.0)
    throw std::invalid_argument("single cell: cell radius must be > 0");
  if (min_distance_m <= 0.0 || min_distance_m >= cell_radius_m)
    throw std::invalid_argument("single cell: min distance must be in (0, radius)");

  std::vector<Station> stations = hex_stations(radio.isd_m, {{0, 0}});

  // Sector symmetry axis at 30 degrees, between the two nearest ring-1
  // neighbours; users mid-point spaced so a single user sits at the middle
  // of the radial span.
  const double angle = std::numbers::pi / 6.0;
  std::vector<UserPlacement> users;
  users.reserve(static_cast<std::size_t>(num_users));
  const double span = cell_radius_m - min_distance_m;
  for (int i = 0; i < num_users; ++i) {
    const double d = min_distance_m + (i + 0.5) * span / num_users;
    UserPlacement p;
    p.x = d * std::cos(angle);
    p.y = d * std::sin(angle);
    p.distance_m = d;
    users.push_back(p);
  }
  return Scenario(ScenarioKind::kSingleCell, std::move(stations), std::move(users),
                  radio, std::move(mcs), field_size, num_subchannels);
}

Scenario build_sfn(int grid_users, double playground_m,
                   const RadioParams& radio, McsTable mcs, int field_size,
                   int num_subchannels) {
  if (grid_users < 1)
    throw std::invalid_argument("sfn: at least one user required");
  if (playground_m <= 0.0)
    throw std::invalid_argument("sfn: playground side must be > 0");

  const std::vector<Axial> serving = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  std::vector<Station> stations = hex_stations(radio.isd_m, serving);

  double cx = 0.0;
  double cy = 0.0;
  int n_serv = 0;
  for (const Station& s : stations) {
    if (s.serving) {
      cx += s.x;
      cy += s.y;
      ++n_serv;
    }
  }
  cx /= n_serv;
  cy /= n_serv;

  const int side = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(grid_users))));
  std::vector<UserPlacement> users;
  users.reserve(static_cast<std::size_t>(grid_users));
  for (int row = 0; row < side && static_cast<int>(users.size()) < grid_users; ++row) {
    for (int col = 0; col < side && static_cast<int>(users.size()) < grid_users; ++col) {
      UserPlacement p;
      p.grid_row = row;
      p.grid_col = col;
      if (side == 1) {
        p.x = cx;
        p.y = cy;
      } else {
        p.x = cx - playground_m / 2.0 + col * playground_m / (side - 1);
        p.y = cy - playground_m / 2.0 + row * playground_m / (side - 1);
      }
      p.distance_m = std::hypot(p.x - cx, p.y - cy);
      users.push_back(p);
    }
  }
  return Scenario(ScenarioKind::kSfn, std::move(stations), std::move(users),
                  radio, std::move(mcs), field_size, num_subchannels);
}

double erasure_from_sinr(double sinr_db, const McsEntry& mcs) {
  const double z = (sinr_db - mcs.sinr_threshold_db) / mcs.transition_width_db;
  const double p = 1.0 / (1.0 + std::exp(z));
  return std::clamp(p, 0.0, 1.0);
}

ErasureProfile erasure_profile(const Scenario& scenario) {
  const McsTable& table = scenario.mcs();
  std::vector<std::vector<double>> p(
      static_cast<std::size_t>(scenario.num_users()),
      std::vector<double>(static_cast<std::size_t>(table.size())));
  for (int u = 0; u < scenario.num_users(); ++u) {
    const double s_db = scenario.sinr_db(u);
    double prev = 0.0;
    for (int m = 1; m <= table.size(); ++m) {
      double pe = erasure_from_sinr(s_db, table.entry(m));
      pe = std::max(pe, prev);  // keep rows non-decreasing in m
      p[u][m - 1] = pe;
      prev = pe;
    }
  }
  return ErasureProfile(std::move(p));
}

}  // namespace ewmcast

#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace ewmcast {

// Layered source message: layer ell holds layer_size(ell) source packets,
// expanding window ell spans the first window_size(ell) packets.
// Layers and windows are indexed 1..num_layers().
class LayeredMessage {
 public:
  explicit LayeredMessage(std::vector<int> layer_sizes);

  int num_layers() const { return static_cast<int>(layer_sizes_.size()); }
  int layer_size(int ell) const;
  int window_size(int ell) const;
  int total_packets() const { return window_sizes_.back(); }
  const std::vector<int>& layer_sizes() const { return layer_sizes_; }

 private:
  std::vector<int> layer_sizes_;
  std::vector<int> window_sizes_;
};

// QoS indicator row for one user: delta_ell = 1 iff any window i >= ell
// is decodable with probability at least q_hat. The result is monotone
// non-increasing in ell. Ties at exactly q_hat count as success.
std::vector<std::uint8_t> qos_indicator(std::span<const double> window_probs,
                                        double q_hat);

// U x L matrix of per-user QoS indicators; rows are monotone
// non-increasing in the level index.
class QosMatrix {
 public:
  QosMatrix() = default;
  QosMatrix(int num_users, int num_levels);

  void set_row(int user, std::span<const std::uint8_t> row);
  std::uint8_t at(int user, int level) const;  // level is 1-based
  int num_users() const { return users_; }
  int num_levels() const { return levels_; }

  // Number of users at QoS level `level` or better.
  int level_count(int level) const;
  // Highest consecutive level reached by `user` (0 if none).
  int user_level(int user) const;

 private:
  int users_ = 0;
  int levels_ = 0;
  std::vector<std::uint8_t> delta_;
};

}  // namespace ewmcast

#include "ewmcast/service_model.hpp"

#include <stdexcept>

namespace ewmcast {

LayeredMessage::LayeredMessage(std::vector<int> layer_sizes)
    : layer_sizes_(std::move(layer_sizes)) {
  if (layer_sizes_.empty())
    throw std::invalid_argument("message: at least one layer required");
  window_sizes_.reserve(layer_sizes_.size());
  int total = 0;
  for (int k : layer_sizes_) {
    if (k < 1) throw std::invalid_argument("message: layer sizes must be >= 1");
    total += k;
    window_sizes_.push_back(total);
  }
}

int LayeredMessage::layer_size(int ell) const {
  if (ell < 1 || ell > num_layers())
    throw std::out_of_range("message: layer index out of range");
  return layer_sizes_[ell - 1];
}

int LayeredMessage::window_size(int ell) const {
  if (ell < 1 || ell > num_layers())
    throw std::out_of_range("message: window index out of range");
  return window_sizes_[ell - 1];
}

std::vector<std::uint8_t> qos_indicator(std::span<const double> window_probs,
                                        double q_hat) {
  if (!(q_hat > 0.0 && q_hat <= 1.0))
    throw std::invalid_argument("qos_indicator: q_hat must be in (0, 1]");
  for (double p : window_probs) {
    if (!(p >= 0.0 && p <= 1.0))
      throw std::invalid_argument("qos_indicator: probability outside [0, 1]");
  }
  const int n = static_cast<int>(window_probs.size());
  std::vector<std::uint8_t> delta(static_cast<std::size_t>(n), 0);
  double suffix_max = 0.0;
  for (int ell = n; ell >= 1; --ell) {
    if (window_probs[ell - 1] > suffix_max) suffix_max = window_probs[ell - 1];
    delta[ell - 1] = suffix_max >= q_hat ? 1 : 0;
  }
  return delta;
}

QosMatrix::QosMatrix(int num_users, int num_levels)
    : users_(num_users), levels_(num_levels) {
  if (num_users < 1 || num_levels < 1)
    throw std::invalid_argument("qos matrix: empty dimensions");
  delta_.assign(static_cast<std::size_t>(users_) * levels_, 0);
}

void QosMatrix::set_row(int user, std::span<const std::uint8_t> row) {
  if (user < 0 || user >= users_)
    throw std::out_of_range("qos matrix: user index out of range");
  if (static_cast<int>(row.size()) != levels_)
    throw std::invalid_argument("qos matrix: row length mismatch");
  for (int i = 0; i + 1 < levels_; ++i) {
    if (row[i] < row[i + 1])
      throw std::invalid_argument("qos matrix: row must be non-increasing");
  }
  for (int i = 0; i < levels_; ++i)
    delta_[static_cast<std::size_t>(user) * levels_ + i] = row[i] ? 1 : 0;
}

std::uint8_t QosMatrix::at(int user, int level) const {
  if (user < 0 || user >= users_)
    throw std::out_of_range("qos matrix: user index out of range");
  if (level < 1 || level > levels_)
    throw std::out_of_range("qos matrix: level index out of range");
  return delta_[static_cast<std::size_t>(user) * levels_ + (level - 1)];
}

int QosMatrix::level_count(int level) const {
  int count = 0;
  for (int u = 0; u < users_; ++u) count += at(u, level);
  return count;
}

int QosMatrix::user_level(int user) const {
  int level = 0;
  while (level < levels_ && at(user, level + 1)) ++level;
  return level;
}

}  // namespace ewmcast

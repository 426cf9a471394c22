#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace ewmcast {

// Finite-field order; GF(2) and GF(256) are supported.
class FieldSize {
 public:
  explicit FieldSize(int q);
  int value() const { return q_; }

 private:
  int q_;
};

// One expanding window as seen by a single user: the nested subspace
// dimension, the transmission budget and the per-packet erasure
// probability under the MCS carrying this window.
struct WindowSpec {
  int window_size = 0;
  int budget = 0;
  double erasure = 0.0;
};

// Windows ordered 1..i with non-decreasing sizes.
using TransmissionPlan = std::vector<WindowSpec>;

void validate_plan(const TransmissionPlan& plan);

// Probability that `received` uniform random vectors from GF(q)^K span
// GF(q)^K: prod_{j=0}^{K-1} (1 - q^(j-received)). Zero when received < K,
// one when K = 0.
double full_rank_prob(int window_size, int received, FieldSize q);

// Distribution of the accumulated decoding rank while packets of nested
// windows are processed in window order. A received window-j packet lifts
// the rank d -> d+1 with probability 1 - q^(d - K_j), since it falls inside
// the current d-dimensional span with probability q^(d - K_j).
class RankDistribution {
 public:
  explicit RankDistribution(FieldSize q);

  void advance(const WindowSpec& window);

  // P[rank == current window size]; 1.0 before any window is processed.
  double full_rank_probability() const;
  int current_dim() const { return current_dim_; }

 private:
  int q_;
  int current_dim_ = 0;
  std::vector<double> prob_;  // prob_[d] = P[rank == d]
};

// P_{u,i}: probability that the packets received from windows 1..i contain
// K_i linearly independent combinations. Exact up to double rounding,
// O(sum N_j * K_i); the recursion only adds and multiplies values in
// [0, 1], keeping the accumulated error below 1e-10 for budgets up to
// 10^4 packets.
double window_decoding_prob(const TransmissionPlan& plan, FieldSize q);

// Prefix probabilities P_{u,1}..P_{u,i} from a single pass over the plan.
std::vector<double> window_decoding_profile(const TransmissionPlan& plan,
                                            FieldSize q);

struct OracleEstimate {
  double probability = 0.0;
  double half_width = 0.0;  // 99% normal-approximation half-width
  long trials = 0;
};

// Brute-force verification oracle: simulates erasures and coefficient draws
// and measures the full-rank fraction by Gaussian elimination. Deterministic
// given the seed; trials use independent per-trial sub-streams.
OracleEstimate mc_decoding_oracle(const TransmissionPlan& plan, FieldSize q,
                                  long trials, std::uint64_t seed);

}  // namespace ewmcast

#include "ewmcast/decoding_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ewmcast/gf.hpp"
#include "ewmcast/rng.hpp"

namespace ewmcast {

FieldSize::FieldSize(int q) : q_(q) {
  if (q != 2 && q != 256)
    throw std::invalid_argument("field size: q must be 2 or 256");
}

void validate_plan(const TransmissionPlan& plan) {
  int prev = 0;
  for (const auto& w : plan) {
    if (w.window_size < prev)
      throw std::invalid_argument("plan: window sizes must be non-decreasing");
    if (w.window_size < 0 || w.budget < 0)
      throw std::invalid_argument("plan: negative window size or budget");
    if (!(w.erasure >= 0.0 && w.erasure <= 1.0))
      throw std::invalid_argument("plan: erasure probability outside [0, 1]");
    prev = w.window_size;
  }
}

double full_rank_prob(int window_size, int received, FieldSize q) {
  if (window_size < 0 || received < 0)
    throw std::invalid_argument("full_rank_prob: negative arguments");
  if (window_size == 0) return 1.0;
  if (received < window_size) return 0.0;
  double prob = 1.0;
  for (int j = 0; j < window_size; ++j)
    prob *= 1.0 - std::pow(static_cast<double>(q.value()), j - received);
  return prob;
}

RankDistribution::RankDistribution(FieldSize q) : q_(q.value()), prob_(1, 1.0) {}

void RankDistribution::advance(const WindowSpec& window) {
  if (window.window_size < current_dim_)
    throw std::invalid_argument("plan: window sizes must be non-decreasing");
  const int dim = window.window_size;
  current_dim_ = dim;
  prob_.resize(static_cast<std::size_t>(dim) + 1, 0.0);

  // q^(d - dim) for d = 0..dim
  std::vector<double> in_span(static_cast<std::size_t>(dim) + 1);
  for (int d = 0; d <= dim; ++d)
    in_span[d] = std::pow(static_cast<double>(q_), d - dim);

  const double recv = 1.0 - window.erasure;
  for (int n = 0; n < window.budget; ++n) {
    for (int d = dim; d >= 1; --d) {
      const double stay = window.erasure + recv * in_span[d];
      const double up = recv * (1.0 - in_span[d - 1]);
      prob_[d] = prob_[d] * stay + prob_[d - 1] * up;
    }
    prob_[0] *= window.erasure + recv * in_span[0];
  }
}

double RankDistribution::full_rank_probability() const {
  // accumulated rounding can land marginally outside [0, 1]
  return std::clamp(prob_[current_dim_], 0.0, 1.0);
}

double window_decoding_prob(const TransmissionPlan& plan, FieldSize q) {
  validate_plan(plan);
  RankDistribution dist(q);
  for (const auto& w : plan) dist.advance(w);
  return dist.full_rank_probability();
}

std::vector<double> window_decoding_profile(const TransmissionPlan& plan,
                                            FieldSize q) {
  validate_plan(plan);
  std::vector<double> probs;
  probs.reserve(plan.size());
  RankDistribution dist(q);
  for (const auto& w : plan) {
    dist.advance(w);
    probs.push_back(dist.full_rank_probability());
  }
  return probs;
}

OracleEstimate mc_decoding_oracle(const TransmissionPlan& plan, FieldSize q,
                                  long trials, std::uint64_t seed) {
  validate_plan(plan);
  if (trials < 1) throw std::invalid_argument("oracle: trials must be >= 1");
  const int target = plan.empty() ? 0 : plan.back().window_size;

  gf::RankAccumulator acc(q.value(), target);
  std::vector<std::uint64_t> word_buf(static_cast<std::size_t>((target + 63) / 64));
  std::vector<std::uint8_t> byte_buf(static_cast<std::size_t>(target));

  long successes = 0;
  for (long t = 0; t < trials; ++t) {
    acc.reset();
    SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    for (const auto& w : plan) {
      if (acc.rank() == target) break;
      for (int n = 0; n < w.budget; ++n) {
        if (rng.uniform() < w.erasure) continue;  // erased
        if (q.value() == 2) {
          for (auto& word : word_buf) word = 0;
          const int words = (w.window_size + 63) / 64;
          for (int i = 0; i < words; ++i) word_buf[i] = rng.next();
          if (w.window_size % 64)
            word_buf[words - 1] &= (std::uint64_t{1} << (w.window_size % 64)) - 1;
          acc.insert_words(word_buf);
        } else {
          std::uint64_t bits = 0;
          int avail = 0;
          for (int i = 0; i < target; ++i) {
            if (i < w.window_size) {
              if (avail == 0) {
                bits = rng.next();
                avail = 8;
              }
              byte_buf[i] = static_cast<std::uint8_t>(bits & 0xff);
              bits >>= 8;
              --avail;
            } else {
              byte_buf[i] = 0;
            }
          }
          acc.insert(byte_buf);
        }
        if (acc.rank() == target) break;
      }
    }
    if (acc.rank() == target) ++successes;
  }

  OracleEstimate est;
  est.trials = trials;
  est.probability = static_cast<double>(successes) / static_cast<double>(trials);
  const double z99 = 2.5758293035489004;
  est.half_width =
      z99 * std::sqrt(est.probability * (1.0 - est.probability) /
                      static_cast<double>(trials));
  return est;
}

}  // namespace ewmcast

#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "json.hpp"

#include "ewmcast/decoding_model.hpp"
#include "ewmcast/optimizer.hpp"
#include "ewmcast/rng.hpp"

namespace ewmcast {

// One coded packet of an expanding window: the coefficient vector of the
// random linear combination, supported on the first K_window source
// packets. Payload symbols are never materialised.
struct CodedPacket {
  int window = 0;                          // 1-based window index
  std::vector<std::uint8_t> coefficients;  // length K_window, entries in [0, q)
};

// Draws uniform coefficients (zero vectors included) into `packet`,
// resizing it for the given window.
void draw_coded_packet(CodedPacket& packet, int window, int window_size,
                       FieldSize q, SplitMix64& rng);

// Packet-level Monte Carlo results. Per user and window i,
// window_decode_freq is the fraction of trials in which the packets
// received from windows 1..i reached rank K_i; level_freq is the fraction
// in which ANY window i >= ell was decodable (the trial-level disjunction,
// which is at least max_{i>=ell} P_{u,i} because the events are positively
// correlated). The analytical P_{u,i} is carried alongside for comparison.
struct SimulationReport {
  long trials = 0;
  std::uint64_t seed = 0;
  std::vector<std::vector<double>> window_decode_freq;  // U x L
  std::vector<std::vector<double>> level_freq;          // U x L
  std::vector<std::vector<double>> analytical;          // U x L

  nlohmann::json to_json() const;
  void write_csv(std::ostream& out) const;
};

// Encodes expanding-window RLNC coefficient vectors, applies per-user
// erasures and decodes by Gaussian elimination. Payload symbols are not
// simulated; decodability only depends on the coefficient ranks.
// Bit-identical for equal (seed, trials, policy, profile): every
// (user, trial, window) tuple draws from its own derived sub-stream.
SimulationReport run_simulation(const AllocationPolicy& policy,
                                const LayeredMessage& msg,
                                const ErasureProfile& profile, FieldSize q,
                                long trials, std::uint64_t seed);

}  // namespace ewmcast

#include "ewmcast/packet_sim.hpp"

#include <ostream>
#include <stdexcept>

#include "ewmcast/gf.hpp"
#include "ewmcast/rng.hpp"

namespace ewmcast {

void draw_coded_packet(CodedPacket& packet, int window, int window_size,
                       FieldSize q, SplitMix64& rng) {
  if (window < 1 || window_size < 0)
    throw std::invalid_argument("coded packet: bad window");
  packet.window = window;
  packet.coefficients.resize(static_cast<std::size_t>(window_size));
  std::uint64_t bits = 0;
  int avail = 0;
  for (int i = 0; i < window_size; ++i) {
    if (avail == 0) {
      bits = rng.next();
      avail = 64;
    }
    if (q.value() == 2) {
      packet.coefficients[i] = static_cast<std::uint8_t>(bits & 1);
      bits >>= 1;
      avail -= 1;
    } else {
      packet.coefficients[i] = static_cast<std::uint8_t>(bits & 0xff);
      bits >>= 8;
      avail -= 8;
    }
  }
}

SimulationReport run_simulation(const AllocationPolicy& policy,
                                const LayeredMessage& msg,
                                const ErasureProfile& profile, FieldSize q,
                                long trials, std::uint64_t seed) {
  const int L = msg.num_layers();
  const int U = profile.num_users();
  if (static_cast<int>(policy.mcs.size()) != L ||
      static_cast<int>(policy.budget.size()) != L)
    throw std::invalid_argument("simulation: policy dimension mismatch");
  for (int ell = 1; ell <= L; ++ell) {
    if (policy.mcs[ell - 1] < 1 || policy.mcs[ell - 1] > profile.num_mcs())
      throw std::invalid_argument("simulation: MCS index out of range");
    if (policy.budget[ell - 1] < 0)
      throw std::invalid_argument("simulation: negative budget");
  }
  if (trials < 1) throw std::invalid_argument("simulation: trials must be >= 1");

  const int K = msg.total_packets();
  SimulationReport report;
  report.trials = trials;
  report.seed = seed;
  report.window_decode_freq.assign(static_cast<std::size_t>(U),
                                   std::vector<double>(static_cast<std::size_t>(L), 0.0));
  report.level_freq = report.window_decode_freq;
  report.analytical = report.window_decode_freq;

  gf::RankAccumulator acc(q.value(), K);
  CodedPacket packet;
  std::vector<std::uint8_t> byte_buf(static_cast<std::size_t>(K));
  std::vector<std::uint8_t> decodable(static_cast<std::size_t>(L));

  for (int u = 0; u < U; ++u) {
    TransmissionPlan plan;
    for (int ell = 1; ell <= L; ++ell)
      plan.push_back({msg.window_size(ell), policy.budget[ell - 1],
                      profile.at(u, policy.mcs[ell - 1])});
    const std::vector<double> analytical = window_decoding_profile(plan, q);
    for (int ell = 0; ell < L; ++ell) report.analytical[u][ell] = analytical[ell];

    std::vector<long> window_hits(static_cast<std::size_t>(L), 0);
    std::vector<long> level_hits(static_cast<std::size_t>(L), 0);
    const std::uint64_t user_seed = derive_seed(seed, static_cast<std::uint64_t>(u));

    for (long t = 0; t < trials; ++t) {
      acc.reset();
      const std::uint64_t trial_seed =
          derive_seed(user_seed, static_cast<std::uint64_t>(t));
      for (int ell = 1; ell <= L; ++ell) {
        const WindowSpec& w = plan[ell - 1];
        SplitMix64 rng(derive_seed(trial_seed, static_cast<std::uint64_t>(ell)));
        for (int n = 0; n < w.budget; ++n) {
          // once the window span is saturated, further packets of this
          // window cannot change any rank
          if (acc.rank() == w.window_size) break;
          if (rng.uniform() < w.erasure) continue;
          draw_coded_packet(packet, ell, w.window_size, q, rng);
          for (int i = 0; i < K; ++i)
            byte_buf[i] = i < w.window_size ? packet.coefficients[i] : 0;
          acc.insert(byte_buf);
        }
        decodable[ell - 1] = acc.rank() == w.window_size ? 1 : 0;
      }
      bool any = false;
      for (int ell = L; ell >= 1; --ell) {
        if (decodable[ell - 1]) {
          window_hits[ell - 1] += 1;
          any = true;
        }
        if (any) level_hits[ell - 1] += 1;
      }
    }
    for (int ell = 0; ell < L; ++ell) {
      report.window_decode_freq[u][ell] =
          static_cast<double>(window_hits[ell]) / static_cast<double>(trials);
      report.level_freq[u][ell] =
          static_cast<double>(level_hits[ell]) / static_cast<double>(trials);
    }
  }
  return report;
}

nlohmann::json SimulationReport::to_json() const {
  nlohmann::json j;
  j["trials"] = trials;
  j["seed"] = seed;
  j["window_decode_freq"] = window_decode_freq;
  j["level_freq"] = level_freq;
  j["analytical"] = analytical;
  return j;
}

void SimulationReport::write_csv(std::ostream& out) const {
  const std::size_t L = window_decode_freq.empty() ? 0 : window_decode_freq.front().size();
  out << "user";
  for (std::size_t i = 1; i <= L; ++i) out << ",analytical_win_" << i;
  for (std::size_t i = 1; i <= L; ++i) out << ",empirical_win_" << i;
  for (std::size_t i = 1; i <= L; ++i) out << ",empirical_level_" << i;
  out << "\n";
  for (std::size_t u = 0; u < window_decode_freq.size(); ++u) {
    out << u;
    for (std::size_t i = 0; i < L; ++i) out << "," << analytical[u][i];
    for (std::size_t i = 0; i < L; ++i) out << "," << window_decode_freq[u][i];
    for (std::size_t i = 0; i < L; ++i) out << "," << level_freq[u][i];
    out << "\n";
  }
}

}  // namespace ewmcast

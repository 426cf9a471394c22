#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace ewmcast {

// CLI exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitSearchCap = 4;

struct RunOptions {
  std::string command;  // solve-exact | solve-heuristic | solve-mrt | simulate | sweep-distance
  std::string config_path;
  std::string out_dir;
  std::optional<long> trials;
  std::optional<std::uint64_t> seed;
  std::optional<long long> cap;
  std::optional<std::string> policy_path;  // simulate: reuse a stored policy
};

// Runs one experiment command; writes result files into out_dir only on
// success and returns the exit code. Human-readable progress goes to
// stdout, errors to stderr; result files never contain wall-clock data so
// reruns are byte-identical.
int run_experiment(const RunOptions& options);

// 12-significant-digit formatting used for every float written to CSV.
std::string format_sig(double value);

std::string fnv1a_hex(const std::string& data);

}  // namespace ewmcast

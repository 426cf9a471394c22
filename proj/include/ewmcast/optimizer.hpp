#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "ewmcast/decoding_model.hpp"
#include "ewmcast/scenario.hpp"
#include "ewmcast/service_model.hpp"

namespace ewmcast {

// Decision variables: one MCS index and one coded-packet budget per
// expanding window.
struct AllocationPolicy {
  std::vector<int> mcs;     // m_1..m_L, 1-based MCS indices
  std::vector<int> budget;  // N_1..N_L, >= 0
};

struct SlaConstraints {
  double q_hat = 0.95;                  // recovery-probability threshold
  std::vector<double> coverage_targets; // t_1..t_L in [0, 1]
  std::vector<int> budget_caps;         // N-hat_1..N-hat_L, >= 1
};

// A policy together with everything the objective and constraints need.
// `win_probs[u][i-1]` is the model probability behind delta; for RLNC
// policies it is P_{u,i}, for the uncoded baseline the probability that
// layers 1..i all arrive.
struct EvaluatedPolicy {
  AllocationPolicy policy;
  QosMatrix qos;
  std::vector<std::vector<double>> win_probs;
  long long profit = 0;
  long long cost = 0;
  double ratio = 0.0;
  bool feasible = false;
  std::vector<double> level_coverage;  // fraction of users per level
  std::string model = "rlnc";
};

struct InfeasibilityReport {
  std::string reason;
  std::vector<int> unmet_levels;
};

using SolveResult = std::variant<EvaluatedPolicy, InfeasibilityReport>;

// Thrown when the exact search space exceeds the evaluation cap.
class SearchCapExceeded : public std::runtime_error {
 public:
  SearchCapExceeded(double space, long long cap);
  double space;
  long long cap;
};

// exact integer comparison of profit/cost ratios (cost 0 counts as ratio 0)
bool ratio_greater(long long profit_a, long long cost_a, long long profit_b,
                   long long cost_b);

EvaluatedPolicy evaluate(const AllocationPolicy& policy,
                         const LayeredMessage& msg,
                         const ErasureProfile& profile,
                         const SlaConstraints& sla, FieldSize q);

// Exhaustive search over mcs_candidates^L x prod(caps+1) policies.
// Ties break toward lower cost, then the lexicographically smallest
// (m_1..m_L, N_1..N_L). Throws SearchCapExceeded when the space is larger
// than eval_cap.
SolveResult solve_exact(const LayeredMessage& msg, const ErasureProfile& profile,
                        const SlaConstraints& sla, FieldSize q,
                        std::vector<int> mcs_candidates,
                        long long eval_cap = 10'000'000);

// Two-step heuristic: (i) per window, the largest MCS whose level target
// is reachable at full caps; (ii) per level front-to-back, the minimal
// budget meeting the coverage constraint, then greedy single-window
// increments while the profit-cost ratio strictly improves.
SolveResult solve_heuristic(const LayeredMessage& msg,
                            const ErasureProfile& profile,
                            const SlaConstraints& sla, FieldSize q);

// Uncoded multi-rate baseline: each layer's packets are sent exactly once
// (N_ell = k_ell); per-layer MCS picked front-to-back to maximise the
// number of users clearing the layer among those clearing all previous
// ones (ties toward the highest index). Coverage and budget constraints
// are not imposed; the feasibility flag just reports them.
EvaluatedPolicy solve_mrt(const LayeredMessage& msg,
                          const ErasureProfile& profile,
                          const SlaConstraints& sla, double q_hat);

}  // namespace ewmcast

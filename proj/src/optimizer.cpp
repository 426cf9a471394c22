#include "ewmcast/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ewmcast {

namespace {

constexpr double kCountEps = 1e-9;

// smallest integer count satisfying count >= users * target
int required_count(int users, double target) {
  const int needed = static_cast<int>(std::ceil(users * target - kCountEps));
  return std::clamp(needed, 0, users);
}

void check_dimensions(const AllocationPolicy& policy, const LayeredMessage& msg,
                      const ErasureProfile& profile, const SlaConstraints& sla) {
  const std::size_t L = static_cast<std::size_t>(msg.num_layers());
  if (policy.mcs.size() != L || policy.budget.size() != L)
    throw std::invalid_argument("policy: dimension mismatch with message layers");
  if (sla.coverage_targets.size() != L || sla.budget_caps.size() != L)
    throw std::invalid_argument("sla: dimension mismatch with message layers");
  if (!(sla.q_hat > 0.0 && sla.q_hat <= 1.0))
    throw std::invalid_argument("sla: q_hat must be in (0, 1]");
  for (double t : sla.coverage_targets) {
    if (!(t >= 0.0 && t <= 1.0))
      throw std::invalid_argument("sla: coverage target outside [0, 1]");
  }
  for (int cap : sla.budget_caps) {
    if (cap < 1) throw std::invalid_argument("sla: budget caps must be >= 1");
  }
  for (std::size_t i = 0; i < L; ++i) {
    if (policy.mcs[i] < 1 || policy.mcs[i] > profile.num_mcs())
      throw std::invalid_argument("policy: MCS index out of range");
    if (policy.budget[i] < 0)
      throw std::invalid_argument("policy: negative budget");
  }
}

TransmissionPlan user_plan(const AllocationPolicy& policy,
                           const LayeredMessage& msg,
                           const ErasureProfile& profile, int u, int windows) {
  TransmissionPlan plan;
  plan.reserve(static_cast<std::size_t>(windows));
  for (int j = 1; j <= windows; ++j) {
    plan.push_back({msg.window_size(j), policy.budget[j - 1],
                    profile.at(u, policy.mcs[j - 1])});
  }
  return plan;
}

// Count of users whose P_{u,ell} (windows 1..ell only) clears q_hat.
int count_meeting_level(const AllocationPolicy& policy, const LayeredMessage& msg,
                        const ErasureProfile& profile, double q_hat, int ell,
                        FieldSize q) {
  int count = 0;
  for (int u = 0; u < profile.num_users(); ++u) {
    const double p =
        window_decoding_prob(user_plan(policy, msg, profile, u, ell), q);
    if (p >= q_hat) ++count;
  }
  return count;
}

std::vector<int> unmet_coverage_levels(const EvaluatedPolicy& ev,
                                       const SlaConstraints& sla) {
  std::vector<int> unmet;
  const int users = ev.qos.num_users();
  for (int ell = 1; ell <= ev.qos.num_levels(); ++ell) {
    if (ev.qos.level_count(ell) <
        required_count(users, sla.coverage_targets[ell - 1]))
      unmet.push_back(ell);
  }
  return unmet;
}

}  // namespace

SearchCapExceeded::SearchCapExceeded(double space_, long long cap_)
    : std::runtime_error("exact search space of " + std::to_string(space_) +
                         " policies exceeds the cap of " + std::to_string(cap_) +
                         "; use the heuristic or raise the cap"),
      space(space_),
      cap(cap_) {}

bool ratio_greater(long long profit_a, long long cost_a, long long profit_b,
                   long long cost_b) {
  if (cost_a == 0 && cost_b == 0) return false;
  if (cost_a == 0) return false;          // ratio a = 0, ratio b >= 0
  if (cost_b == 0) return profit_a > 0;   // ratio b = 0
  return profit_a * cost_b > profit_b * cost_a;
}

EvaluatedPolicy evaluate(const AllocationPolicy& policy, const LayeredMessage& msg,
                         const ErasureProfile& profile, const SlaConstraints& sla,
                         FieldSize q) {
  check_dimensions(policy, msg, profile, sla);
  const int L = msg.num_layers();
  const int U = profile.num_users();

  EvaluatedPolicy ev{policy, QosMatrix(U, L), {}, 0, 0, 0.0, false, {}, "rlnc"};
  ev.win_probs.reserve(static_cast<std::size_t>(U));
  for (int u = 0; u < U; ++u) {
    std::vector<double> probs =
        window_decoding_profile(user_plan(policy, msg, profile, u, L), q);
    const std::vector<std::uint8_t> delta = qos_indicator(probs, sla.q_hat);
    ev.qos.set_row(u, delta);
    ev.win_probs.push_back(std::move(probs));
  }

  for (int ell = 1; ell <= L; ++ell) ev.profit += ev.qos.level_count(ell);
  ev.cost = std::accumulate(policy.budget.begin(), policy.budget.end(), 0LL);
  ev.ratio = ev.cost > 0 ? static_cast<double>(ev.profit) / static_cast<double>(ev.cost)
                         : 0.0;
  ev.level_coverage.resize(static_cast<std::size_t>(L));
  for (int ell = 1; ell <= L; ++ell)
    ev.level_coverage[ell - 1] =
        static_cast<double>(ev.qos.level_count(ell)) / static_cast<double>(U);

  bool feasible = true;
  for (int ell = 1; ell <= L; ++ell) {
    if (ev.qos.level_count(ell) < required_count(U, sla.coverage_targets[ell - 1]))
      feasible = false;
    if (policy.budget[ell - 1] > sla.budget_caps[ell - 1]) feasible = false;
  }
  ev.feasible = feasible;
  return ev;
}

SolveResult solve_exact(const LayeredMessage& msg, const ErasureProfile& profile,
                        const SlaConstraints& sla, FieldSize q,
                        std::vector<int> mcs_candidates, long long eval_cap) {
  const int L = msg.num_layers();
  {
    AllocationPolicy probe;
    probe.mcs.assign(static_cast<std::size_t>(L), 1);
    probe.budget.assign(static_cast<std::size_t>(L), 0);
    check_dimensions(probe, msg, profile, sla);
  }
  if (mcs_candidates.empty()) {
    mcs_candidates.resize(static_cast<std::size_t>(profile.num_mcs()));
    std::iota(mcs_candidates.begin(), mcs_candidates.end(), 1);
  }
  std::sort(mcs_candidates.begin(), mcs_candidates.end());
  mcs_candidates.erase(std::unique(mcs_candidates.begin(), mcs_candidates.end()),
                       mcs_candidates.end());
  for (int m : mcs_candidates) {
    if (m < 1 || m > profile.num_mcs())
      throw std::invalid_argument("solve_exact: MCS candidate out of range");
  }

  double space = 1.0;
  for (int ell = 0; ell < L; ++ell)
    space *= static_cast<double>(mcs_candidates.size()) *
             (sla.budget_caps[static_cast<std::size_t>(ell)] + 1);
  if (space > static_cast<double>(eval_cap)) throw SearchCapExceeded(space, eval_cap);

  std::optional<EvaluatedPolicy> best;
  AllocationPolicy policy;
  policy.mcs.assign(static_cast<std::size_t>(L), mcs_candidates.front());
  policy.budget.assign(static_cast<std::size_t>(L), 0);

  // lexicographic odometers over (m_1..m_L) then (N_1..N_L); the first
  // policy seen among equal (ratio, cost) wins, which realises the
  // lexicographic tie-break
  std::vector<std::size_t> m_idx(static_cast<std::size_t>(L), 0);
  for (;;) {
    for (int ell = 0; ell < L; ++ell) policy.mcs[ell] = mcs_candidates[m_idx[ell]];
    std::fill(policy.budget.begin(), policy.budget.end(), 0);
    for (;;) {
      EvaluatedPolicy ev = evaluate(policy, msg, profile, sla, q);
      if (ev.feasible) {
        const bool better =
            !best || ratio_greater(ev.profit, ev.cost, best->profit, best->cost) ||
            (!ratio_greater(best->profit, best->cost, ev.profit, ev.cost) &&
             ev.cost < best->cost);
        if (better) best = std::move(ev);
      }
      int pos = L - 1;
      while (pos >= 0 && policy.budget[pos] == sla.budget_caps[pos]) {
        policy.budget[pos] = 0;
        --pos;
      }
      if (pos < 0) break;
      ++policy.budget[pos];
    }
    int pos = L - 1;
    while (pos >= 0 && m_idx[pos] == mcs_candidates.size() - 1) {
      m_idx[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++m_idx[pos];
  }

  if (!best) {
    return InfeasibilityReport{
        "no feasible policy within the MCS candidates and budget caps", {}};
  }
  return *best;
}

SolveResult solve_heuristic(const LayeredMessage& msg, const ErasureProfile& profile,
                            const SlaConstraints& sla, FieldSize q) {
  const int L = msg.num_layers();
  const int U = profile.num_users();
  const int M = profile.num_mcs();
  {
    AllocationPolicy probe;
    probe.mcs.assign(static_cast<std::size_t>(L), 1);
    probe.budget = sla.budget_caps;
    check_dimensions(probe, msg, profile, sla);
  }

  // Step 1: per window, the largest MCS able to reach the level target
  // with every window at its cap.
  AllocationPolicy policy;
  policy.mcs.assign(static_cast<std::size_t>(L), 1);
  policy.budget = sla.budget_caps;
  for (int ell = 1; ell <= L; ++ell) {
    const int needed = required_count(U, sla.coverage_targets[ell - 1]);
    int chosen = 1;
    for (int m = M; m >= 1; --m) {
      policy.mcs[ell - 1] = m;
      if (count_meeting_level(policy, msg, profile, sla.q_hat, ell, q) >= needed) {
        chosen = m;
        break;
      }
    }
    policy.mcs[ell - 1] = chosen;
  }

  // Feasibility certificate: erasure rows are non-decreasing in m and delta
  // is monotone in every budget, so if the all-caps policy fails here and
  // also fails with every window on MCS 1, no policy can satisfy the
  // coverage constraints.
  EvaluatedPolicy at_caps = evaluate(policy, msg, profile, sla, q);
  if (!unmet_coverage_levels(at_caps, sla).empty()) {
    AllocationPolicy lowest = policy;
    std::fill(lowest.mcs.begin(), lowest.mcs.end(), 1);
    EvaluatedPolicy low_ev = evaluate(lowest, msg, profile, sla, q);
    const std::vector<int> unmet = unmet_coverage_levels(low_ev, sla);
    if (!unmet.empty()) {
      std::string reason = "coverage targets unreachable at budget caps for level(s)";
      for (int ell : unmet) reason += " " + std::to_string(ell);
      return InfeasibilityReport{reason, unmet};
    }
    policy = lowest;
  }

  // Step 2: minimal budget per level, front to back; windows beyond ell
  // contribute nothing yet, so the count is monotone in N_ell and binary
  // search applies.
  std::fill(policy.budget.begin(), policy.budget.end(), 0);
  for (int ell = 1; ell <= L; ++ell) {
    const int needed = required_count(U, sla.coverage_targets[ell - 1]);
    const int cap = sla.budget_caps[ell - 1];
    if (needed == 0) continue;
    auto count_at = [&](int n) {
      policy.budget[ell - 1] = n;
      return count_meeting_level(policy, msg, profile, sla.q_hat, ell, q);
    };
    if (count_at(cap) < needed) {
      policy.budget[ell - 1] = cap;  // defer to the repair pass
      continue;
    }
    int lo = 0;
    int hi = cap;
    while (lo < hi) {
      const int mid = lo + (hi - lo) / 2;
      if (count_at(mid) >= needed)
        hi = mid;
      else
        lo = mid + 1;
    }
    policy.budget[ell - 1] = lo;
  }

  // Repair: raise single budgets until every level constraint holds under
  // the full suffix-max delta. Reachable by the certificate above.
  EvaluatedPolicy ev = evaluate(policy, msg, profile, sla, q);
  std::vector<int> unmet = unmet_coverage_levels(ev, sla);
  while (!unmet.empty()) {
    const int ell = unmet.front();
    const int base_count = ev.qos.level_count(ell);
    int best_j = -1;
    int best_gain = -1;
    for (int j = 1; j <= L; ++j) {
      if (policy.budget[j - 1] >= sla.budget_caps[j - 1]) continue;
      ++policy.budget[j - 1];
      EvaluatedPolicy probe = evaluate(policy, msg, profile, sla, q);
      --policy.budget[j - 1];
      const int gain = probe.qos.level_count(ell) - base_count;
      if (gain > best_gain) {
        best_gain = gain;
        best_j = j;
      }
    }
    if (best_j < 0) break;  // all caps reached; certificate guarantees feasibility
    ++policy.budget[best_j - 1];
    ev = evaluate(policy, msg, profile, sla, q);
    unmet = unmet_coverage_levels(ev, sla);
  }
  if (!unmet.empty()) {
    std::string reason = "coverage constraint unmet at caps for level(s)";
    for (int ell : unmet) reason += " " + std::to_string(ell);
    return InfeasibilityReport{reason, unmet};
  }

  // Greedy improvement: single-window increments while the ratio strictly
  // increases.
  for (;;) {
    int best_j = -1;
    std::optional<EvaluatedPolicy> best_probe;
    for (int j = 1; j <= L; ++j) {
      if (policy.budget[j - 1] >= sla.budget_caps[j - 1]) continue;
      ++policy.budget[j - 1];
      EvaluatedPolicy probe = evaluate(policy, msg, profile, sla, q);
      --policy.budget[j - 1];
      if (!ratio_greater(probe.profit, probe.cost, ev.profit, ev.cost)) continue;
      if (!best_probe ||
          ratio_greater(probe.profit, probe.cost, best_probe->profit,
                        best_probe->cost)) {
        best_probe = std::move(probe);
        best_j = j;
      }
    }
    if (best_j < 0) break;
    ++policy.budget[best_j - 1];
    ev = std::move(*best_probe);
  }
  return ev;
}

EvaluatedPolicy solve_mrt(const LayeredMessage& msg, const ErasureProfile& profile,
                          const SlaConstraints& sla, double q_hat) {
  const int L = msg.num_layers();
  const int U = profile.num_users();
  const int M = profile.num_mcs();
  if (!(q_hat > 0.0 && q_hat <= 1.0))
    throw std::invalid_argument("solve_mrt: q_hat must be in (0, 1]");
  if (sla.coverage_targets.size() != static_cast<std::size_t>(L) ||
      sla.budget_caps.size() != static_cast<std::size_t>(L))
    throw std::invalid_argument("sla: dimension mismatch with message layers");

  AllocationPolicy policy;
  policy.mcs.assign(static_cast<std::size_t>(L), 1);
  policy.budget.assign(static_cast<std::size_t>(L), 0);
  for (int ell = 1; ell <= L; ++ell) policy.budget[ell - 1] = msg.layer_size(ell);

  // layer_ok[u] tracks who cleared every layer so far; each layer's MCS
  // maximises the survivors among them (ties -> highest index).
  std::vector<std::uint8_t> alive(static_cast<std::size_t>(U), 1);
  std::vector<std::vector<double>> layer_prob(
      static_cast<std::size_t>(U), std::vector<double>(static_cast<std::size_t>(L)));
  for (int ell = 1; ell <= L; ++ell) {
    const int k = msg.layer_size(ell);
    int best_m = 1;
    int best_count = -1;
    for (int m = 1; m <= M; ++m) {
      int count = 0;
      for (int u = 0; u < U; ++u) {
        if (!alive[u]) continue;
        if (std::pow(1.0 - profile.at(u, m), k) >= q_hat) ++count;
      }
      if (count >= best_count) {
        best_count = count;
        best_m = m;
      }
    }
    policy.mcs[ell - 1] = best_m;
    for (int u = 0; u < U; ++u) {
      const double r = std::pow(1.0 - profile.at(u, best_m), k);
      layer_prob[u][ell - 1] = r;
      if (alive[u] && r < q_hat) alive[u] = 0;
    }
  }

  EvaluatedPolicy ev{policy, QosMatrix(U, L), {}, 0, 0, 0.0, false, {}, "uncoded"};
  ev.win_probs.assign(static_cast<std::size_t>(U),
                      std::vector<double>(static_cast<std::size_t>(L)));
  for (int u = 0; u < U; ++u) {
    std::vector<std::uint8_t> delta(static_cast<std::size_t>(L));
    double cum = 1.0;
    bool all_clear = true;
    for (int ell = 1; ell <= L; ++ell) {
      cum *= layer_prob[u][ell - 1];
      ev.win_probs[u][ell - 1] = cum;
      if (layer_prob[u][ell - 1] < q_hat) all_clear = false;
      delta[ell - 1] = all_clear ? 1 : 0;
    }
    ev.qos.set_row(u, delta);
  }

  for (int ell = 1; ell <= L; ++ell) ev.profit += ev.qos.level_count(ell);
  ev.cost = std::accumulate(policy.budget.begin(), policy.budget.end(), 0LL);
  ev.ratio = ev.cost > 0 ? static_cast<double>(ev.profit) / static_cast<double>(ev.cost)
                         : 0.0;
  ev.level_coverage.resize(static_cast<std::size_t>(L));
  for (int ell = 1; ell <= L; ++ell)
    ev.level_coverage[ell - 1] =
        static_cast<double>(ev.qos.level_count(ell)) / static_cast<double>(U);
  bool feasible = true;
  for (int ell = 1; ell <= L; ++ell) {
    if (ev.qos.level_count(ell) < required_count(U, sla.coverage_targets[ell - 1]))
      feasible = false;
    if (policy.budget[ell - 1] > sla.budget_caps[ell - 1]) feasible = false;
  }
  ev.feasible = feasible;
  return ev;
}

}  // namespace ewmcast

// Reference solver used to check solve_exact: a flat sweep over every
// (mcs, budget) tuple that rebuilds deltas, profit and feasibility from the
// decoding primitives, with the tie-break order applied directly. Kept
// separate from the library's search code on purpose.
#pragma once

#include <algorithm>
#include <vector>

#include "ewmcast/optimizer.hpp"

namespace flat {

struct Best {
  ewmcast::AllocationPolicy policy;
  long long profit = 0;
  long long cost = 0;
  bool found = false;
};

inline Best enumerate(const ewmcast::LayeredMessage& msg,
                      const ewmcast::ErasureProfile& profile,
                      const ewmcast::SlaConstraints& sla, ewmcast::FieldSize q,
                      const std::vector<int>& candidates) {
  const int L = msg.num_layers();
  const int U = profile.num_users();
  Best best;

  auto consider = [&](const std::vector<int>& mcs, const std::vector<int>& n) {
    long long profit = 0;
    long long cost = 0;
    for (int v : n) cost += v;
    for (int ell = 1; ell <= L; ++ell) {
      int count = 0;
      for (int u = 0; u < U; ++u) {
        bool ok = false;
        for (int i = ell; i <= L && !ok; ++i) {
          ewmcast::TransmissionPlan plan;
          for (int j = 1; j <= i; ++j)
            plan.push_back({msg.window_size(j), n[j - 1], profile.at(u, mcs[j - 1])});
          ok = ewmcast::window_decoding_prob(plan, q) >= sla.q_hat;
        }
        if (ok) ++count;
      }
      if (static_cast<double>(count) < U * sla.coverage_targets[ell - 1] - 1e-9)
        return;
      profit += count;
    }
    const bool better =
        !best.found ||
        ewmcast::ratio_greater(profit, cost, best.profit, best.cost) ||
        (!ewmcast::ratio_greater(best.profit, best.cost, profit, cost) &&
         cost < best.cost);
    if (better) best = {ewmcast::AllocationPolicy{mcs, n}, profit, cost, true};
  };

  std::vector<int> mcs(static_cast<std::size_t>(L), 0);
  std::vector<int> budget(static_cast<std::size_t>(L), 0);
  std::vector<std::size_t> mi(static_cast<std::size_t>(L), 0);
  for (;;) {
    for (int i = 0; i < L; ++i) mcs[i] = candidates[mi[i]];
    std::fill(budget.begin(), budget.end(), 0);
    for (;;) {
      consider(mcs, budget);
      int pos = L - 1;
      while (pos >= 0 && budget[pos] == sla.budget_caps[pos]) budget[pos--] = 0;
      if (pos < 0) break;
      ++budget[pos];
    }
    int pos = L - 1;
    while (pos >= 0 && mi[pos] == candidates.size() - 1) mi[pos--] = 0;
    if (pos < 0) break;
    ++mi[pos];
  }
  return best;
}

}  // namespace flat

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "dtdd/interference.hpp"
#include "dtdd/topology.hpp"
#include "dtdd/types.hpp"

namespace dtdd {

struct WaterFillResult {
  std::vector<double> p;
  std::optional<double> lambda;  // empty when no user can take power
};

// Weighted water-filling for one DL cell: maximizes
//   sum_k w_k log2(1 + p_k / level_k)   s.t.  sum_k p_k = budget, p_k >= 0
// where level_k = (noise + interference) / gain. A non-finite level marks a
// user with zero gain. The multiplier is found by bisection until the
// budget mismatch is below 1e-10 relative, then refined in closed form on
// the active set.
WaterFillResult water_fill(std::span<const double> weights, std::span<const double> levels,
                           double budget);

// Greedy decentralized allocation: UL users transmit at alpha0, each DL cell
// water-fills alpha1 against its reference interference J_n(z).
PowerAllocation allocate_power(const ModeVector& z, const ChannelSet& ch,
                               const ReferenceInterference& ref, const WeightSet& weights,
                               const PowerBudget& budget, const Deployment& dep);

}  // namespace dtdd

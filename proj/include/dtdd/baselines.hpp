#pragma once

#include <vector>

#include "dtdd/game.hpp"
#include "dtdd/types.hpp"

namespace dtdd {

struct FrameSchedule {
  std::vector<ModeVector> slots;
};

enum class SwitchpointScope { kPerCell, kGlobal };

// Instantaneous optimum: argmax_z sum_n W_n(z) over a SIP table. Ties go to
// the lexicographically smallest profile.
ModeVector opt_schedule(const PayoffTable& sip_table);

// Static TDD: first half of the frame all-DL, second half all-UL.
FrameSchedule stdd_schedule(int num_cells, int slots_per_frame);

// DL-to-UL switching-point scheme. The first two slots are DL and the last
// two UL; a switching point s in [2, S-2] makes slots [0, s) DL. Each cell
// maximizes its frame-summed APP payoff with neighbors held at their
// previous-frame points (`previous`, updated in place; an empty vector is
// initialized to the frame midpoint). With the global scope all cells share
// the point maximizing the frame-summed network payoff.
FrameSchedule switchpoint_schedule(const PayoffTable& app_table, int slots_per_frame,
                                   std::vector<int>& previous,
                                   SwitchpointScope scope = SwitchpointScope::kPerCell);

// Mode pattern of a cell with switching point s over a frame.
std::vector<int> switchpoint_pattern(int switching_point, int slots_per_frame);

}  // namespace dtdd

#pragma once

#include <span>
#include <vector>

#include "dtdd/interference.hpp"
#include "dtdd/power.hpp"
#include "dtdd/topology.hpp"
#include "dtdd/types.hpp"

namespace dtdd {

// Everything that stays fixed while mode profiles are evaluated within one
// frame. Holds references; the referenced objects must outlive the view.
struct FrameView {
  const Deployment& dep;
  const ChannelSet& ch;
  const ReferenceInterference& ref;
  const WeightSet& weights;
  PowerBudget budget;
  InterferenceParams params;
};

// Weighted sum-rate of cell n in bits/s/Hz per user block, with the
// interference on each served user supplied by the caller (indexed by user).
double wsr_cell_with_interference(int n, const ModeVector& z, const PowerAllocation& p,
                                  const FrameView& view, std::span<const double> interference);

// SIP: instantaneous interference. APP: reference interference J_n(z).
double wsr_cell(int n, const ModeVector& z, const PowerAllocation& p, const FrameView& view,
                PayoffFlavor flavor);

double wsr_network(const ModeVector& z, const PowerAllocation& p, const FrameView& view,
                   PayoffFlavor flavor);

// Allocates power for z and returns the per-cell payoffs of `flavor`.
std::vector<double> evaluate_profile(const ModeVector& z, const FrameView& view,
                                     PayoffFlavor flavor);

}  // namespace dtdd

#include "dtdd/baselines.hpp"

#include "dtdd/error.hpp"

namespace dtdd {
namespace {

constexpr int kFixedHead = 2;
constexpr int kFixedTail = 2;

ModeVector slot_profile(const std::vector<int>& points, int slot) {
  ModeVector z(static_cast<int>(points.size()));
  for (std::size_t n = 0; n < points.size(); ++n) z.set(static_cast<int>(n), slot < points[n]);
  return z;
}

}  // namespace

ModeVector opt_schedule(const PayoffTable& sip_table) {
  if (sip_table.flavor() != PayoffFlavor::kSip) throw Error("OPT requires a SIP payoff table");
  std::uint32_t best = 0;
  double best_value = sip_table.network(0);
  for (std::uint32_t idx = 1; idx < sip_table.num_profiles(); ++idx) {
    const double v = sip_table.network(idx);
    if (v > best_value) {
      best = idx;
      best_value = v;
    }
  }
  return ModeVector::from_index(sip_table.num_cells(), best);
}

FrameSchedule stdd_schedule(int num_cells, int slots_per_frame) {
  if (slots_per_frame < 2 || slots_per_frame % 2 != 0) throw Error("uneven static split");
  FrameSchedule f;
  for (int t = 0; t < slots_per_frame; ++t)
    f.slots.emplace_back(num_cells, t < slots_per_frame / 2 ? 1 : 0);
  return f;
}

std::vector<int> switchpoint_pattern(int switching_point, int slots_per_frame) {
  if (slots_per_frame < kFixedHead + kFixedTail + 1)
    throw Error("frame too short for fixed head/tail");
  if (switching_point < kFixedHead || switching_point > slots_per_frame - kFixedTail)
    throw Error("switching point outside the free region");
  std::vector<int> out(static_cast<std::size_t>(slots_per_frame));
  for (int t = 0; t < slots_per_frame; ++t) out[static_cast<std::size_t>(t)] = t < switching_point;
  return out;
}

FrameSchedule switchpoint_schedule(const PayoffTable& app_table, int slots_per_frame,
                                   std::vector<int>& previous, SwitchpointScope scope) {
  if (slots_per_frame < kFixedHead + kFixedTail + 1)
    throw Error("frame too short for fixed head/tail");
  const int num_cells = app_table.num_cells();
  const int lo = kFixedHead;
  const int hi = slots_per_frame - kFixedTail;
  if (static_cast<int>(previous.size()) != num_cells)
    previous.assign(static_cast<std::size_t>(num_cells), slots_per_frame / 2);

  std::vector<int> chosen(static_cast<std::size_t>(num_cells), lo);
  if (scope == SwitchpointScope::kGlobal) {
    double best = 0.0;
    for (int s = lo; s <= hi; ++s) {
      double total = 0.0;
      for (int t = 0; t < slots_per_frame; ++t)
        total += app_table.network(ModeVector(num_cells, t < s).index());
      if (s == lo || total > best) {
        best = total;
        chosen.assign(static_cast<std::size_t>(num_cells), s);
      }
    }
  } else {
    for (int n = 0; n < num_cells; ++n) {
      std::vector<int> points = previous;
      double best = 0.0;
      for (int s = lo; s <= hi; ++s) {
        points[static_cast<std::size_t>(n)] = s;
        double total = 0.0;
        for (int t = 0; t < slots_per_frame; ++t) total += app_table(n, slot_profile(points, t));
        if (s == lo || total > best) {
          best = total;
          chosen[static_cast<std::size_t>(n)] = s;
        }
      }
    }
  }
  previous = chosen;

  FrameSchedule f;
  for (int t = 0; t < slots_per_frame; ++t) f.slots.push_back(slot_profile(chosen, t));
  return f;
}

}  // namespace dtdd

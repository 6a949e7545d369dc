#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "dtdd/topology.hpp"
#include "dtdd/types.hpp"

namespace dtdd {

// Average interference cell n suffers from cell m, tabulated for the four
// (victim mode, interferer mode) combinations under nominal powers
// (alpha1/K per DL user, alpha0 per UL user).
class ReferenceInterference {
 public:
  ReferenceInterference() = default;
  explicit ReferenceInterference(int num_cells);

  int num_cells() const { return static_cast<int>(table_[0].rows()); }
  double operator()(int victim, int source, int victim_mode, int source_mode) const {
    return table_[static_cast<std::size_t>(2 * victim_mode + source_mode)](victim, source);
  }
  double& at(int victim, int source, int victim_mode, int source_mode) {
    return table_[static_cast<std::size_t>(2 * victim_mode + source_mode)](victim, source);
  }

 private:
  std::array<Eigen::MatrixXd, 4> table_;
};

// Interference on user k (served by n) from the co-block user of cell m.
// Throws when m == n.
double pairwise_interference(int n, int k, int m, const ModeVector& z, const PowerAllocation& p,
                             const ChannelSet& ch, const InterferenceParams& params,
                             const Deployment& dep);

double total_interference(int n, int k, const ModeVector& z, const PowerAllocation& p,
                          const ChannelSet& ch, const InterferenceParams& params,
                          const Deployment& dep);

// total_interference for every user, indexed by user.
std::vector<double> total_interference_all(const ModeVector& z, const PowerAllocation& p,
                                           const ChannelSet& ch, const InterferenceParams& params,
                                           const Deployment& dep);

ReferenceInterference reference_interference(const ChannelStats& stats,
                                             const InterferenceParams& params,
                                             const PowerBudget& budget, int users_per_cell);

// J_n(z): sum over m != n of the reference entry selected by (z_n, z_m).
double aggregate_reference(int n, const ModeVector& z, const ReferenceInterference& ref);

}  // namespace dtdd

#include "dtdd/interference.hpp"

#include "dtdd/error.hpp"

namespace dtdd {

ReferenceInterference::ReferenceInterference(int num_cells) {
  for (auto& t : table_) t = Eigen::MatrixXd::Zero(num_cells, num_cells);
}

double pairwise_interference(int n, int k, int m, const ModeVector& z, const PowerAllocation& p,
                             const ChannelSet& ch, const InterferenceParams& params,
                             const Deployment& dep) {
  if (m == n) throw Error("self-interference pair");
  // One user per block and cell, so the co-block sums have a single term.
  const int j = dep.user_at(m, dep.block_of_user[static_cast<std::size_t>(k)]);
  const double pj = p.p[static_cast<std::size_t>(j)];
  if (z.is_downlink(n)) {
    return z.is_downlink(m) ? ch.H(m, k) * pj : params.c1 * ch.U(j, k) * pj;
  }
  return z.is_downlink(m) ? params.c2 * ch.B(m, n) * pj : ch.H(n, j) * pj;
}

double total_interference(int n, int k, const ModeVector& z, const PowerAllocation& p,
                          const ChannelSet& ch, const InterferenceParams& params,
                          const Deployment& dep) {
  double sum = 0.0;
  for (int m = 0; m < dep.num_cells; ++m)
    if (m != n) sum += pairwise_interference(n, k, m, z, p, ch, params, dep);
  return sum;
}

std::vector<double> total_interference_all(const ModeVector& z, const PowerAllocation& p,
                                           const ChannelSet& ch, const InterferenceParams& params,
                                           const Deployment& dep) {
  std::vector<double> out(static_cast<std::size_t>(dep.num_users()));
  for (int k = 0; k < dep.num_users(); ++k) {
    const int n = dep.serving_cell[static_cast<std::size_t>(k)];
    out[static_cast<std::size_t>(k)] = total_interference(n, k, z, p, ch, params, dep);
  }
  return out;
}

ReferenceInterference reference_interference(const ChannelStats& stats,
                                             const InterferenceParams& params,
                                             const PowerBudget& budget, int users_per_cell) {
  const int n_cells = static_cast<int>(stats.mean_b.rows());
  const double dl_power = budget.alpha1 / users_per_cell;
  const double ul_power = budget.alpha0;
  ReferenceInterference ref(n_cells);
  for (int n = 0; n < n_cells; ++n) {
    for (int m = 0; m < n_cells; ++m) {
      if (m == n) continue;
      // Victim in DL.
      ref.at(n, m, 1, 1) = dl_power * stats.mean_h(m, n);
      ref.at(n, m, 1, 0) = params.c1 * stats.mean_u(m, n) * ul_power;
      // Victim in UL.
      ref.at(n, m, 0, 1) = dl_power * params.c2 * stats.mean_b(m, n);
      ref.at(n, m, 0, 0) = stats.mean_h(n, m) * ul_power;
    }
  }
  return ref;
}

double aggregate_reference(int n, const ModeVector& z, const ReferenceInterference& ref) {
  double sum = 0.0;
  for (int m = 0; m < ref.num_cells(); ++m)
    if (m != n) sum += ref(n, m, z[n], z[m]);
  return sum;
}

}  // namespace dtdd

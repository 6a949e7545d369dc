#include "dtdd/rate.hpp"

#include <cmath>

namespace dtdd {

double wsr_cell_with_interference(int n, const ModeVector& z, const PowerAllocation& p,
                                  const FrameView& view, std::span<const double> interference) {
  const auto& dep = view.dep;
  const int mode = z[n];
  double sum = 0.0;
  for (int b = 0; b < dep.users_per_cell; ++b) {
    const int k = dep.user_at(n, b);
    const double w = view.weights.weight(k, mode);
    if (w == 0.0) continue;
    const double signal = view.ch.H(n, k) * p.p[static_cast<std::size_t>(k)];
    sum += w * std::log2(1.0 + signal / (view.budget.sigma2 + interference[static_cast<std::size_t>(k)]));
  }
  return sum;
}

double wsr_cell(int n, const ModeVector& z, const PowerAllocation& p, const FrameView& view,
                PayoffFlavor flavor) {
  std::vector<double> interference(static_cast<std::size_t>(view.dep.num_users()), 0.0);
  for (int b = 0; b < view.dep.users_per_cell; ++b) {
    const int k = view.dep.user_at(n, b);
    interference[static_cast<std::size_t>(k)] =
        flavor == PayoffFlavor::kSip
            ? total_interference(n, k, z, p, view.ch, view.params, view.dep)
            : aggregate_reference(n, z, view.ref);
  }
  return wsr_cell_with_interference(n, z, p, view, interference);
}

double wsr_network(const ModeVector& z, const PowerAllocation& p, const FrameView& view,
                   PayoffFlavor flavor) {
  double sum = 0.0;
  for (int n = 0; n < view.dep.num_cells; ++n) sum += wsr_cell(n, z, p, view, flavor);
  return sum;
}

std::vector<double> evaluate_profile(const ModeVector& z, const FrameView& view,
                                     PayoffFlavor flavor) {
  const auto p = allocate_power(z, view.ch, view.ref, view.weights, view.budget, view.dep);
  std::vector<double> out(static_cast<std::size_t>(view.dep.num_cells));
  for (int n = 0; n < view.dep.num_cells; ++n) out[static_cast<std::size_t>(n)] = wsr_cell(n, z, p, view, flavor);
  return out;
}

}  // namespace dtdd

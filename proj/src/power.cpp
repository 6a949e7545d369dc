#include "dtdd/power.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dtdd/error.hpp"

namespace dtdd {
namespace {

double allocated(std::span<const double> w, std::span<const double> level, double lambda,
                 std::vector<double>* out) {
  double sum = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    double pk = 0.0;
    if (w[k] > 0.0 && std::isfinite(level[k])) pk = std::max(0.0, w[k] / lambda - level[k]);
    if (out) (*out)[k] = pk;
    sum += pk;
  }
  return sum;
}

}  // namespace

WaterFillResult water_fill(std::span<const double> weights, std::span<const double> levels,
                           double budget) {
  if (weights.size() != levels.size()) throw Error("weights and levels differ in length");
  WaterFillResult res;
  res.p.assign(weights.size(), 0.0);

  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (!(weights[k] > 0.0) || !std::isfinite(levels[k])) continue;
    lo = std::min(lo, weights[k] / (levels[k] + budget));
    hi = std::max(hi, weights[k] / levels[k]);
  }
  if (!(hi > 0.0)) return res;

  // f(lambda) = sum of powers is continuous and nonincreasing; f(lo) >= budget
  // and f(hi) = 0.
  while (allocated(weights, levels, hi, nullptr) > budget) hi *= 2.0;
  double lambda = hi;
  for (int it = 0; it < 400; ++it) {
    lambda = std::sqrt(lo * hi);
    if (!(lambda > lo && lambda < hi)) lambda = 0.5 * (lo + hi);
    const double s = allocated(weights, levels, lambda, nullptr);
    if (std::abs(s - budget) <= 1e-10 * budget) break;
    (s > budget ? lo : hi) = lambda;
  }

  // On the active set the optimal multiplier has a closed form; use it when
  // it keeps the same active set.
  std::vector<double> p(weights.size());
  allocated(weights, levels, lambda, &p);
  double wsum = 0.0;
  double lsum = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k)
    if (p[k] > 0.0) {
      wsum += weights[k];
      lsum += levels[k];
    }
  if (wsum > 0.0) {
    const double exact = wsum / (budget + lsum);
    std::vector<double> q(weights.size());
    allocated(weights, levels, exact, &q);
    bool same_support = true;
    for (std::size_t k = 0; k < p.size(); ++k) same_support &= (p[k] > 0.0) == (q[k] > 0.0);
    if (same_support) {
      lambda = exact;
      p = std::move(q);
    }
  }
  res.p = std::move(p);
  res.lambda = lambda;
  return res;
}

PowerAllocation allocate_power(const ModeVector& z, const ChannelSet& ch,
                               const ReferenceInterference& ref, const WeightSet& weights,
                               const PowerBudget& budget, const Deployment& dep) {
  const int n_cells = dep.num_cells;
  const int k_users = dep.users_per_cell;
  if (z.size() != n_cells) throw Error("mode vector length does not match the number of cells");

  PowerAllocation alloc;
  alloc.p.assign(static_cast<std::size_t>(dep.num_users()), 0.0);
  alloc.lambda.assign(static_cast<std::size_t>(n_cells), std::nullopt);

  std::vector<double> w(static_cast<std::size_t>(k_users));
  std::vector<double> level(static_cast<std::size_t>(k_users));
  for (int n = 0; n < n_cells; ++n) {
    if (!z.is_downlink(n)) {
      for (int b = 0; b < k_users; ++b)
        alloc.p[static_cast<std::size_t>(dep.user_at(n, b))] = budget.alpha0;
      continue;
    }
    const double floor = budget.sigma2 + aggregate_reference(n, z, ref);
    for (int b = 0; b < k_users; ++b) {
      const int k = dep.user_at(n, b);
      const double h = ch.H(n, k);
      w[static_cast<std::size_t>(b)] = weights.weight(k, 1);
      level[static_cast<std::size_t>(b)] =
          h > 0.0 ? floor / h : std::numeric_limits<double>::infinity();
    }
    auto wf = water_fill(w, level, budget.alpha1);
    for (int b = 0; b < k_users; ++b)
      alloc.p[static_cast<std::size_t>(dep.user_at(n, b))] = wf.p[static_cast<std::size_t>(b)];
    alloc.lambda[static_cast<std::size_t>(n)] = wf.lambda;
  }
  return alloc;
}

}  // namespace dtdd

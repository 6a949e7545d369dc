#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "dtdd/rate.hpp"
#include "dtdd/types.hpp"

namespace dtdd {

// W_n(z) for every cell n and every mode profile z. Profiles are addressed
// by ModeVector::index().
class PayoffTable {
 public:
  static constexpr int kMaxEnumerable = 16;

  PayoffTable(int num_cells, PayoffFlavor flavor, std::vector<double> values);

  int num_cells() const { return n_; }
  std::uint32_t num_profiles() const { return 1U << n_; }
  PayoffFlavor flavor() const { return flavor_; }
  double operator()(int cell, std::uint32_t profile) const {
    return values_[static_cast<std::size_t>(profile) * static_cast<std::size_t>(n_) +
                   static_cast<std::size_t>(cell)];
  }
  double operator()(int cell, const ModeVector& z) const { return (*this)(cell, z.index()); }
  double network(std::uint32_t profile) const;
  double max_abs() const;
  // Row-major [profile][cell].
  const std::vector<double>& values() const { return values_; }

 private:
  int n_;
  PayoffFlavor flavor_;
  std::vector<double> values_;
};

struct MixedStrategy {
  std::vector<double> q;  // q[n] = P[z_n = 1]

  int size() const { return static_cast<int>(q.size()); }
};

struct SolverOptions {
  int starts = 32;
  double residual_tol = 1e-7;
  double distinct_tol = 1e-4;
  int max_newton_iterations = 100;
  // Adds every pure-strategy equilibrium found by direct enumeration to the
  // candidate set.
  bool scan_pure = true;
  std::uint64_t seed = 0x6d736e65ULL;
};

struct EquilibriumReport {
  std::vector<double> q;
  std::vector<double> residuals;     // F_n(q)
  std::vector<int> boundary_flags;   // 1 where q_n is clamped to 0 or 1
  double social_welfare = 0.0;       // expected network payoff at q
  int solver_starts_used = 0;
  int distinct_equilibria = 0;
};

struct OverheadReport {
  long long scalars_per_frame_sip = 0;
  long long scalars_per_frame_app_fast = 0;
  long long scalars_per_window_app_slow = 0;
};

PayoffTable build_payoff_table(PayoffFlavor flavor, const FrameView& view,
                               int max_enumerable = PayoffTable::kMaxEnumerable);

double expected_payoff(int n, int mode, const MixedStrategy& q, const PayoffTable& table);
double indifference_residual(int n, const MixedStrategy& q, const PayoffTable& table);
std::vector<double> indifference_residuals(const MixedStrategy& q, const PayoffTable& table);

// Expected network payoff sum_n E_q[W_n].
double expected_welfare(const MixedStrategy& q, const PayoffTable& table);

// Largest gain any player obtains by deviating from q to a pure mode.
double max_deviation_gain(const MixedStrategy& q, const PayoffTable& table);

// Boundary-aware equilibrium test: interior components need |F_n| <= tol,
// q_n = 1 needs F_n >= -tol and q_n = 0 needs F_n <= tol.
bool satisfies_equilibrium(const MixedStrategy& q, std::span<const double> residuals, double tol);

EquilibriumReport solve_msne(const PayoffTable& table, const SolverOptions& opts = {});

std::vector<ModeVector> sample_modes(const MixedStrategy& q, int num_slots, std::mt19937_64& rng);

OverheadReport signaling_overhead(int num_cells, int users_per_cell);

}  // namespace dtdd

#include "dtdd/game.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "dtdd/error.hpp"

namespace dtdd {
namespace {

std::uint32_t bit_of(int num_cells, int cell) { return 1U << (num_cells - 1 - cell); }

// Joint distribution of the opponents of `n`: probability and profile index
// (with the own bit cleared) for each of the 2^(N-1) opponent profiles.
struct OpponentProfiles {
  std::vector<double> prob;
  std::vector<std::uint32_t> index;

  void build(int n, std::span<const double> q) {
    const int num_cells = static_cast<int>(q.size());
    const std::size_t total = std::size_t{1} << (num_cells - 1);
    prob.assign(total, 0.0);
    index.assign(total, 0);
    prob[0] = 1.0;
    std::size_t size = 1;
    for (int m = 0; m < num_cells; ++m) {
      if (m == n) continue;
      const double qm = q[static_cast<std::size_t>(m)];
      const std::uint32_t bit = bit_of(num_cells, m);
      for (std::size_t i = 0; i < size; ++i) {
        prob[i + size] = prob[i] * qm;
        index[i + size] = index[i] | bit;
        prob[i] *= 1.0 - qm;
      }
      size *= 2;
    }
  }
};

void conditional_payoffs(int n, std::span<const double> q, const PayoffTable& table,
                         OpponentProfiles& work, double& e0, double& e1) {
  work.build(n, q);
  const std::uint32_t own = bit_of(table.num_cells(), n);
  e0 = 0.0;
  e1 = 0.0;
  for (std::size_t i = 0; i < work.prob.size(); ++i) {
    const double p = work.prob[i];
    if (p == 0.0) continue;
    e0 += p * table(n, work.index[i]);
    e1 += p * table(n, work.index[i] | own);
  }
}

void check_strategy(const MixedStrategy& q, const PayoffTable& table) {
  if (q.size() != table.num_cells()) throw Error("mixed strategy length does not match the table");
  for (double v : q.q)
    if (!(v >= 0.0 && v <= 1.0)) throw Error("mixed strategy entries must lie in [0, 1]");
}

std::vector<double> residuals_of(std::span<const double> q, const PayoffTable& table,
                                 OpponentProfiles& work) {
  std::vector<double> f(q.size());
  for (int n = 0; n < table.num_cells(); ++n) {
    double e0 = 0.0;
    double e1 = 0.0;
    conditional_payoffs(n, q, table, work, e0, e1);
    f[static_cast<std::size_t>(n)] = e1 - e0;
  }
  return f;
}

// F_n is affine in each q_m (m != n), so the secant across [0, 1] is the
// exact partial derivative.
Eigen::MatrixXd jacobian_of(std::vector<double> q, const PayoffTable& table,
                            OpponentProfiles& work) {
  const int num_cells = table.num_cells();
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(num_cells, num_cells);
  for (int m = 0; m < num_cells; ++m) {
    const double keep = q[static_cast<std::size_t>(m)];
    q[static_cast<std::size_t>(m)] = 1.0;
    const auto hi = residuals_of(q, table, work);
    q[static_cast<std::size_t>(m)] = 0.0;
    const auto lo = residuals_of(q, table, work);
    q[static_cast<std::size_t>(m)] = keep;
    for (int n = 0; n < num_cells; ++n)
      if (n != m) jac(n, m) = hi[static_cast<std::size_t>(n)] - lo[static_cast<std::size_t>(n)];
  }
  return jac;
}

// Squared norm of the box-projected natural residual q - clamp(q + F/scale).
double merit(std::span<const double> q, std::span<const double> f, double scale) {
  double s = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double r = q[i] - std::clamp(q[i] + f[i] / scale, 0.0, 1.0);
    s += r * r;
  }
  return s;
}

struct NewtonResult {
  std::vector<double> q;
  std::vector<double> f;
  double merit = 0.0;
};

// Damped projected Newton on the mixed-equilibrium conditions. Components
// sitting on a bound with the residual pointing outward are frozen; the
// remaining ones take a least-squares Newton step on F_free = 0.
NewtonResult projected_newton(std::vector<double> q, const PayoffTable& table, double scale,
                              double tol, int max_iterations, OpponentProfiles& work) {
  const int num_cells = table.num_cells();
  auto f = residuals_of(q, table, work);
  double phi = merit(q, f, scale);
  for (int it = 0; it < max_iterations; ++it) {
    if (satisfies_equilibrium(MixedStrategy{q}, f, tol)) break;

    std::vector<int> free;
    for (int n = 0; n < num_cells; ++n) {
      const double qn = q[static_cast<std::size_t>(n)];
      const double fn = f[static_cast<std::size_t>(n)];
      if ((qn <= 0.0 && fn <= 0.0) || (qn >= 1.0 && fn >= 0.0)) continue;
      free.push_back(n);
    }
    if (free.empty()) break;

    const auto jac = jacobian_of(q, table, work);
    const auto nf = static_cast<Eigen::Index>(free.size());
    Eigen::MatrixXd jff(nf, nf);
    Eigen::VectorXd rhs(nf);
    for (Eigen::Index a = 0; a < nf; ++a) {
      rhs(a) = -f[static_cast<std::size_t>(free[static_cast<std::size_t>(a)])];
      for (Eigen::Index b = 0; b < nf; ++b)
        jff(a, b) = jac(free[static_cast<std::size_t>(a)], free[static_cast<std::size_t>(b)]);
    }
    Eigen::VectorXd step = jff.completeOrthogonalDecomposition().solve(rhs);
    if (!step.allFinite() || step.norm() == 0.0) break;

    bool accepted = false;
    for (double t = 1.0; t > 1e-10; t *= 0.5) {
      std::vector<double> trial = q;
      for (Eigen::Index a = 0; a < nf; ++a) {
        auto& v = trial[static_cast<std::size_t>(free[static_cast<std::size_t>(a)])];
        v = std::clamp(v + t * step(a), 0.0, 1.0);
      }
      auto ftrial = residuals_of(trial, table, work);
      const double phi_trial = merit(trial, ftrial, scale);
      if (phi_trial < (1.0 - 1e-4 * t) * phi) {
        q = std::move(trial);
        f = std::move(ftrial);
        phi = phi_trial;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  return {std::move(q), std::move(f), phi};
}

constexpr int kRestartFactor = 8;
constexpr int kMaxSupportEnumeration = 10;

// Pure best-response dynamics starting from the rounding of q.
std::vector<double> best_response_polish(std::vector<double> q, const PayoffTable& table,
                                         double tol) {
  const int num_cells = table.num_cells();
  ModeVector z(num_cells);
  for (int n = 0; n < num_cells; ++n) z.set(n, q[static_cast<std::size_t>(n)] >= 0.5);
  for (int round = 0; round < 4 * num_cells + 4; ++round) {
    bool changed = false;
    for (int n = 0; n < num_cells; ++n) {
      ModeVector up = z;
      ModeVector down = z;
      up.set(n, 1);
      down.set(n, 0);
      const double gain = table(n, up) - table(n, down);
      const int best = gain > tol ? 1 : (gain < -tol ? 0 : z[n]);
      if (best != z[n]) {
        z.set(n, best);
        changed = true;
      }
    }
    if (!changed) break;
  }
  for (int n = 0; n < num_cells; ++n) q[static_cast<std::size_t>(n)] = z[n];
  return q;
}


// Support enumeration: players outside `mixed` are held at the pure modes in
// `pure_bits`; the mixed ones solve F_S(q_S) = 0 by plain Newton (the
// multilinear residuals extend to all of R^N), and the root is kept when it
// lands in the box and the pure players have no profitable deviation.
bool solve_on_support(const std::vector<int>& mixed, std::uint32_t pure_bits,
                      const PayoffTable& table, double tol, std::mt19937_64& rng,
                      OpponentProfiles& work, std::vector<double>& out) {
  const int num_cells = table.num_cells();
  const auto ns = static_cast<Eigen::Index>(mixed.size());
  std::vector<double> base(static_cast<std::size_t>(num_cells));
  for (int n = 0; n < num_cells; ++n) base[static_cast<std::size_t>(n)] = (pure_bits >> n) & 1U;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto restricted_norm = [&](const std::vector<double>& f) {
    double s = 0.0;
    for (int n : mixed) s += f[static_cast<std::size_t>(n)] * f[static_cast<std::size_t>(n)];
    return s;
  };
  for (int start = 0; start < 6; ++start) {
    std::vector<double> q = base;
    for (int n : mixed) q[static_cast<std::size_t>(n)] = start == 0 ? 0.5 : unit(rng);
    auto f = residuals_of(q, table, work);
    double nrm = restricted_norm(f);
    for (int it = 0; it < 60 && nrm > tol * tol * 1e-6; ++it) {
      const auto jac = jacobian_of(q, table, work);
      Eigen::MatrixXd jss(ns, ns);
      Eigen::VectorXd rhs(ns);
      for (Eigen::Index a = 0; a < ns; ++a) {
        rhs(a) = -f[static_cast<std::size_t>(mixed[static_cast<std::size_t>(a)])];
        for (Eigen::Index b = 0; b < ns; ++b)
          jss(a, b) = jac(mixed[static_cast<std::size_t>(a)], mixed[static_cast<std::size_t>(b)]);
      }
      const Eigen::VectorXd step = jss.completeOrthogonalDecomposition().solve(rhs);
      if (!step.allFinite() || step.norm() == 0.0) break;
      bool accepted = false;
      for (double t = 1.0; t > 1e-8; t *= 0.5) {
        auto trial = q;
        for (Eigen::Index a = 0; a < ns; ++a)
          trial[static_cast<std::size_t>(mixed[static_cast<std::size_t>(a)])] += t * step(a);
        auto ftrial = residuals_of(trial, table, work);
        const double ntrial = restricted_norm(ftrial);
        if (ntrial < nrm) {
          q = std::move(trial);
          f = std::move(ftrial);
          nrm = ntrial;
          accepted = true;
          break;
        }
      }
      if (!accepted) break;
    }
    bool inside = true;
    for (int n : mixed) {
      auto& v = q[static_cast<std::size_t>(n)];
      if (v < -1e-9 || v > 1.0 + 1e-9) inside = false;
      v = std::clamp(v, 0.0, 1.0);
    }
    if (!inside) continue;
    f = residuals_of(q, table, work);
    if (satisfies_equilibrium(MixedStrategy{q}, f, tol)) {
      out = std::move(q);
      return true;
    }
  }
  return false;
}

bool support_enumeration(const PayoffTable& table, double tol, std::mt19937_64& rng,
                         OpponentProfiles& work, std::vector<double>& out) {
  const int num_cells = table.num_cells();
  const std::uint32_t all = (1U << num_cells) - 1U;
  // Smaller supports first; they are the cheapest and the most common.
  for (int size = 2; size <= num_cells; ++size) {
    for (std::uint32_t mask = 0; mask <= all; ++mask) {
      if (std::popcount(mask) != size) continue;
      std::vector<int> mixed;
      for (int n = 0; n < num_cells; ++n)
        if ((mask >> n) & 1U) mixed.push_back(n);
      const std::uint32_t rest = all & ~mask;
      // Walk every pure assignment of the remaining players.
      for (std::uint32_t sub = rest;; sub = (sub - 1) & rest) {
        if (solve_on_support(mixed, sub, table, tol, rng, work, out)) return true;
        if (sub == 0) break;
      }
    }
  }
  return false;
}

}  // namespace

PayoffTable::PayoffTable(int num_cells, PayoffFlavor flavor, std::vector<double> values)
    : n_(num_cells), flavor_(flavor), values_(std::move(values)) {
  if (n_ < 1) throw Error("payoff table needs at least one cell");
  if (n_ > kMaxEnumerable) throw Error("payoff enumeration infeasible");
  if (values_.size() != (std::size_t{1} << n_) * static_cast<std::size_t>(n_))
    throw Error("payoff table size does not match N * 2^N");
  for (double v : values_)
    if (!std::isfinite(v)) throw Error("payoff table entries must be finite");
}

double PayoffTable::network(std::uint32_t profile) const {
  double s = 0.0;
  for (int n = 0; n < n_; ++n) s += (*this)(n, profile);
  return s;
}

double PayoffTable::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

PayoffTable build_payoff_table(PayoffFlavor flavor, const FrameView& view, int max_enumerable) {
  const int num_cells = view.dep.num_cells;
  if (num_cells > std::min(max_enumerable, PayoffTable::kMaxEnumerable))
    throw Error("payoff enumeration infeasible");
  const std::uint32_t profiles = 1U << num_cells;
  std::vector<double> values(static_cast<std::size_t>(profiles) * static_cast<std::size_t>(num_cells));
  for (std::uint32_t idx = 0; idx < profiles; ++idx) {
    const auto w = evaluate_profile(ModeVector::from_index(num_cells, idx), view, flavor);
    std::copy(w.begin(), w.end(), values.begin() + static_cast<std::ptrdiff_t>(idx) * num_cells);
  }
  return PayoffTable(num_cells, flavor, std::move(values));
}

double expected_payoff(int n, int mode, const MixedStrategy& q, const PayoffTable& table) {
  check_strategy(q, table);
  OpponentProfiles work;
  double e0 = 0.0;
  double e1 = 0.0;
  conditional_payoffs(n, q.q, table, work, e0, e1);
  return mode == 1 ? e1 : e0;
}

double indifference_residual(int n, const MixedStrategy& q, const PayoffTable& table) {
  return expected_payoff(n, 1, q, table) - expected_payoff(n, 0, q, table);
}

std::vector<double> indifference_residuals(const MixedStrategy& q, const PayoffTable& table) {
  check_strategy(q, table);
  OpponentProfiles work;
  return residuals_of(q.q, table, work);
}

double expected_welfare(const MixedStrategy& q, const PayoffTable& table) {
  check_strategy(q, table);
  const int num_cells = table.num_cells();
  std::vector<double> prob(table.num_profiles(), 0.0);
  std::vector<std::uint32_t> index(table.num_profiles(), 0);
  prob[0] = 1.0;
  std::size_t size = 1;
  for (int m = 0; m < num_cells; ++m) {
    const double qm = q.q[static_cast<std::size_t>(m)];
    const std::uint32_t bit = bit_of(num_cells, m);
    for (std::size_t i = 0; i < size; ++i) {
      prob[i + size] = prob[i] * qm;
      index[i + size] = index[i] | bit;
      prob[i] *= 1.0 - qm;
    }
    size *= 2;
  }
  double total = 0.0;
  for (std::size_t i = 0; i < size; ++i)
    if (prob[i] != 0.0) total += prob[i] * table.network(index[i]);
  return total;
}

double max_deviation_gain(const MixedStrategy& q, const PayoffTable& table) {
  check_strategy(q, table);
  OpponentProfiles work;
  double worst = 0.0;
  for (int n = 0; n < table.num_cells(); ++n) {
    double e0 = 0.0;
    double e1 = 0.0;
    conditional_payoffs(n, q.q, table, work, e0, e1);
    const double qn = q.q[static_cast<std::size_t>(n)];
    const double current = qn * e1 + (1.0 - qn) * e0;
    worst = std::max(worst, std::max(e0, e1) - current);
  }
  return worst;
}

bool satisfies_equilibrium(const MixedStrategy& q, std::span<const double> residuals, double tol) {
  for (std::size_t n = 0; n < q.q.size(); ++n) {
    const double qn = q.q[n];
    const double fn = residuals[n];
    if (qn <= 0.0) {
      if (fn > tol) return false;
    } else if (qn >= 1.0) {
      if (fn < -tol) return false;
    } else if (std::abs(fn) > tol) {
      return false;
    }
  }
  return true;
}

EquilibriumReport solve_msne(const PayoffTable& table, const SolverOptions& opts) {
  const int num_cells = table.num_cells();
  const double max_abs = table.max_abs();
  const double scale = max_abs > 0.0 ? max_abs : 1.0;
  // Absolute 1e-7 for payoffs of order one and above, relative below.
  const double tol = opts.residual_tol * std::min(1.0, scale);

  std::vector<std::vector<double>> starts;
  starts.emplace_back(static_cast<std::size_t>(num_cells), 0.5);
  const std::uint32_t corners = std::min<std::uint32_t>(table.num_profiles(), 8U);
  for (std::uint32_t idx = 0; idx < corners && static_cast<int>(starts.size()) < opts.starts; ++idx) {
    const auto z = ModeVector::from_index(num_cells, idx);
    std::vector<double> s(static_cast<std::size_t>(num_cells));
    for (int n = 0; n < num_cells; ++n) s[static_cast<std::size_t>(n)] = z[n];
    starts.push_back(std::move(s));
  }
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  while (static_cast<int>(starts.size()) < opts.starts) {
    std::vector<double> s(static_cast<std::size_t>(num_cells));
    for (auto& v : s) v = unit(rng);
    starts.push_back(std::move(s));
  }
  starts.resize(static_cast<std::size_t>(std::max(1, opts.starts)));

  std::vector<std::vector<double>> found;
  auto add_candidate = [&](const std::vector<double>& q) {
    for (const auto& c : found) {
      double d = 0.0;
      for (std::size_t i = 0; i < q.size(); ++i) d = std::max(d, std::abs(q[i] - c[i]));
      if (d <= opts.distinct_tol) return;
    }
    found.push_back(q);
  };

  OpponentProfiles work;
  NewtonResult closest;
  closest.merit = std::numeric_limits<double>::infinity();
  for (const auto& s : starts) {
    auto res = projected_newton(s, table, scale, tol * 1e-3, opts.max_newton_iterations, work);
    if (satisfies_equilibrium(MixedStrategy{res.q}, res.f, tol)) {
      add_candidate(res.q);
    } else if (res.merit < closest.merit) {
      closest = std::move(res);
    }
  }

  if (opts.scan_pure) {
    for (std::uint32_t idx = 0; idx < table.num_profiles(); ++idx) {
      bool stable = true;
      for (int n = 0; n < num_cells && stable; ++n) {
        const std::uint32_t bit = bit_of(num_cells, n);
        const double gain = table(n, idx | bit) - table(n, idx & ~bit);
        stable = (idx & bit) ? gain >= -tol : gain <= tol;
      }
      if (stable) {
        const auto z = ModeVector::from_index(num_cells, idx);
        std::vector<double> q(static_cast<std::size_t>(num_cells));
        for (int n = 0; n < num_cells; ++n) q[static_cast<std::size_t>(n)] = z[n];
        add_candidate(q);
      }
    }
  }

  // Multistart can miss on tables whose equilibria all sit in narrow basins.
  // Keep restarting from fresh random points before falling back.
  int used = static_cast<int>(starts.size());
  const int budget = used + kRestartFactor * std::max(1, opts.starts);
  while (found.empty() && used < budget) {
    std::vector<double> s(static_cast<std::size_t>(num_cells));
    for (auto& v : s) v = unit(rng);
    ++used;
    auto res = projected_newton(s, table, scale, tol * 1e-3, opts.max_newton_iterations, work);
    if (satisfies_equilibrium(MixedStrategy{res.q}, res.f, tol)) {
      add_candidate(res.q);
    } else if (res.merit < closest.merit) {
      closest = std::move(res);
    }
  }

  if (found.empty() && num_cells <= kMaxSupportEnumeration) {
    std::vector<double> q;
    if (support_enumeration(table, tol, rng, work, q)) add_candidate(q);
  }

  if (found.empty() && std::isfinite(closest.merit)) {
    auto q = best_response_polish(closest.q, table, tol);
    if (satisfies_equilibrium(MixedStrategy{q}, residuals_of(q, table, work), tol)) add_candidate(q);
  }
  if (found.empty()) throw Error("MS-NE not found");

  EquilibriumReport best;
  best.social_welfare = -std::numeric_limits<double>::infinity();
  for (const auto& q : found) {
    const double welfare = expected_welfare(MixedStrategy{q}, table);
    if (welfare > best.social_welfare) {
      best.q = q;
      best.social_welfare = welfare;
    }
  }
  best.residuals = residuals_of(best.q, table, work);
  for (double v : best.q) best.boundary_flags.push_back(v <= 0.0 || v >= 1.0 ? 1 : 0);
  best.solver_starts_used = used;
  best.distinct_equilibria = static_cast<int>(found.size());
  return best;
}

std::vector<ModeVector> sample_modes(const MixedStrategy& q, int num_slots, std::mt19937_64& rng) {
  if (num_slots < 1) throw Error("num_slots must be >= 1");
  for (double v : q.q)
    if (!(v >= 0.0 && v <= 1.0)) throw Error("mixed strategy entries must lie in [0, 1]");
  std::vector<ModeVector> out;
  out.reserve(static_cast<std::size_t>(num_slots));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int t = 0; t < num_slots; ++t) {
    ModeVector z(q.size());
    for (int n = 0; n < q.size(); ++n) z.set(n, unit(rng) < q.q[static_cast<std::size_t>(n)]);
    out.push_back(std::move(z));
  }
  return out;
}

OverheadReport signaling_overhead(int num_cells, int users_per_cell) {
  if (num_cells < 1 || users_per_cell < 1) throw Error("N and K must be >= 1");
  const long long n = num_cells;
  const long long users = n * users_per_cell;
  const long long weights = 2 * users;
  const long long powers = users;
  OverheadReport r;
  r.scalars_per_frame_sip = n * (n - 1) / 2 + n * users + users * (users - 1) / 2 + weights + powers;
  r.scalars_per_frame_app_fast = users + weights + powers;
  r.scalars_per_window_app_slow = 4 * n * (n - 1);
  return r;
}

}  // namespace dtdd

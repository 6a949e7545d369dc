#include <doctest.h>

#include <limits>
#include <random>

#include "dtdd/power.hpp"
#include "oracles.hpp"

using namespace dtdd;

namespace {

void check_kkt(const std::vector<double>& w, const std::vector<double>& level,
               const WaterFillResult& r, double budget) {
  REQUIRE(r.lambda.has_value());
  const double lambda = *r.lambda;
  double sum = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    sum += r.p[k];
    if (r.p[k] > 0.0) {
      CHECK(w[k] / (r.p[k] + level[k]) == doctest::Approx(lambda).epsilon(1e-8));
    } else {
      CHECK(w[k] / level[k] <= lambda * (1.0 + 1e-8));
    }
  }
  CHECK(std::abs(sum - budget) <= 1e-9 * budget);
}

}  // namespace

TEST_CASE("water-filling examples") {
  SUBCASE("both users active") {
    // Grid search over the simplex puts the optimum at p = (1.5, 0.5), water level 2.
    const std::vector<double> w{1.0, 1.0}, level{0.5, 1.5};
    CHECK(oracle::wf_objective(w, level, {1.5, 0.5}) ==
          doctest::Approx(oracle::wf_grid_best(w, level, 2.0)).epsilon(1e-12));
    const auto r = water_fill(w, level, 2.0);
    CHECK(r.p[0] == doctest::Approx(1.5));
    CHECK(r.p[1] == doctest::Approx(0.5));
    CHECK(1.0 / *r.lambda == doctest::Approx(2.0));
  }
  SUBCASE("weak user deactivated") {
    const std::vector<double> w{1.0, 1.0}, level{0.5, 10.0};
    const auto r = water_fill(w, level, 2.0);
    CHECK(r.p[0] == doctest::Approx(2.0));
    CHECK(r.p[1] == 0.0);
    check_kkt(w, level, r, 2.0);
  }
  SUBCASE("zero-weight user gets nothing") {
    const std::vector<double> w{1.0, 0.0}, level{0.5, 0.1};
    const auto r = water_fill(w, level, 2.0);
    CHECK(r.p[0] == doctest::Approx(2.0));
    CHECK(r.p[1] == 0.0);
  }
  SUBCASE("zero-gain user gets nothing") {
    const double inf = std::numeric_limits<double>::infinity();
    const std::vector<double> w{1.0, 1.0}, level{inf, 0.3};
    const auto r = water_fill(w, level, 2.0);
    CHECK(r.p[0] == 0.0);
    CHECK(r.p[1] == doctest::Approx(2.0));
  }
  SUBCASE("nobody can take power") {
    const double inf = std::numeric_limits<double>::infinity();
    const std::vector<double> w{1.0, 0.0}, level{inf, 0.3};
    const auto r = water_fill(w, level, 2.0);
    CHECK_FALSE(r.lambda.has_value());
    CHECK(r.p[0] == 0.0);
    CHECK(r.p[1] == 0.0);
  }
}

TEST_CASE("water-filling KKT certificate and budget on random cells") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> uw(0.0, 1.0);
  std::uniform_real_distribution<double> ul(-3.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t k = 1 + rng() % 15;
    std::vector<double> w(k), level(k);
    for (std::size_t i = 0; i < k; ++i) {
      w[i] = 1.0 - uw(rng);
      level[i] = std::pow(10.0, ul(rng));
    }
    const double budget = 0.01 + uw(rng);
    const auto r = water_fill(w, level, budget);
    check_kkt(w, level, r, budget);

    // Scaling all weights scales the multiplier and leaves powers unchanged.
    std::vector<double> w3 = w;
    for (auto& x : w3) x *= 3.0;
    const auto r3 = water_fill(w3, level, budget);
    for (std::size_t i = 0; i < k; ++i) CHECK(r3.p[i] == doctest::Approx(r.p[i]).epsilon(1e-8));
    CHECK(*r3.lambda == doctest::Approx(3.0 * *r.lambda).epsilon(1e-8));
  }
}

TEST_CASE("water-filling matches the simplex grid for small cells") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t k = 2 + trial % 2;
    std::vector<double> w(k), level(k);
    for (std::size_t i = 0; i < k; ++i) {
      w[i] = u(rng);
      level[i] = u(rng);
    }
    const auto r = water_fill(w, level, 1.0);
    const double grid = oracle::wf_grid_best(w, level, 1.0, 1000);
    CHECK(oracle::wf_objective(w, level, r.p) >= grid - 1e-4);
  }
}

TEST_CASE("allocate_power applies the UL and DL rules per cell") {
  TopologyConfig cfg;
  cfg.users_per_cell = 4;
  const auto dep = generate_deployment(cfg);
  const auto ch = generate_channels(dep, cfg);
  ChannelStatsAccumulator acc(dep);
  acc.add(ch);
  const PowerBudget budget{0.2, 0.5, 1e-8};
  const auto ref = reference_interference(acc.finish(), {0.5, 0.5}, budget, 4);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  WeightSet weights = WeightSet::uniform(dep.num_users());
  for (auto& x : weights.downlink) x = u(rng);

  const ModeVector z{1, 0, 1, 0, 0, 1, 1};
  const auto alloc = allocate_power(z, ch, ref, weights, budget, dep);
  for (int n = 0; n < 7; ++n) {
    double sum = 0.0;
    for (int b = 0; b < 4; ++b) {
      const double pk = alloc.p[static_cast<std::size_t>(dep.user_at(n, b))];
      CHECK(pk >= 0.0);
      if (!z.is_downlink(n)) CHECK(pk == 0.2);
      sum += pk;
    }
    if (z.is_downlink(n)) {
      CHECK(sum == doctest::Approx(0.5).epsilon(1e-9));
      CHECK(alloc.lambda[static_cast<std::size_t>(n)].has_value());
      // Water levels use sigma^2 + J_n(z).
      const double floor = budget.sigma2 + aggregate_reference(n, z, ref);
      for (int b = 0; b < 4; ++b) {
        const int k = dep.user_at(n, b);
        const double pk = alloc.p[static_cast<std::size_t>(k)];
        if (pk > 0.0)
          CHECK(weights.downlink[static_cast<std::size_t>(k)] / (pk + floor / ch.H(n, k)) ==
                doctest::Approx(*alloc.lambda[static_cast<std::size_t>(n)]).epsilon(1e-8));
      }
    } else {
      CHECK_FALSE(alloc.lambda[static_cast<std::size_t>(n)].has_value());
    }
  }
}

TEST_CASE("allocate_power with all-zero gains in a DL cell") {
  Deployment dep;
  dep.num_cells = 1;
  dep.users_per_cell = 2;
  dep.serving_cell = {0, 0};
  dep.block_of_user = {0, 1};
  ChannelSet ch;
  ch.H = Eigen::MatrixXd::Zero(1, 2);
  ch.U = Eigen::MatrixXd::Zero(2, 2);
  ch.B = Eigen::MatrixXd::Zero(1, 1);
  const auto alloc = allocate_power(ModeVector{1}, ch, ReferenceInterference(1),
                                    WeightSet::uniform(2), PowerBudget{0.2, 0.2, 1e-9}, dep);
  CHECK(alloc.p[0] == 0.0);
  CHECK(alloc.p[1] == 0.0);
}

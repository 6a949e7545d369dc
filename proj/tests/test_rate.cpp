#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "dtdd/rate.hpp"
#include "oracles.hpp"

using namespace dtdd;

namespace {

struct Scenario {
  TopologyConfig cfg;
  Deployment dep;
  ChannelSet ch;
  ReferenceInterference ref;
  WeightSet weights;
  PowerBudget budget{0.2, 0.2, 5e-8};
  InterferenceParams params{0.3, 0.3};

  Scenario(int n, int k, std::uint64_t seed = 4) {
    cfg.num_cells = n;
    cfg.users_per_cell = k;
    cfg.rng_seed = seed;
    dep = generate_deployment(cfg);
    ch = generate_channels(dep, cfg);
    ChannelStatsAccumulator acc(dep);
    for (int d = 0; d < 5; ++d) acc.add(generate_channels(redraw_users(cfg, static_cast<std::uint64_t>(d)), cfg));
    ref = reference_interference(acc.finish(), params, budget, k);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    weights = WeightSet::uniform(dep.num_users());
    for (auto& w : weights.uplink) w = 1.0 - u(rng);
    for (auto& w : weights.downlink) w = 1.0 - u(rng);
  }

  FrameView view() const { return {dep, ch, ref, weights, budget, params}; }
};

// Per-user SINR straight from the definitions.
double oracle_cell(int n, const ModeVector& z, const PowerAllocation& p, const Scenario& s) {
  double total = 0.0;
  for (int k = 0; k < s.dep.num_users(); ++k) {
    if (s.dep.serving_cell[static_cast<std::size_t>(k)] != n) continue;
    const double i = oracle::interference(k, z, p.p, s.ch, s.params.c1, s.params.c2, s.dep);
    const double sinr = s.ch.H(n, k) * p.p[static_cast<std::size_t>(k)] / (s.budget.sigma2 + i);
    total += s.weights.weight(k, z[n]) * std::log2(1.0 + sinr);
  }
  return total;
}

Deployment isolated(int n) {
  Deployment dep;
  dep.num_cells = n;
  dep.users_per_cell = 1;
  for (int c = 0; c < n; ++c) {
    dep.serving_cell.push_back(c);
    dep.block_of_user.push_back(0);
  }
  return dep;
}

}  // namespace

TEST_CASE("wsr_cell closed-form cases") {
  const auto dep = isolated(2);
  ChannelSet ch;
  ch.H = Eigen::MatrixXd::Zero(2, 2);
  ch.U = Eigen::MatrixXd::Zero(2, 2);
  ch.B = Eigen::MatrixXd::Zero(2, 2);
  ch.H(0, 0) = 1.0;
  ch.H(1, 1) = 1.0;
  const ReferenceInterference ref(2);
  const WeightSet w = WeightSet::uniform(2);
  PowerAllocation p;
  p.p = {1.0, std::pow(2.0, 3.5) - 1.0};
  const FrameView view{dep, ch, ref, w, PowerBudget{1.0, 1.0, 1.0}, {1.0, 1.0}};
  const ModeVector z{1, 1};

  CHECK(wsr_cell(0, z, p, view, PayoffFlavor::kSip) == doctest::Approx(1.0));
  CHECK(wsr_network(z, p, view, PayoffFlavor::kSip) == doctest::Approx(4.5));

  const WeightSet zero{{0.0, 0.0}, {0.0, 0.0}};
  const FrameView silent{dep, ch, ref, zero, PowerBudget{1.0, 1.0, 1.0}, {1.0, 1.0}};
  CHECK(wsr_network(z, p, silent, PayoffFlavor::kSip) == 0.0);
  CHECK(wsr_network(z, p, silent, PayoffFlavor::kApp) == 0.0);
}

TEST_CASE("network WSR adds per-cell values") {
  const auto dep = isolated(2);
  ChannelSet ch;
  ch.H = Eigen::MatrixXd::Zero(2, 2);
  ch.U = Eigen::MatrixXd::Zero(2, 2);
  ch.B = Eigen::MatrixXd::Zero(2, 2);
  ch.H(0, 0) = ch.H(1, 1) = 1.0;
  const ReferenceInterference ref(2);
  const WeightSet w = WeightSet::uniform(2);
  PowerAllocation p;
  p.p = {3.0, std::pow(2.0, 3.5) - 1.0};  // cell rates 2.0 and 3.5
  const FrameView view{dep, ch, ref, w, PowerBudget{1.0, 1.0, 1.0}, {1.0, 1.0}};
  CHECK(wsr_cell(0, ModeVector{0, 0}, p, view, PayoffFlavor::kSip) == doctest::Approx(2.0));
  CHECK(wsr_network(ModeVector{0, 0}, p, view, PayoffFlavor::kSip) == doctest::Approx(5.5));
}

TEST_CASE("single cell: SIP and APP coincide and equal the network value") {
  const Scenario s(1, 6);
  const auto view = s.view();
  for (int mode : {0, 1}) {
    const ModeVector z{mode};
    const auto p = allocate_power(z, s.ch, s.ref, s.weights, s.budget, s.dep);
    const double sip = wsr_cell(0, z, p, view, PayoffFlavor::kSip);
    CHECK(sip == wsr_cell(0, z, p, view, PayoffFlavor::kApp));
    CHECK(sip == wsr_network(z, p, view, PayoffFlavor::kSip));
    CHECK(sip > 0.0);
  }
}

TEST_CASE("wsr_cell and wsr_network match the per-user SINR oracle") {
  SUBCASE("K = 3") {
    const Scenario s(7, 3);
    const auto view = s.view();
    std::mt19937_64 rng(1);
    for (int t = 0; t < 20; ++t) {
      const auto z = ModeVector::from_index(7, static_cast<std::uint32_t>(rng() % 128));
      const auto p = allocate_power(z, s.ch, s.ref, s.weights, s.budget, s.dep);
      for (int n = 0; n < 7; ++n)
        CHECK(wsr_cell(n, z, p, view, PayoffFlavor::kSip) ==
              doctest::Approx(oracle_cell(n, z, p, s)).epsilon(1e-12));
    }
  }
  SUBCASE("N = 4 network") {
    const Scenario s(4, 5);
    const auto view = s.view();
    for (std::uint32_t idx = 0; idx < 16; ++idx) {
      const auto z = ModeVector::from_index(4, idx);
      const auto p = allocate_power(z, s.ch, s.ref, s.weights, s.budget, s.dep);
      double expect = 0.0;
      for (int n = 0; n < 4; ++n) expect += oracle_cell(n, z, p, s);
      CHECK(wsr_network(z, p, view, PayoffFlavor::kSip) == doctest::Approx(expect).epsilon(1e-12));
    }
  }
}

TEST_CASE("APP equals SIP when the lookup carries the true interference") {
  const Scenario s(7, 4);
  const auto view = s.view();
  for (std::uint32_t idx = 0; idx < 128; idx += 9) {
    const auto z = ModeVector::from_index(7, idx);
    const auto p = allocate_power(z, s.ch, s.ref, s.weights, s.budget, s.dep);
    const auto truth = total_interference_all(z, p, s.ch, s.params, s.dep);
    for (int n = 0; n < 7; ++n)
      CHECK(wsr_cell_with_interference(n, z, p, view, truth) ==
            wsr_cell(n, z, p, view, PayoffFlavor::kSip));
  }
}

TEST_CASE("SIP payoff of a DL cell degrades with c1 next to UL neighbours") {
  Scenario s(7, 4);
  const ModeVector z{1, 0, 0, 1, 0, 1, 0};
  const auto p = allocate_power(z, s.ch, s.ref, s.weights, s.budget, s.dep);
  double prev = std::numeric_limits<double>::infinity();
  for (double c1 : {0.0, 0.25, 0.5, 1.0}) {
    s.params = {c1, 0.3};
    const double v = wsr_cell(0, z, p, s.view(), PayoffFlavor::kSip);
    CHECK(v <= prev);
    prev = v;
  }
  double prev_ul = std::numeric_limits<double>::infinity();
  for (double c2 : {0.0, 0.25, 0.5, 1.0}) {
    s.params = {0.3, c2};
    const double v = wsr_cell(1, z, p, s.view(), PayoffFlavor::kSip);
    CHECK(v <= prev_ul);
    prev_ul = v;
  }
}

TEST_CASE("relabelling user blocks consistently leaves cell payoffs unchanged") {
  const Scenario s(7, 4);
  // Swap blocks 0 and 2 in every cell.
  auto swap = [&](int k) {
    const int n = k / 4, b = k % 4;
    return n * 4 + (b == 0 ? 2 : b == 2 ? 0 : b);
  };
  ChannelSet ch2 = s.ch;
  WeightSet w2 = s.weights;
  for (int j = 0; j < s.dep.num_users(); ++j) {
    w2.uplink[static_cast<std::size_t>(swap(j))] = s.weights.uplink[static_cast<std::size_t>(j)];
    w2.downlink[static_cast<std::size_t>(swap(j))] = s.weights.downlink[static_cast<std::size_t>(j)];
    for (int n = 0; n < 7; ++n) ch2.H(n, swap(j)) = s.ch.H(n, j);
    for (int k = 0; k < s.dep.num_users(); ++k) ch2.U(swap(j), swap(k)) = s.ch.U(j, k);
  }
  const FrameView a = s.view();
  const FrameView b{s.dep, ch2, s.ref, w2, s.budget, s.params};
  for (std::uint32_t idx = 0; idx < 128; idx += 13) {
    const auto z = ModeVector::from_index(7, idx);
    const auto wa = evaluate_profile(z, a, PayoffFlavor::kSip);
    const auto wb = evaluate_profile(z, b, PayoffFlavor::kSip);
    for (int n = 0; n < 7; ++n) CHECK(wa[static_cast<std::size_t>(n)] == doctest::Approx(wb[static_cast<std::size_t>(n)]).epsilon(1e-12));
  }
}

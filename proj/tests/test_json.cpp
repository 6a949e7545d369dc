#include <doctest.h>

#include "dtdd/error.hpp"
#include "dtdd/json_io.hpp"

using namespace dtdd;

TEST_CASE("deployment and channels round-trip through JSON") {
  TopologyConfig cfg;
  cfg.num_cells = 3;
  cfg.users_per_cell = 2;
  const auto dep = generate_deployment(cfg);
  const auto ch = generate_channels(dep, cfg);

  const Deployment dep2 = nlohmann::json(dep).get<Deployment>();
  CHECK(dep2.num_cells == 3);
  CHECK(dep2.user_positions == dep.user_positions);
  CHECK(dep2.bs_positions == dep.bs_positions);
  CHECK(dep2.serving_cell == dep.serving_cell);
  CHECK(dep2.block_of_user == dep.block_of_user);

  const ChannelSet ch2 = nlohmann::json::parse(nlohmann::json(ch).dump()).get<ChannelSet>();
  CHECK(ch2.H == ch.H);
  CHECK(ch2.U == ch.U);
  CHECK(ch2.B == ch.B);
}

TEST_CASE("reference interference and equilibrium reports round-trip") {
  ReferenceInterference ref(2);
  ref.at(0, 1, 1, 0) = 0.25;
  ref.at(1, 0, 0, 1) = 3.5;
  const auto ref2 = nlohmann::json(ref).get<ReferenceInterference>();
  CHECK(ref2(0, 1, 1, 0) == 0.25);
  CHECK(ref2(1, 0, 0, 1) == 3.5);
  CHECK(ref2(0, 1, 0, 0) == 0.0);

  EquilibriumReport r;
  r.q = {0.25, 1.0};
  r.residuals = {0.0, 2.0};
  r.boundary_flags = {0, 1};
  r.social_welfare = 7.5;
  r.solver_starts_used = 32;
  r.distinct_equilibria = 2;
  const auto r2 = nlohmann::json(r).get<EquilibriumReport>();
  CHECK(r2.q == r.q);
  CHECK(r2.residuals == r.residuals);
  CHECK(r2.boundary_flags == r.boundary_flags);
  CHECK(r2.social_welfare == 7.5);
  CHECK(r2.solver_starts_used == 32);
  CHECK(r2.distinct_equilibria == 2);
}

TEST_CASE("scenario_from_json") {
  const auto j = nlohmann::json::parse(R"({
    "topology": {"num_cells": 4, "users_per_cell": 6, "cell_side": 250},
    "c": [0, 0.5],
    "k": [5, 10],
    "tx_power_dbm": 20,
    "slots_per_frame": 8,
    "frames": 4,
    "schemes": ["sip", "stdd"],
    "seeds": 3,
    "solver": {"starts": 16},
    "switchpoint_scope": "global"
  })");
  const auto cfg = scenario_from_json(j);
  CHECK(cfg.topology.num_cells == 4);
  CHECK(cfg.topology.cell_side == 250.0);
  CHECK(cfg.c_values == std::vector<double>{0.0, 0.5});
  CHECK(cfg.k_values == std::vector<int>{5, 10});
  CHECK(cfg.tx_power_dbm == 20.0);
  CHECK(cfg.slots_per_frame == 8);
  CHECK(cfg.frames == 4);
  CHECK(cfg.schemes == std::vector<Scheme>{Scheme::kSip, Scheme::kStdd});
  CHECK(cfg.seeds == std::vector<std::uint64_t>{1, 2, 3});
  CHECK(cfg.solver.starts == 16);
  CHECK(cfg.switchpoint_scope == SwitchpointScope::kGlobal);

  const auto scalar = scenario_from_json(nlohmann::json::parse(R"({"c": 0.3})"));
  CHECK(scalar.c_values == std::vector<double>{0.3});
  CHECK_THROWS(scenario_from_json(nlohmann::json::parse(R"({"schemes": ["bogus"]})")));
}

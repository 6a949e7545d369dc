#pragma once

#include <json.hpp>

#include "dtdd/game.hpp"
#include "dtdd/harness.hpp"
#include "dtdd/interference.hpp"
#include "dtdd/topology.hpp"

namespace dtdd {

// Positions are [x, y] pairs in meters; matrices are row-major nested arrays.
void to_json(nlohmann::json& j, const Deployment& dep);
void from_json(const nlohmann::json& j, Deployment& dep);
void to_json(nlohmann::json& j, const ChannelSet& ch);
void from_json(const nlohmann::json& j, ChannelSet& ch);

// Keys "dl_from_dl", "dl_from_ul", "ul_from_dl", "ul_from_ul", each an N x N
// matrix indexed [victim][source].
void to_json(nlohmann::json& j, const ReferenceInterference& ref);
void from_json(const nlohmann::json& j, ReferenceInterference& ref);

void to_json(nlohmann::json& j, const EquilibriumReport& r);
void from_json(const nlohmann::json& j, EquilibriumReport& r);
void to_json(nlohmann::json& j, const EquilibriumRecord& r);

// Every key is optional; missing keys keep the ScenarioConfig defaults.
ScenarioConfig scenario_from_json(const nlohmann::json& j);

}  // namespace dtdd

#pragma once

// JSON round-tripping for the configuration types and one-way export of
// result types. Variant-carrying types (speed and direction laws) put the
// variant tag under the key "type". Invalid or inconsistent documents throw
// std::invalid_argument with a message naming the offending key.

#include <json.hpp>

#include "hosim/model.hpp"

namespace hosim {

nlohmann::json to_json(const SpeedDistribution& d);
SpeedDistribution speed_from_json(const nlohmann::json& j);

nlohmann::json to_json(const DirectionDistribution& d);
DirectionDistribution direction_from_json(const nlohmann::json& j);

nlohmann::json to_json(const DroneNetworkModel& m);
DroneNetworkModel model_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SweepParams& p);
SweepParams sweep_from_json(const nlohmann::json& j);

nlohmann::json to_json(const HybridTierConfig& cfg);
HybridTierConfig hybrid_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SimulationConfig& cfg);
SimulationConfig simconfig_from_json(const nlohmann::json& j);

// Result exports. An infinite mean sojourn is emitted as null plus the
// boolean flag "mean_sojourn_infinite" so downstream CSV/JSON consumers
// never see a floating-point infinity.
nlohmann::json to_json(const CcdfCurve& curve);
nlohmann::json to_json(const RateReport& report);

}  // namespace hosim

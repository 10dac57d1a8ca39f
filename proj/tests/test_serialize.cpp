#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "hosim/model.hpp"
#include "hosim/serialize.hpp"

using namespace hosim;
using nlohmann::json;

namespace {
json roundtrip_speed(const json& j) { return to_json(speed_from_json(j)); }
}  // namespace

TEST_CASE("speed laws round-trip through JSON") {
  const SpeedDistribution laws[] = {
      SpeedDistribution::constant(12.5),
      SpeedDistribution::uniform_range(5.0, 25.0),
      SpeedDistribution::exponential(15.0),
      SpeedDistribution::two_point(30.0, 0.25),
      SpeedDistribution::discrete({{5.0, 0.5}, {25.0, 0.5}}),
  };
  for (const SpeedDistribution& d : laws) {
    const json j = to_json(d);
    const SpeedDistribution back = speed_from_json(j);
    CHECK(to_json(back) == j);
    CHECK(back.mean() == doctest::Approx(d.mean()).epsilon(1e-15));
  }
  CHECK(to_json(SpeedDistribution::constant(12.5))["type"] == "Constant");
  CHECK(to_json(SpeedDistribution::uniform_range(5.0, 25.0))["type"] ==
        "UniformRange");
  CHECK(to_json(SpeedDistribution::exponential(15.0))["type"] == "Exponential");
  CHECK(to_json(SpeedDistribution::two_point(30.0, 0.25))["type"] == "TwoPoint");
  const json disc = to_json(SpeedDistribution::discrete({{5.0, 0.5}, {25.0, 0.5}}));
  CHECK(disc["type"] == "Discrete");
  REQUIRE(disc["points"].is_array());
  CHECK(disc["points"].size() == 2);
  CHECK(disc["points"][0]["speed"] == 5.0);
  CHECK(disc["points"][0]["weight"] == 0.5);
}

TEST_CASE("speed law parsing rejects malformed documents") {
  CHECK_THROWS_AS(speed_from_json(json::parse(R"({"c": 10.0})")),
                  std::invalid_argument);  // no type tag
  CHECK_THROWS_AS(speed_from_json(json::parse(R"({"type": "Gamma"})")),
                  std::invalid_argument);  // unknown tag
  CHECK_THROWS_AS(speed_from_json(json::parse(R"({"type": "Constant"})")),
                  std::invalid_argument);  // missing parameter
  CHECK_THROWS_AS(
      speed_from_json(json::parse(R"({"type": "Constant", "c": "fast"})")),
      std::invalid_argument);  // wrong scalar type
  CHECK_THROWS_AS(
      speed_from_json(json::parse(R"({"type": "Constant", "c": -3.0})")),
      std::invalid_argument);  // fails model validation
  CHECK_THROWS_AS(
      speed_from_json(
          json::parse(R"({"type": "UniformRange", "a": 9.0, "b": 4.0})")),
      std::invalid_argument);
  CHECK_THROWS_AS(
      speed_from_json(json::parse(R"({"type": "Discrete", "points": []})")),
      std::invalid_argument);
  CHECK_THROWS_AS(
      speed_from_json(json::parse(
          R"({"type": "Discrete", "points": [{"speed": 5.0, "weight": 0.4}]})")),
      std::invalid_argument);  // weights do not sum to one
  CHECK_THROWS_AS(speed_from_json(json::parse(
                      R"({"type": "Discrete", "points": {"speed": 5.0}})")),
                  std::invalid_argument);  // points must be an array
}

TEST_CASE("direction laws round-trip through JSON") {
  const json uni = to_json(DirectionDistribution::uniform_circle());
  CHECK(uni["type"] == "UniformCircle");
  CHECK(to_json(direction_from_json(uni)) == uni);

  const DirectionDistribution atoms = DirectionDistribution::discrete(
      {{0.0, 0.25}, {std::numbers::pi, 0.75}});
  const json j = to_json(atoms);
  CHECK(j["type"] == "Discrete");
  CHECK(j["points"][1]["angle"] == std::numbers::pi);
  CHECK(to_json(direction_from_json(j)) == j);

  CHECK_THROWS_AS(direction_from_json(json::parse(R"({"type": "Spiral"})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      direction_from_json(json::parse(
          R"({"type": "Discrete", "points": [{"angle": 0.0, "weight": 0.2}]})")),
      std::invalid_argument);
}

TEST_CASE("network model round-trips and applies defaults") {
  const DroneNetworkModel m(5e-4, 20.0,
                            SpeedDistribution::uniform_range(5.0, 25.0),
                            DirectionDistribution::uniform_circle());
  const json j = to_json(m);
  CHECK(j["lambda"] == 5e-4);
  CHECK(j["height_h"] == 20.0);
  const DroneNetworkModel back = model_from_json(j);
  CHECK(to_json(back) == j);

  const DroneNetworkModel sparse = model_from_json(json::parse(
      R"({"lambda": 1e-4, "speeds": {"type": "Constant", "c": 10.0}})"));
  CHECK(sparse.height() == 0.0);
  CHECK(to_json(sparse)["directions"]["type"] == "UniformCircle");

  CHECK_THROWS_AS(model_from_json(json::parse(
                      R"({"speeds": {"type": "Constant", "c": 10.0}})")),
                  std::invalid_argument);  // lambda required
  CHECK_THROWS_AS(model_from_json(json::parse(
                      R"({"lambda": 0.0,
                          "speeds": {"type": "Constant", "c": 10.0}})")),
                  std::invalid_argument);
}

TEST_CASE("sweep parameters round-trip and validate") {
  const SweepParams p{7.0, 9.0, 13.0, 2.0, 1.3};
  const json j = to_json(p);
  CHECK(j == json::parse(
                 R"({"v": 7.0, "r0": 9.0, "v0": 13.0, "theta0": 2.0, "s": 1.3})"));
  const SweepParams back = sweep_from_json(j);
  CHECK(to_json(back) == j);
  CHECK_THROWS_AS(
      sweep_from_json(json::parse(
          R"({"v": 7.0, "r0": 0.0, "v0": 13.0, "theta0": 2.0, "s": 1.3})")),
      std::invalid_argument);
  CHECK_THROWS_AS(sweep_from_json(json::parse(R"({"v": 7.0})")),
                  std::invalid_argument);
}

TEST_CASE("two-tier configuration round-trips and applies defaults") {
  HybridTierConfig cfg;
  cfg.tier1 = {2.0, 20.0, 5e-4, 4.0};
  cfg.tier2 = {1.0, 0.0, 1e-4, 3.5};
  const json j = to_json(cfg);
  CHECK(j["B1"] == 2.0);
  CHECK(j["h1"] == 20.0);
  CHECK(j["lambda2"] == 1e-4);
  CHECK(j["alpha2"] == 3.5);
  const HybridTierConfig back = hybrid_from_json(j);
  CHECK(to_json(back) == j);

  const HybridTierConfig defaults =
      hybrid_from_json(json::parse(R"({"lambda1": 5e-4, "lambda2": 1e-4})"));
  CHECK(defaults.tier1.bias == 1.0);
  CHECK(defaults.tier1.height == 0.0);
  CHECK(defaults.tier2.alpha == 4.0);

  CHECK_THROWS_AS(hybrid_from_json(json::parse(R"({"lambda1": 5e-4})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(hybrid_from_json(json::parse(
                      R"({"lambda1": 5e-4, "lambda2": 1e-4, "alpha1": 0.0})")),
                  std::invalid_argument);
}

TEST_CASE("simulation configuration round-trips and applies defaults") {
  SimulationConfig cfg;
  cfg.horizon_T = 50.0;
  cfg.replications = 40;
  cfg.seed = 99;
  cfg.window_epsilon = 1e-5;
  cfg.speed_quantile_epsilon = 1e-7;
  const json j = to_json(cfg);
  const SimulationConfig back = simconfig_from_json(j);
  CHECK(to_json(back) == j);

  const SimulationConfig defaults = simconfig_from_json(json::parse("{}"));
  CHECK(defaults.horizon_T == 200.0);
  CHECK(defaults.replications == 200);
  CHECK(defaults.seed == 1);
  CHECK(defaults.window_epsilon == 1e-6);

  CHECK_THROWS_AS(simconfig_from_json(json::parse(R"({"replications": 0})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(simconfig_from_json(json::parse(R"({"horizon_T": -1.0})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(simconfig_from_json(json::parse(R"({"window_epsilon": 1.0})")),
                  std::invalid_argument);
}

TEST_CASE("ccdf export includes the confidence band only when present") {
  const CcdfCurve analytic =
      CcdfCurve::analytic({0.0, 1.0, 2.0}, {1.0, 0.6, 0.3}, 1e-9);
  const json ja = to_json(analytic);
  CHECK(ja["grid"] == json::parse("[0.0, 1.0, 2.0]"));
  CHECK(ja["values"] == json::parse("[1.0, 0.6, 0.3]"));
  CHECK_FALSE(ja.contains("ci_halfwidth"));

  const CcdfCurve empirical = CcdfCurve::empirical(
      {0.0, 1.0, 2.0}, {1.0, 0.6, 0.3}, {0.0, 0.01, 0.01});
  const json je = to_json(empirical);
  REQUIRE(je.contains("ci_halfwidth"));
  CHECK(je["ci_halfwidth"][1] == 0.01);
}

TEST_CASE("rate report export never emits floating-point infinities") {
  const RateReport analytic = RateReport::analytic(0.25);
  const json ja = to_json(analytic);
  CHECK(ja["handover_rate"] == 0.25);
  CHECK(ja["mean_sojourn"] == 4.0);
  CHECK(ja["mean_sojourn_infinite"] == false);
  CHECK(ja["method"] == "analytic");
  CHECK_FALSE(ja.contains("ci_halfwidth"));

  RateReport frozen;
  frozen.handover_rate = 0.0;
  frozen.mean_sojourn = std::numeric_limits<double>::infinity();
  frozen.method = RateReport::Method::MonteCarlo;
  frozen.ci_halfwidth = 0.002;
  const json jf = to_json(frozen);
  CHECK(jf["mean_sojourn"].is_null());
  CHECK(jf["mean_sojourn_infinite"] == true);
  CHECK(jf["method"] == "montecarlo");
  CHECK(jf["ci_halfwidth"] == 0.002);
  // the dump must stay strictly-valid JSON (no bare Infinity tokens)
  const json reparsed = json::parse(jf.dump());
  CHECK(reparsed["mean_sojourn"].is_null());
  CHECK(reparsed == jf);
}

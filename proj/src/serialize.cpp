#include "hosim/serialize.hpp"

#include <stdexcept>
#include <string>

namespace hosim {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) {
  throw std::invalid_argument("config: " + what);
}

const json& need(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) bad(std::string("missing key \"") + key + "\"");
  return *it;
}

double need_number(const json& j, const char* key) {
  const json& v = need(j, key);
  if (!v.is_number()) bad(std::string("key \"") + key + "\" must be a number");
  return v.get<double>();
}

double number_or(const json& j, const char* key, double fallback) {
  const auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number()) bad(std::string("key \"") + key + "\" must be a number");
  return it->get<double>();
}

std::string need_string(const json& j, const char* key) {
  const json& v = need(j, key);
  if (!v.is_string()) bad(std::string("key \"") + key + "\" must be a string");
  return v.get<std::string>();
}

}  // namespace

json to_json(const SpeedDistribution& d) {
  json j;
  switch (d.kind()) {
    case SpeedDistribution::Kind::Constant:
      j["type"] = "Constant";
      j["c"] = d.constant_speed();
      break;
    case SpeedDistribution::Kind::UniformRange:
      j["type"] = "UniformRange";
      j["a"] = d.range_lo();
      j["b"] = d.range_hi();
      break;
    case SpeedDistribution::Kind::Exponential:
      j["type"] = "Exponential";
      j["mean"] = d.exponential_mean();
      break;
    case SpeedDistribution::Kind::TwoPoint:
      j["type"] = "TwoPoint";
      j["v"] = d.two_point_speed();
      j["p_m"] = d.two_point_p_move();
      break;
    case SpeedDistribution::Kind::Discrete: {
      j["type"] = "Discrete";
      json points = json::array();
      for (const SpeedAtom& a : d.atoms()) {
        points.push_back({{"speed", a.speed}, {"weight", a.weight}});
      }
      j["points"] = std::move(points);
      break;
    }
  }
  return j;
}

SpeedDistribution speed_from_json(const json& j) {
  if (!j.is_object()) bad("speed distribution must be an object");
  const std::string type = need_string(j, "type");
  if (type == "Constant") {
    return SpeedDistribution::constant(need_number(j, "c"));
  }
  if (type == "UniformRange") {
    return SpeedDistribution::uniform_range(need_number(j, "a"),
                                            need_number(j, "b"));
  }
  if (type == "Exponential") {
    return SpeedDistribution::exponential(need_number(j, "mean"));
  }
  if (type == "TwoPoint") {
    return SpeedDistribution::two_point(need_number(j, "v"),
                                        need_number(j, "p_m"));
  }
  if (type == "Discrete") {
    const json& points = need(j, "points");
    if (!points.is_array()) bad("\"points\" must be an array");
    std::vector<SpeedAtom> atoms;
    atoms.reserve(points.size());
    for (const json& p : points) {
      atoms.push_back({need_number(p, "speed"), need_number(p, "weight")});
    }
    return SpeedDistribution::discrete(std::move(atoms));
  }
  bad("unknown speed distribution type \"" + type + "\"");
}

json to_json(const DirectionDistribution& d) {
  json j;
  if (d.is_uniform()) {
    j["type"] = "UniformCircle";
    return j;
  }
  j["type"] = "Discrete";
  json points = json::array();
  for (const DirectionAtom& a : d.atoms()) {
    points.push_back({{"angle", a.angle}, {"weight", a.weight}});
  }
  j["points"] = std::move(points);
  return j;
}

DirectionDistribution direction_from_json(const json& j) {
  if (!j.is_object()) bad("direction distribution must be an object");
  const std::string type = need_string(j, "type");
  if (type == "UniformCircle") return DirectionDistribution::uniform_circle();
  if (type == "Discrete") {
    const json& points = need(j, "points");
    if (!points.is_array()) bad("\"points\" must be an array");
    std::vector<DirectionAtom> atoms;
    atoms.reserve(points.size());
    for (const json& p : points) {
      atoms.push_back({need_number(p, "angle"), need_number(p, "weight")});
    }
    return DirectionDistribution::discrete(std::move(atoms));
  }
  bad("unknown direction distribution type \"" + type + "\"");
}

json to_json(const DroneNetworkModel& m) {
  return json{{"lambda", m.lambda()},
              {"height_h", m.height()},
              {"speeds", to_json(m.speeds())},
              {"directions", to_json(m.directions())}};
}

DroneNetworkModel model_from_json(const json& j) {
  if (!j.is_object()) bad("model must be an object");
  const auto dir_it = j.find("directions");
  DirectionDistribution directions =
      dir_it == j.end() ? DirectionDistribution::uniform_circle()
                        : direction_from_json(*dir_it);
  return DroneNetworkModel(need_number(j, "lambda"),
                           number_or(j, "height_h", 0.0),
                           speed_from_json(need(j, "speeds")),
                           std::move(directions));
}

json to_json(const SweepParams& p) {
  return json{{"v", p.v}, {"r0", p.r0}, {"v0", p.v0},
              {"theta0", p.theta0}, {"s", p.s}};
}

SweepParams sweep_from_json(const json& j) {
  if (!j.is_object()) bad("sweep params must be an object");
  SweepParams p;
  p.v = need_number(j, "v");
  p.r0 = need_number(j, "r0");
  p.v0 = need_number(j, "v0");
  p.theta0 = need_number(j, "theta0");
  p.s = need_number(j, "s");
  p.validate();
  return p;
}

json to_json(const HybridTierConfig& cfg) {
  return json{{"B1", cfg.tier1.bias},     {"h1", cfg.tier1.height},
              {"lambda1", cfg.tier1.lambda}, {"alpha1", cfg.tier1.alpha},
              {"B2", cfg.tier2.bias},     {"h2", cfg.tier2.height},
              {"lambda2", cfg.tier2.lambda}, {"alpha2", cfg.tier2.alpha}};
}

HybridTierConfig hybrid_from_json(const json& j) {
  if (!j.is_object()) bad("hybrid tier config must be an object");
  HybridTierConfig cfg;
  cfg.tier1.bias = number_or(j, "B1", cfg.tier1.bias);
  cfg.tier1.height = number_or(j, "h1", cfg.tier1.height);
  cfg.tier1.lambda = need_number(j, "lambda1");
  cfg.tier1.alpha = number_or(j, "alpha1", cfg.tier1.alpha);
  cfg.tier2.bias = number_or(j, "B2", cfg.tier2.bias);
  cfg.tier2.height = number_or(j, "h2", cfg.tier2.height);
  cfg.tier2.lambda = need_number(j, "lambda2");
  cfg.tier2.alpha = number_or(j, "alpha2", cfg.tier2.alpha);
  cfg.validate();
  return cfg;
}

json to_json(const SimulationConfig& cfg) {
  return json{{"horizon_T", cfg.horizon_T},
              {"replications", cfg.replications},
              {"seed", cfg.seed},
              {"window_epsilon", cfg.window_epsilon},
              {"speed_quantile_epsilon", cfg.speed_quantile_epsilon}};
}

SimulationConfig simconfig_from_json(const json& j) {
  if (!j.is_object()) bad("simulation config must be an object");
  SimulationConfig cfg;
  cfg.horizon_T = number_or(j, "horizon_T", cfg.horizon_T);
  const auto reps = j.find("replications");
  if (reps != j.end()) {
    if (!reps->is_number_integer()) bad("\"replications\" must be an integer");
    cfg.replications = reps->get<int>();
  }
  const auto seed = j.find("seed");
  if (seed != j.end()) {
    if (!seed->is_number_unsigned() && !seed->is_number_integer()) {
      bad("\"seed\" must be an integer");
    }
    cfg.seed = seed->get<std::uint64_t>();
  }
  cfg.window_epsilon = number_or(j, "window_epsilon", cfg.window_epsilon);
  cfg.speed_quantile_epsilon =
      number_or(j, "speed_quantile_epsilon", cfg.speed_quantile_epsilon);
  cfg.validate();
  return cfg;
}

json to_json(const CcdfCurve& curve) {
  json j{{"grid", curve.grid()}, {"values", curve.values()}};
  if (curve.has_ci()) j["ci_halfwidth"] = curve.ci_halfwidth();
  return j;
}

json to_json(const RateReport& report) {
  json j;
  j["handover_rate"] = report.handover_rate;
  if (report.sojourn_is_infinite()) {
    j["mean_sojourn"] = nullptr;
    j["mean_sojourn_infinite"] = true;
  } else {
    j["mean_sojourn"] = report.mean_sojourn;
    j["mean_sojourn_infinite"] = false;
  }
  j["method"] =
      report.method == RateReport::Method::Analytic ? "analytic" : "montecarlo";
  if (report.ci_halfwidth) j["ci_halfwidth"] = *report.ci_halfwidth;
  return j;
}

}  // namespace hosim

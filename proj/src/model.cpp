#include "hosim/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "hosim/quadrature.hpp"
#include "hosim/rng.hpp"

namespace hosim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double normalize_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return r;
}

void check_weights_sum(const double sum, const char* what) {
  if (std::fabs(sum - 1.0) > 1e-12) {
    throw std::invalid_argument(std::string(what) +
                                ": weights must sum to 1 within 1e-12");
  }
}

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

}  // namespace

SpeedDistribution::SpeedDistribution(Kind kind, double p1, double p2,
                                     std::vector<SpeedAtom> atoms)
    : kind_(kind), p1_(p1), p2_(p2), atoms_(std::move(atoms)) {}

SpeedDistribution SpeedDistribution::constant(double c) {
  if (!(c >= 0.0)) throw std::invalid_argument("Constant: speed must be >= 0");
  return {Kind::Constant, c, 0.0, {{c, 1.0}}};
}

SpeedDistribution SpeedDistribution::uniform_range(double a, double b) {
  if (!(a >= 0.0) || !(a < b)) {
    throw std::invalid_argument("UniformRange: need 0 <= a < b");
  }
  return {Kind::UniformRange, a, b, {}};
}

SpeedDistribution SpeedDistribution::exponential(double mean) {
  if (!(mean > 0.0)) throw std::invalid_argument("Exponential: mean must be > 0");
  return {Kind::Exponential, mean, 0.0, {}};
}

SpeedDistribution SpeedDistribution::two_point(double v, double p_move) {
  if (!(v > 0.0)) throw std::invalid_argument("TwoPoint: v must be > 0");
  if (!(p_move > 0.0) || !(p_move <= 1.0)) {
    throw std::invalid_argument("TwoPoint: need 0 < p_m <= 1");
  }
  return {Kind::TwoPoint, v, p_move, {{0.0, 1.0 - p_move}, {v, p_move}}};
}

SpeedDistribution SpeedDistribution::discrete(std::vector<SpeedAtom> atoms) {
  if (atoms.empty()) throw std::invalid_argument("Discrete: no atoms");
  double sum = 0.0;
  for (const auto& a : atoms) {
    if (!(a.speed >= 0.0)) {
      throw std::invalid_argument("Discrete: speeds must be >= 0");
    }
    if (!(a.weight >= 0.0)) {
      throw std::invalid_argument("Discrete: weights must be >= 0");
    }
    sum += a.weight;
  }
  check_weights_sum(sum, "Discrete");
  std::sort(atoms.begin(), atoms.end(),
            [](const SpeedAtom& x, const SpeedAtom& y) { return x.speed < y.speed; });
  return {Kind::Discrete, 0.0, 0.0, std::move(atoms)};
}

double SpeedDistribution::mean() const {
  switch (kind_) {
    case Kind::Constant:
      return p1_;
    case Kind::UniformRange:
      return 0.5 * (p1_ + p2_);
    case Kind::Exponential:
      return p1_;
    case Kind::TwoPoint:
      return p1_ * p2_;
    case Kind::Discrete: {
      double m = 0.0;
      for (const auto& a : atoms_) m += a.speed * a.weight;
      return m;
    }
  }
  return 0.0;
}

std::string SpeedDistribution::name() const {
  switch (kind_) {
    case Kind::Constant:
      return "Constant(" + fmt(p1_) + ")";
    case Kind::UniformRange:
      return "Uniform(" + fmt(p1_) + "," + fmt(p2_) + ")";
    case Kind::Exponential:
      return "Exponential(" + fmt(p1_) + ")";
    case Kind::TwoPoint:
      return "TwoPoint(" + fmt(p1_) + ",p=" + fmt(p2_) + ")";
    case Kind::Discrete: {
      std::string s = "Discrete{";
      for (std::size_t i = 0; i < atoms_.size(); ++i) {
        if (i) s += ";";
        s += "(" + fmt(atoms_[i].speed) + "," + fmt(atoms_[i].weight) + ")";
      }
      return s + "}";
    }
  }
  return "?";
}

double SpeedDistribution::max_speed(double quantile_eps) const {
  switch (kind_) {
    case Kind::Constant:
      return p1_;
    case Kind::UniformRange:
      return p2_;
    case Kind::Exponential:
      return -p1_ * std::log(quantile_eps);
    case Kind::TwoPoint:
      return p1_;
    case Kind::Discrete:
      return atoms_.back().speed;  // atoms sorted by speed
  }
  return 0.0;
}

std::vector<double> SpeedDistribution::critical_speeds(
    double quantile_eps) const {
  std::vector<double> out;
  switch (kind_) {
    case Kind::UniformRange:
      out = {p1_, p2_};
      break;
    case Kind::Exponential:
      out = {0.0, max_speed(quantile_eps)};
      break;
    default:
      for (const auto& a : atoms_) out.push_back(a.speed);
      break;
  }
  return out;
}

double SpeedDistribution::sample(CounterRng& rng) const {
  switch (kind_) {
    case Kind::Constant:
      return p1_;
    case Kind::UniformRange:
      return rng.uniform(p1_, p2_);
    case Kind::Exponential:
      return rng.exponential(p1_);
    case Kind::TwoPoint:
      return rng.next_double() < p2_ ? p1_ : 0.0;
    case Kind::Discrete: {
      double u = rng.next_double();
      for (const auto& a : atoms_) {
        if (u < a.weight) return a.speed;
        u -= a.weight;
      }
      return atoms_.back().speed;
    }
  }
  return 0.0;
}

SpeedDistribution::Expectation SpeedDistribution::expectation_truncated(
    const std::function<double(double)>& g, double tol, double quantile_eps,
    std::span<const double> interior_breakpoints) const {
  if (!(tol > 0.0)) throw std::invalid_argument("expectation: tol must be > 0");
  if (has_atoms()) {
    double sum = 0.0;
    for (const auto& a : atoms_) sum += a.weight * g(a.speed);
    return {sum, 0.0, atoms_.back().speed};
  }
  const QuadratureOptions opts{tol, 60};
  if (kind_ == Kind::UniformRange) {
    const double inv_width = 1.0 / (p2_ - p1_);
    const double value = integrate_segmented(
        [&](double v) { return g(v) * inv_width; }, p1_, p2_,
        interior_breakpoints, opts);
    return {value, 0.0, p2_};
  }
  // Exponential: truncate at the (1 - quantile_eps) quantile.
  const double mean_v = p1_;
  const double upper = max_speed(quantile_eps);
  const double value = integrate_segmented(
      [&](double v) { return g(v) * std::exp(-v / mean_v) / mean_v; }, 0.0,
      upper, interior_breakpoints, opts);
  return {value, quantile_eps, upper};
}

DirectionDistribution DirectionDistribution::uniform_circle() {
  return DirectionDistribution{};
}

DirectionDistribution DirectionDistribution::discrete(
    std::vector<DirectionAtom> atoms) {
  if (atoms.empty()) throw std::invalid_argument("Discrete directions: no atoms");
  double sum = 0.0;
  for (auto& a : atoms) {
    if (!(a.weight >= 0.0)) {
      throw std::invalid_argument("Discrete directions: weights must be >= 0");
    }
    a.angle = normalize_angle(a.angle);
    sum += a.weight;
  }
  check_weights_sum(sum, "Discrete directions");
  DirectionDistribution d;
  d.atoms_ = std::move(atoms);
  return d;
}

double DirectionDistribution::sample(CounterRng& rng) const {
  if (is_uniform()) return rng.uniform(0.0, kTwoPi);
  double u = rng.next_double();
  for (const auto& a : atoms_) {
    if (u < a.weight) return a.angle;
    u -= a.weight;
  }
  return atoms_.back().angle;
}

std::string DirectionDistribution::name() const {
  return is_uniform() ? "UniformCircle" : "DiscreteDirections";
}

DroneNetworkModel::DroneNetworkModel(double lambda, double height_h,
                                     SpeedDistribution speeds,
                                     DirectionDistribution directions)
    : lambda_(lambda),
      height_(height_h),
      speeds_(std::move(speeds)),
      directions_(std::move(directions)) {
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("DroneNetworkModel: lambda must be > 0");
  }
  if (!(height_h >= 0.0)) {
    throw std::invalid_argument("DroneNetworkModel: height must be >= 0");
  }
}

void SweepParams::validate() const {
  if (!(r0 > 0.0)) throw std::invalid_argument("SweepParams: r0 must be > 0");
  if (!(s >= 0.0)) throw std::invalid_argument("SweepParams: s must be >= 0");
  if (!(v >= 0.0) || !(v0 >= 0.0)) {
    throw std::invalid_argument("SweepParams: speeds must be >= 0");
  }
  if (!std::isfinite(theta0)) {
    throw std::invalid_argument("SweepParams: theta0 must be finite");
  }
}

const TierParams& HybridTierConfig::tier(int i) const {
  if (i == 1) return tier1;
  if (i == 2) return tier2;
  throw std::invalid_argument("HybridTierConfig: tier index must be 1 or 2");
}

void HybridTierConfig::validate() const {
  for (const TierParams* t : {&tier1, &tier2}) {
    if (!(t->bias > 0.0)) {
      throw std::invalid_argument("HybridTierConfig: bias must be > 0");
    }
    if (!(t->height >= 0.0)) {
      throw std::invalid_argument("HybridTierConfig: height must be >= 0");
    }
    if (!(t->lambda > 0.0)) {
      throw std::invalid_argument("HybridTierConfig: lambda must be > 0");
    }
    if (!(t->alpha > 2.0)) {
      throw std::invalid_argument("HybridTierConfig: alpha must be > 2");
    }
  }
}

namespace {

void check_ccdf_common(const std::vector<double>& grid,
                       const std::vector<double>& values) {
  if (grid.size() < 1 || grid.size() != values.size()) {
    throw std::invalid_argument("CcdfCurve: grid/value size mismatch");
  }
  if (grid.front() != 0.0) {
    throw std::invalid_argument("CcdfCurve: grid must start at s = 0");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw std::invalid_argument("CcdfCurve: grid must be strictly increasing");
    }
  }
  for (double p : values) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument("CcdfCurve: values must lie in [0, 1]");
    }
  }
}

}  // namespace

CcdfCurve CcdfCurve::analytic(std::vector<double> grid,
                              std::vector<double> values, double slack) {
  check_ccdf_common(grid, values);
  if (std::fabs(values.front() - 1.0) > slack) {
    throw std::invalid_argument("CcdfCurve: value at s = 0 must equal 1");
  }
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[i - 1] + slack) {
      throw std::invalid_argument("CcdfCurve: analytic values must be non-increasing");
    }
  }
  CcdfCurve c;
  c.grid_ = std::move(grid);
  c.values_ = std::move(values);
  return c;
}

CcdfCurve CcdfCurve::empirical(std::vector<double> grid,
                               std::vector<double> values,
                               std::vector<double> ci_halfwidth) {
  check_ccdf_common(grid, values);
  if (ci_halfwidth.size() != values.size()) {
    throw std::invalid_argument("CcdfCurve: ci size mismatch");
  }
  if (values.front() != 1.0) {
    throw std::invalid_argument("CcdfCurve: empirical value at s = 0 must equal 1");
  }
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[i - 1] + ci_halfwidth[i] + ci_halfwidth[i - 1]) {
      throw std::invalid_argument(
          "CcdfCurve: empirical values must be non-increasing within ci");
    }
  }
  CcdfCurve c;
  c.grid_ = std::move(grid);
  c.values_ = std::move(values);
  c.ci_ = std::move(ci_halfwidth);
  return c;
}

RateReport RateReport::analytic(double rate) {
  if (!(rate >= 0.0)) {
    throw std::invalid_argument("RateReport: rate must be >= 0");
  }
  RateReport r;
  r.handover_rate = rate;
  r.mean_sojourn =
      rate > 0.0 ? 1.0 / rate : std::numeric_limits<double>::infinity();
  r.method = Method::Analytic;
  return r;
}

bool RateReport::sojourn_is_infinite() const {
  return std::isinf(mean_sojourn);
}

void SimulationConfig::validate() const {
  if (!(horizon_T > 0.0)) {
    throw std::invalid_argument("SimulationConfig: horizon_T must be > 0");
  }
  if (replications < 1) {
    throw std::invalid_argument("SimulationConfig: replications must be >= 1");
  }
  for (double eps : {window_epsilon, speed_quantile_epsilon}) {
    if (!(eps > 0.0) || !(eps < 1.0)) {
      throw std::invalid_argument("SimulationConfig: epsilons must lie in (0, 1)");
    }
  }
}

}  // namespace hosim

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hosim {

class CounterRng;

struct SpeedAtom {
  double speed;
  double weight;
};

/// Law of drone speeds. Immutable after construction; construction
/// validates parameters and throws std::invalid_argument on bad input.
class SpeedDistribution {
 public:
  enum class Kind { Constant, UniformRange, Exponential, TwoPoint, Discrete };

  static SpeedDistribution constant(double c);
  static SpeedDistribution uniform_range(double a, double b);
  static SpeedDistribution exponential(double mean);
  static SpeedDistribution two_point(double v, double p_move);
  static SpeedDistribution discrete(std::vector<SpeedAtom> atoms);

  Kind kind() const { return kind_; }
  double mean() const;
  std::string name() const;

  /// Finite-support laws expose their atoms so expectations reduce to
  /// exact sums. Empty for UniformRange/Exponential.
  bool has_atoms() const { return !atoms_.empty(); }
  const std::vector<SpeedAtom>& atoms() const { return atoms_; }

  /// Effective maximum speed: the (1 - quantile_eps) quantile for
  /// unbounded laws, the exact supremum otherwise.
  double max_speed(double quantile_eps) const;

  /// Support edges and mass points; quadratures split at these.
  std::vector<double> critical_speeds(double quantile_eps) const;

  double sample(CounterRng& rng) const;

  struct Expectation {
    double value;
    double truncated_mass;  // probability mass beyond the truncation point
    double upper_limit;     // truncation point actually used
  };

  /// E[g(V)] to relative tolerance tol. Exact finite sum for atom laws;
  /// adaptive quadrature otherwise, with the Exponential integral
  /// truncated at the (1 - quantile_eps) quantile (truncation reported
  /// in the result). interior_breakpoints mark kinks of g.
  Expectation expectation_truncated(
      const std::function<double(double)>& g, double tol,
      double quantile_eps = 1e-6,
      std::span<const double> interior_breakpoints = {}) const;

  double expectation(const std::function<double(double)>& g, double tol,
                     double quantile_eps = 1e-6,
                     std::span<const double> interior_breakpoints = {}) const {
    return expectation_truncated(g, tol, quantile_eps, interior_breakpoints)
        .value;
  }

  // Parameter accessors; only valid for the matching kind.
  double constant_speed() const { return p1_; }
  double range_lo() const { return p1_; }
  double range_hi() const { return p2_; }
  double exponential_mean() const { return p1_; }
  double two_point_speed() const { return p1_; }
  double two_point_p_move() const { return p2_; }

 private:
  SpeedDistribution(Kind kind, double p1, double p2,
                    std::vector<SpeedAtom> atoms);

  Kind kind_;
  double p1_ = 0.0;
  double p2_ = 0.0;
  std::vector<SpeedAtom> atoms_;  // populated for Constant/TwoPoint/Discrete
};

struct DirectionAtom {
  double angle;  // radians, normalized to [0, 2*pi)
  double weight;
};

/// Law of movement directions: isotropic by default, or a finite mixture.
class DirectionDistribution {
 public:
  static DirectionDistribution uniform_circle();
  static DirectionDistribution discrete(std::vector<DirectionAtom> atoms);

  bool is_uniform() const { return atoms_.empty(); }
  const std::vector<DirectionAtom>& atoms() const { return atoms_; }
  double sample(CounterRng& rng) const;
  std::string name() const;

 private:
  DirectionDistribution() = default;
  std::vector<DirectionAtom> atoms_;
};

/// Single-tier network: planar PPP of density lambda whose points move on
/// straight lines with i.i.d. speed and direction. The height is carried
/// for bookkeeping only and must not influence any single-tier result.
class DroneNetworkModel {
 public:
  DroneNetworkModel(double lambda, double height_h, SpeedDistribution speeds,
                    DirectionDistribution directions);

  double lambda() const { return lambda_; }
  double height() const { return height_; }
  const SpeedDistribution& speeds() const { return speeds_; }
  const DirectionDistribution& directions() const { return directions_; }

 private:
  double lambda_;
  double height_;
  SpeedDistribution speeds_;
  DirectionDistribution directions_;
};

/// Parameters of the swept coverage region: disks of radius r0(t) centered
/// at (v*t, 0) for t in [0, s], where r0(t) is the serving-link distance
/// for initial distance r0, serving speed v0 and direction theta0.
struct SweepParams {
  double v = 0.0;       // non-serving relative speed, m/s
  double r0 = 1.0;      // initial serving distance, m
  double v0 = 0.0;      // serving drone speed, m/s
  double theta0 = 0.0;  // serving drone direction, radians
  double s = 0.0;       // time horizon, s

  void validate() const;  // throws std::invalid_argument
};

struct TierParams {
  double bias = 1.0;    // B_i, dimensionless
  double height = 0.0;  // h_i, m
  double lambda = 0.0;  // per m^2
  double alpha = 4.0;   // path-loss exponent
};

/// Two-tier configuration for the hybrid (terrestrial + drone) results.
/// Tier 1 is the drone tier, tier 2 the terrestrial tier.
struct HybridTierConfig {
  TierParams tier1;
  TierParams tier2;

  const TierParams& tier(int i) const;
  void validate() const;
};

/// A complementary CDF sampled on an s-grid. Factory functions check the
/// defining properties: probabilities, value 1 at s = 0, monotone
/// non-increasing (within confidence slack for empirical curves).
class CcdfCurve {
 public:
  static CcdfCurve analytic(std::vector<double> grid,
                            std::vector<double> values, double slack = 1e-9);
  static CcdfCurve empirical(std::vector<double> grid,
                             std::vector<double> values,
                             std::vector<double> ci_halfwidth);

  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  bool has_ci() const { return !ci_.empty(); }
  const std::vector<double>& ci_halfwidth() const { return ci_; }

 private:
  CcdfCurve() = default;
  std::vector<double> grid_;
  std::vector<double> values_;
  std::vector<double> ci_;
};

/// Handover rate and mean sojourn time from one method. For analytic
/// results the two are exact reciprocals by construction.
struct RateReport {
  enum class Method { Analytic, MonteCarlo };

  double handover_rate = 0.0;  // events per second
  double mean_sojourn = 0.0;   // seconds; +inf when no handovers occur
  Method method = Method::Analytic;
  std::optional<double> ci_halfwidth;  // 95% CI on the rate, when empirical

  static RateReport analytic(double rate);
  bool sojourn_is_infinite() const;
};

struct SimulationConfig {
  double horizon_T = 200.0;
  int replications = 200;
  std::uint64_t seed = 1;
  double window_epsilon = 1e-6;
  double speed_quantile_epsilon = 1e-6;

  void validate() const;
};

}  // namespace hosim

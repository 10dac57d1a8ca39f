#pragma once
// montecarlo.hpp — event-driven simulation of the drone field as seen from a
// static user at the origin, and the empirical estimators used to
// cross-check the quadrature results.
//
// Determinism contract: every estimator derives one counter-based RNG stream
// per replication from (seed, replication index) and reduces results in
// replication order, so outputs are bit-identical for a given (seed, config)
// regardless of the thread count.

#include <cstdint>
#include <optional>
#include <vector>

#include "hosim/model.hpp"
#include "hosim/rng.hpp"

namespace hosim::mc {

// A drone on a straight-line trajectory: position at time t is
// (x0, y0) + speed * t * (cos direction, sin direction). The squared
// distance to the origin d^2(t) = c2 t^2 + c1 t + c0 is cached on
// construction and used for all event arithmetic.
struct DroneState {
  int id = 0;
  double x0 = 0.0;
  double y0 = 0.0;
  double speed = 0.0;
  double direction = 0.0;
  double c0 = 0.0;  // |pos0|^2
  double c1 = 0.0;  // 2 speed (pos0 . unit direction)
  double c2 = 0.0;  // speed^2

  static DroneState make(int id, double x0, double y0, double speed,
                         double direction);

  double dist2_at(double t) const { return (c2 * t + c1) * t + c0; }

  // Minimum of d^2 over [t_lo, t_hi] (convex quadratic: vertex + endpoints).
  double min_dist2_over(double t_lo, double t_hi) const;
};

// Piecewise-constant serving association over [0, horizon]: serving_ids[k]
// serves on the interval between event_times[k-1] and event_times[k]
// (with the obvious conventions at the ends). Event times are strictly
// increasing and the serving id changes at every event. serving_ids is
// {-1} when the field was empty.
struct HandoverTrace {
  std::vector<double> event_times;
  std::vector<int> serving_ids;
  double horizon = 0.0;

  std::size_t handovers() const { return event_times.size(); }
};

// Poisson(lambda pi R^2)-many drones uniform in the disk of radius
// window_radius, i.i.d. speeds and directions, ids 0..n-1 in generation
// order. With exclusion_radius set, points inside that disk around the
// origin are thinned out (ids stay contiguous over the survivors).
std::vector<DroneState> sample_field(
    const DroneNetworkModel& model, double window_radius, CounterRng& rng,
    std::optional<double> exclusion_radius = {});

// Smallest t in (0, horizon] at which some other drone becomes strictly
// nearer to the origin than `serving`, found as the minimum positive root
// of the quadratic differences d_i^2(t) - d_0^2(t) (no time stepping), then
// Newton-polished. Requires serving to be nearest at t = 0. Returns nullopt
// when no crossing happens by the horizon.
std::optional<double> first_handover_time(const DroneState& serving,
                                          const std::vector<DroneState>& others,
                                          double horizon);

// True when the drone nearest to the origin at time s (ties to lowest id)
// is still `serving`; ignores everything that happened inside [0, s).
bool endpoint_serving_unchanged(const DroneState& serving,
                                const std::vector<DroneState>& others,
                                double s);

// Radius inside which the drone nearest to the origin lies with probability
// >= 1 - epsilon under a PPP of the given density: sqrt(ln(1/eps)/(lambda pi)).
double tracking_radius(double lambda, double epsilon);

// Sampling window for a horizon-T run: tracking_radius plus the distance a
// (1 - speed_quantile_epsilon)-quantile speed covers in time T, so any drone
// that could become relevant during the run is inside at t = 0.
double simulation_window_radius(const DroneNetworkModel& model, double horizon,
                                double window_epsilon = 1e-6,
                                double speed_quantile_epsilon = 1e-6);

// Half-width of the Wilson 95% score interval for `successes` out of
// `trials` Bernoulli trials.
double wilson_halfwidth(std::int64_t successes, std::int64_t trials);

// Empirical CCDF of the time to first handover given the serving drone
// starts at (r0, 0) with speed v0 and direction theta0; the rest of the
// field is sampled with exclusion disk b(0, r0). Per grid point: fraction of
// replications whose first crossing happens after s, with Wilson 95% CI.
// window_radius overrides the protocol window when set (boundary-bias
// experiments); threads only changes wall time, never the estimate.
CcdfCurve estimate_conditional_ccdf(const DroneNetworkModel& model, double r0,
                                    double v0, double theta0,
                                    const std::vector<double>& s_grid,
                                    int reps, std::uint64_t seed,
                                    int threads = 1,
                                    std::optional<double> window_radius = {});

// Same sampling, but s counts as "no handover" iff the nearest drone at
// time s is still the one that served at time 0 (interior of [0, s]
// ignored). Upper-bounds the curve above; equal when all speeds coincide.
CcdfCurve estimate_endpoint_ccdf(const DroneNetworkModel& model, double r0,
                                 double v0, double theta0,
                                 const std::vector<double>& s_grid, int reps,
                                 std::uint64_t seed, int threads = 1,
                                 std::optional<double> window_radius = {});

// Full association trace over [0, horizon] for an explicit field: serving is
// the nearest drone at t = 0 (ties to lowest id); each subsequent event is
// the exact first down-crossing of the current serving drone's distance by
// any other drone. Re-entries are permitted.
HandoverTrace trace_from_field(const std::vector<DroneState>& field,
                               double horizon);

// Stationary-start run: samples Poisson(lambda pi R_sim^2) drones in the
// protocol window and traces [0, T]. Drones that provably can never beat
// the serving distance (their closest approach exceeds an envelope bound on
// the nearest-drone distance over the whole run) are dropped before event
// processing; the result is unchanged.
HandoverTrace run_handover_process(const DroneNetworkModel& model, double T,
                                   CounterRng& rng,
                                   double window_epsilon = 1e-6,
                                   double speed_quantile_epsilon = 1e-6);

// Pooled handovers / pooled time over cfg.replications runs of horizon
// cfg.horizon_T, with a 95% CI from the replication-level rate variance;
// mean sojourn is the mean of complete (uncensored) inter-event intervals,
// +infinity when none were observed.
RateReport estimate_rate_and_sojourn(const DroneNetworkModel& model,
                                     const SimulationConfig& cfg,
                                     int threads = 1);

// Initial conditions for the two-tier estimator: planar distance of the
// serving station, plus speed and direction when the serving tier is the
// drone tier.
struct HybridConditioning {
  double r0 = 1.0;
  double v0 = 0.0;
  double theta0 = 0.0;
};

// Empirical CCDF of the first time the biased-power argmax over both tiers
// changes, detected on a time grid of step dt (cross-tier power crossings
// are not polynomial in t, so events are grid-detected with O(dt) bias).
// Tier 1 is the drone tier (density cfg.tier1.lambda, mobility from
// droneModel); tier 2 is static. The complement fields are sampled outside
// the t = 0 association region implied by the conditioning.
CcdfCurve estimate_hybrid_ccdf(const HybridTierConfig& cfg,
                               const DroneNetworkModel& droneModel,
                               int served_tier,
                               const HybridConditioning& conditioning,
                               const std::vector<double>& s_grid, int reps,
                               std::uint64_t seed, double dt, int threads = 1);

struct AreaEstimate {
  double area = 0.0;  // m^2
  double se = 0.0;    // one standard error of the estimate
};

// Dart-throwing check of the swept-region area: uniform darts in the
// bounding box, membership via the coverage quadratic, area = box area times
// hit fraction.
AreaEstimate area_dart_oracle(const SweepParams& p, std::int64_t darts,
                              CounterRng& rng);

}  // namespace hosim::mc

#pragma once
// analytic.hpp — closed-form and quadrature evaluation of the handover
// statistics: conditional CCDF of the time to first handover, mean sojourn
// time, handover rate (general law plus the constant-speed and move-or-stay
// closed forms), the Jensen gap against an equal-mean constant speed, and
// the two-tier (terrestrial + drone) boundary results.
//
// All single-tier operations require isotropic drone directions
// (DirectionDistribution::uniform_circle); they throw std::invalid_argument
// otherwise. Quadrature failures surface as NumericalError.

#include "hosim/model.hpp"

namespace hosim {

// P(no handover by time s | r0, v0, theta0) for a user at the origin:
//   exp( -lambda * E_v[|A(v, r0, v0, theta0, s)|] + lambda * pi * r0^2 ).
// The speed expectation runs at relative tolerance tol, the inner area
// quadrature at tol / 10.
double ccdf_given_r0(const DroneNetworkModel& model, double r0, double v0,
                     double theta0, double s, double tol);

// P(no handover by time s | v0, theta0), the r0-mixture of the above against
// the serving-distance density 2 lambda pi r0 exp(-lambda pi r0^2):
//   integral over r0 of 2 lambda pi r0 exp(-lambda E_v[|A|]) dr0,
// truncated at r0_max = sqrt(40 / (lambda pi)) where the integrand's
// envelope exp(-lambda pi r0^2) is below e^-40.
double ccdf_conditional(const DroneNetworkModel& model, double v0,
                        double theta0, double s, double tol);

// E_v[F(v, v0, theta0)] over the model's speed law, split at the kernel's
// branch point v = v0 |cos(theta0)|.
double expected_kernel(const DroneNetworkModel& model, double v0,
                       double theta0, double tol);

// Conditional handover rate sqrt(lambda) * E_v[F(v, v0, theta0)] — the
// reciprocal of the conditional mean sojourn time; multiplied by the
// (v0, theta0) law this is the rate density that handover_rate integrates.
double handover_rate_given_serving(const DroneNetworkModel& model, double v0,
                                   double theta0, double tol);

// 1 / (sqrt(lambda) * E_v[F(v, v0, theta0)]); +infinity when the expected
// kernel vanishes (nothing ever moves relative to the user).
double mean_sojourn_conditional(const DroneNetworkModel& model, double v0,
                                double theta0);

// Unconditional handover rate H = sqrt(lambda) * E[F(v, v0, theta0)] with
// v, v0 i.i.d. from the speed law and theta0 uniform on [0, 2 pi); the
// report's mean sojourn is 1 / H. Speed expectations are exact sums for
// atom laws and adaptive quadrature otherwise; the direction integral is
// adaptive quadrature split at the kernel's branch angles.
RateReport handover_rate(const DroneNetworkModel& model, double tol);

// Closed form for every drone moving at the same speed v: (4 / pi) sqrt(lambda) v.
double rate_special_constant(double lambda, double v);

// Closed form for the move-or-stay law (speed v with probability p_move,
// else static), with the rate split by the mover status of the old and new
// serving drone.
struct TwoPointRate {
  double total;             // 2 sqrt(lambda) v p (1 - (1 - 2/pi) p)
  double moving_to_static;  // sqrt(lambda) v p (1 - p)
  double static_to_moving;  // sqrt(lambda) v p (1 - p)
  double moving_to_moving;  // (4 / pi) sqrt(lambda) v p^2
};
TwoPointRate rate_special_two_point(double lambda, double v, double p_move);

// handover_rate(lambda, d) minus the rate of a constant speed with the same
// mean; non-negative for every speed law (the rate is convex in the speeds).
double corollary_gap(double lambda, const SpeedDistribution& d, double tol);

// Two-tier association boundary: a tier-j interferer at planar distance x
// matches the biased power of a tier-i one at planar distance
//   f_{i,j}(x) = sqrt( [ (B_i/B_j)^(2/a_i) (x^2 + h_j^2)^(a_j/a_i) - h_i^2 ]+ ).
double hybrid_boundary(const HybridTierConfig& cfg, int i, int j, double x);

// CCDF of the time to first handover when tier 1 (drones, density from cfg)
// serves at planar distance r0: the single-tier CCDF times the probability
// that no static tier-2 station sits in the grown tier-2 exclusion annulus,
//   exp( -lambda2 pi [ f21(max(r0, r0(s)))^2 - f21(r0)^2 ] ).
double hybrid_ccdf_tier1(const HybridTierConfig& cfg,
                         const DroneNetworkModel& droneModel, double r0,
                         double v0, double theta0, double s, double tol);

// CCDF of the time to first handover when a static tier-2 station serves at
// planar distance r0: exp( -2 lambda1 E[v] s f12(r0) ).
double hybrid_ccdf_tier2(const HybridTierConfig& cfg,
                         const DroneNetworkModel& droneModel, double r0,
                         double s);

}  // namespace hosim

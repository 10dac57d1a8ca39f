#pragma once
// geometry.hpp — exact geometry of the region swept by the serving drone's
// coverage disk, plus the handover-rate kernel derived from its growth rate.
//
// The serving drone starts at planar distance r0 from the user, moves with
// speed v0 along direction theta0, and its projected distance at time t is
//   r0(t) = sqrt(r0^2 + v0^2 t^2 + 2 r0 v0 t cos(theta0)).
// In the serving drone's frame every other drone moves with some speed v, so
// the region that must stay empty for no handover to occur by time s is the
// union over t in [0, s] of disks centred at (v t, 0) with radius r0(t).

#include "hosim/model.hpp"

namespace hosim {

// Membership test for a fixed query point (x, y): the point lies inside the
// disk at time t iff q(t) <= 0, where
//   q(t) = (x - v t)^2 + y^2 - r0(t)^2 = a2 t^2 + a1 t + a0
// with a2 = v^2 - v0^2, a1 = -2 (x v + r0 v0 cos(theta0)),
// a0 = x^2 + y^2 - r0^2. Hence (x, y) belongs to the swept region iff the
// minimum of q over [0, s] is <= 0.
struct CoverageQuadratic {
  double a2 = 0.0;
  double a1 = 0.0;
  double a0 = 0.0;

  static CoverageQuadratic at_point(const SweepParams& p, double x, double y);

  double eval(double t) const { return (a2 * t + a1) * t + a0; }

  // Minimum of q over [t_lo, t_hi] (endpoints plus interior vertex).
  double min_over(double t_lo, double t_hi) const;

  bool covered(double t_lo, double t_hi) const {
    return min_over(t_lo, t_hi) <= 0.0;
  }
};

// Projected serving distance r0(t); collinear retreat (theta0 = pi) reaches
// zero at t = r0 / v0.
double serving_distance_at(double r0, double v0, double theta0, double t);

// Y(x) = max over t in [0, s] of [ r0(t)^2 - (x - v t)^2 ]. The point (x, y)
// lies in the swept region iff y^2 <= Y(x); Y may be negative outside it.
double y_extent(const SweepParams& p, double x);

// Area of the swept region, via the exact 1-D reduction
//   |A| = integral of 2 sqrt(max(0, Y(x))) dx
// over x in [-max_t r0(t), v s + max_t r0(t)], evaluated by adaptive
// quadrature with panels pre-split at the sign changes and branch switches
// of Y. Relative error <= tol; tol must lie in (0, 1e-2].
// Degenerate input v = v0 = 0 (nothing moves) returns pi r0^2 directly.
// Throws NumericalError when the quadrature fails to converge.
double sweep_area(const SweepParams& p, double tol);

// d/dz |A(v, r0, v0, theta0, z / v0)| at z = 0: the initial growth of the
// swept area per metre of serving-drone travel,
//   2 r0 * { sqrt(w^2 - c^2) + c * arccos(-c / w)   if |c| <= w
//          { 0                                      if w < -c
//          { pi * c                                 if w <  c
// with w = v / v0 and c = cos(theta0). The boundary |c| = w uses the first
// branch (all branches are continuous there). Throws std::domain_error when
// v0 = 0 (the rate is per unit of serving travel).
double area_growth_rate_at_zero(double v, double v0, double theta0, double r0);

// Handover-rate kernel
//   F(v, v0, theta0) = v0 * area_growth_rate_at_zero / (2 r0),
// extended by its continuous limits F(v, 0, theta0) = v and
// F(0, v0, theta0) = pi v0 cos(theta0) * 1(cos(theta0) > 0). Always >= 0.
double kernel_F(double v, double v0, double theta0);

}  // namespace hosim

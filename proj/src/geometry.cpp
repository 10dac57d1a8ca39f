#include "hosim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "hosim/quadrature.hpp"

namespace hosim {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

CoverageQuadratic CoverageQuadratic::at_point(const SweepParams& p, double x,
                                              double y) {
  CoverageQuadratic q;
  q.a2 = p.v * p.v - p.v0 * p.v0;
  q.a1 = -2.0 * (x * p.v + p.r0 * p.v0 * std::cos(p.theta0));
  q.a0 = x * x + y * y - p.r0 * p.r0;
  return q;
}

double CoverageQuadratic::min_over(double t_lo, double t_hi) const {
  double best = std::min(eval(t_lo), eval(t_hi));
  if (a2 > 0.0) {
    const double t_vertex = -a1 / (2.0 * a2);
    if (t_vertex > t_lo && t_vertex < t_hi) {
      best = std::min(best, eval(t_vertex));
    }
  }
  return best;
}

double serving_distance_at(double r0, double v0, double theta0, double t) {
  if (!(r0 > 0.0)) {
    throw std::invalid_argument("serving_distance_at: r0 must be > 0");
  }
  if (!(t >= 0.0)) {
    throw std::invalid_argument("serving_distance_at: t must be >= 0");
  }
  const double sq =
      r0 * r0 + v0 * v0 * t * t + 2.0 * r0 * v0 * t * std::cos(theta0);
  // Collinear retreat can land exactly on the origin; clip rounding noise.
  return std::sqrt(std::max(0.0, sq));
}

double y_extent(const SweepParams& p, double x) {
  p.validate();
  return -CoverageQuadratic::at_point(p, x, 0.0).min_over(0.0, p.s);
}

double sweep_area(const SweepParams& p, double tol) {
  p.validate();
  if (!(tol > 0.0) || tol > 1e-2) {
    throw std::invalid_argument("sweep_area: tol must lie in (0, 1e-2]");
  }

  const double r0 = p.r0;
  const double disk0 = kPi * r0 * r0;
  if (p.s == 0.0 || (p.v == 0.0 && p.v0 == 0.0)) return disk0;

  const double v = p.v;
  const double v0 = p.v0;
  const double s = p.s;
  const double cos_t0 = std::cos(p.theta0);
  const double rs = serving_distance_at(r0, v0, p.theta0, s);

  // r0(t)^2 is convex in t, so its maximum over [0, s] sits at an endpoint.
  const double r_max = std::max(r0, rs);
  const double x_lo = -r_max;
  const double x_hi = v * s + r_max;

  // Y(x) is the maximum over t in [0, s] of
  //   g(t; x) = a t^2 + B(x) t + C(x),
  //   a = v0^2 - v^2,  B(x) = 2 (r0 v0 cos_t0 + x v),  C(x) = r0^2 - x^2,
  // attained at t = 0, t = s, or (when a < 0) at the vertex -B / (2a).
  // The integrand 2 sqrt(max(0, Y)) is smooth except where the active
  // branch switches or a branch crosses zero; split panels there.
  const double a = v0 * v0 - v * v;
  std::vector<double> cuts;
  cuts.reserve(10);

  // Zeros of the t = 0 branch: Y = r0^2 - x^2.
  cuts.push_back(-r0);
  cuts.push_back(r0);
  // Zeros of the t = s branch: Y = r0(s)^2 - (x - v s)^2.
  cuts.push_back(v * s - rs);
  cuts.push_back(v * s + rs);

  if (v > 0.0) {
    // Vertex enters the window (t* = 0 means B(x) = 0).
    cuts.push_back(-r0 * v0 * cos_t0 / v);
    // Vertex leaves the window (t* = s means B(x) = -2 a s).
    cuts.push_back((-a * s - r0 * v0 * cos_t0) / v);
    // Endpoint branches cross (g(0) = g(s) means B(x) = -a s).
    cuts.push_back((-a * s - 2.0 * r0 * v0 * cos_t0) / (2.0 * v));
  }
  if (a < 0.0 && v0 > 0.0) {
    // Zeros of the vertex branch C - B^2 / (4a):
    //   v0^2 x^2 + 2 r0 v0 v cos_t0 x - r0^2 (v0^2 - v^2 - v0^2 cos_t0^2) = 0.
    const double qa = v0 * v0;
    const double qb = 2.0 * r0 * v0 * v * cos_t0;
    const double qc = -r0 * r0 * (v0 * v0 - v * v - v0 * v0 * cos_t0 * cos_t0);
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc >= 0.0) {
      const double sd = std::sqrt(disc);
      cuts.push_back((-qb - sd) / (2.0 * qa));
      cuts.push_back((-qb + sd) / (2.0 * qa));
    }
  }

  std::erase_if(cuts, [&](double x) { return !(x > x_lo && x < x_hi); });
  std::sort(cuts.begin(), cuts.end());

  // Same quadratic as y_extent with the x-independent pieces hoisted out of
  // the integrand.
  const double a2q = v * v - v0 * v0;
  const double k1 = r0 * v0 * cos_t0;
  const auto y_at = [=](double x) {
    const CoverageQuadratic q{a2q, -2.0 * (x * v + k1), x * x - r0 * r0};
    return -q.min_over(0.0, s);
  };

  const QuadratureOptions opts{0.5 * tol, 60};
  const double area = integrate_segmented(
      [&](double x) { return 2.0 * std::sqrt(std::max(0.0, y_at(x))); }, x_lo,
      x_hi, cuts, opts);
  // The initial disk is contained in the region for every parameter choice.
  return std::max(area, disk0);
}

double area_growth_rate_at_zero(double v, double v0, double theta0,
                                double r0) {
  if (v0 == 0.0) {
    throw std::domain_error(
        "area_growth_rate_at_zero: v0 must be > 0 (rate is per unit of "
        "serving travel)");
  }
  if (!(v >= 0.0) || !(v0 > 0.0) || !(r0 > 0.0)) {
    throw std::invalid_argument(
        "area_growth_rate_at_zero: need v >= 0, v0 > 0, r0 > 0");
  }
  const double w = v / v0;
  const double c = std::cos(theta0);
  double shape = 0.0;
  if (std::fabs(c) <= w) {
    shape = std::sqrt(std::max(0.0, w * w - c * c));
    if (c != 0.0) shape += c * std::acos(std::clamp(-c / w, -1.0, 1.0));
  } else if (w < c) {
    shape = kPi * c;
  }  // w < -c: the disk shrinks into already-swept ground; rate 0.
  return 2.0 * r0 * shape;
}

double kernel_F(double v, double v0, double theta0) {
  if (!(v >= 0.0) || !(v0 >= 0.0)) {
    throw std::invalid_argument("kernel_F: speeds must be >= 0");
  }
  if (v0 == 0.0) return v;  // continuous limit: only relative motion matters
  // r0 cancels between the growth rate and the 2 r0 normalisation, so this
  // equals v0 * area_growth_rate_at_zero(v, v0, theta0, r0) / (2 r0).
  const double c = std::cos(theta0);
  if (v == 0.0) return c > 0.0 ? kPi * v0 * c : 0.0;
  const double w = v / v0;
  if (std::fabs(c) <= w) {
    double shape = std::sqrt(std::max(0.0, w * w - c * c));
    if (c != 0.0) shape += c * std::acos(std::clamp(-c / w, -1.0, 1.0));
    return v0 * shape;
  }
  return w < c ? kPi * v0 * c : 0.0;
}

}  // namespace hosim

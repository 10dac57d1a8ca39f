#include "hosim/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "hosim/geometry.hpp"
#include "hosim/quadrature.hpp"

namespace hosim {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDefaultTol = 1e-9;

void require_isotropic(const DroneNetworkModel& model, const char* op) {
  if (!model.directions().is_uniform()) {
    throw std::invalid_argument(
        std::string(op) +
        ": analytic results require isotropic directions (uniform_circle)");
  }
}

void require_tol(double tol, const char* op) {
  if (!(tol > 0.0) || tol > 1e-2) {
    throw std::invalid_argument(std::string(op) +
                                ": tol must lie in (0, 1e-2]");
  }
}

// E_v[|A(v, r0, v0, theta0, s)|] at relative tolerance tol; the inner area
// quadrature runs tighter so its error does not dominate.
double mean_sweep_area(const SpeedDistribution& speeds, double r0, double v0,
                       double theta0, double s, double tol) {
  const double area_tol = tol / 10.0;
  const double cuts[] = {v0};  // quadratic-in-t character flips at v = v0
  return speeds.expectation(
      [&](double v) {
        return sweep_area({v, r0, v0, theta0, s}, area_tol);
      },
      tol, 1e-6, cuts);
}

// E_v[F(v, v0, theta0)], split at the kernel's branch point.
double mean_kernel(const SpeedDistribution& speeds, double v0, double theta0,
                   double tol) {
  const double cuts[] = {v0 * std::fabs(std::cos(theta0))};
  return speeds.expectation(
      [&](double v) { return kernel_F(v, v0, theta0); }, tol, 1e-6, cuts);
}

}  // namespace

double ccdf_given_r0(const DroneNetworkModel& model, double r0, double v0,
                     double theta0, double s, double tol) {
  require_isotropic(model, "ccdf_given_r0");
  require_tol(tol, "ccdf_given_r0");
  if (!(r0 > 0.0) || !(v0 >= 0.0) || !(s >= 0.0)) {
    throw std::invalid_argument("ccdf_given_r0: need r0 > 0, v0 >= 0, s >= 0");
  }
  if (s == 0.0) return 1.0;  // |A(0)| = pi r0^2 identically
  const double lambda = model.lambda();
  const double mean_area =
      mean_sweep_area(model.speeds(), r0, v0, theta0, s, tol);
  return std::min(1.0, std::exp(-lambda * (mean_area - kPi * r0 * r0)));
}

double ccdf_conditional(const DroneNetworkModel& model, double v0,
                        double theta0, double s, double tol) {
  require_isotropic(model, "ccdf_conditional");
  require_tol(tol, "ccdf_conditional");
  if (!(v0 >= 0.0) || !(s >= 0.0)) {
    throw std::invalid_argument("ccdf_conditional: need v0 >= 0, s >= 0");
  }
  if (s == 0.0) return 1.0;
  const double lambda = model.lambda();
  // The integrand is bounded by the serving-distance density
  // 2 lambda pi r0 exp(-lambda pi r0^2); past r0_max the envelope's tail is
  // below e^-40, far under any requested tolerance.
  const double r0_max = std::sqrt(40.0 / (lambda * kPi));
  const double scale = 1.0 / std::sqrt(lambda * kPi);
  const double cuts[] = {scale, 2.0 * scale, 3.0 * scale};
  const double value = integrate_segmented(
      [&](double r0) -> double {
        if (r0 <= 0.0) return 0.0;
        const double mean_area =
            mean_sweep_area(model.speeds(), r0, v0, theta0, s, tol);
        return 2.0 * lambda * kPi * r0 * std::exp(-lambda * mean_area);
      },
      0.0, r0_max, cuts, QuadratureOptions{tol, 60});
  return std::min(1.0, value);
}

double expected_kernel(const DroneNetworkModel& model, double v0,
                       double theta0, double tol) {
  require_tol(tol, "expected_kernel");
  if (!(v0 >= 0.0)) {
    throw std::invalid_argument("expected_kernel: v0 must be >= 0");
  }
  return mean_kernel(model.speeds(), v0, theta0, tol);
}

double handover_rate_given_serving(const DroneNetworkModel& model, double v0,
                                   double theta0, double tol) {
  require_isotropic(model, "handover_rate_given_serving");
  return std::sqrt(model.lambda()) * expected_kernel(model, v0, theta0, tol);
}

double mean_sojourn_conditional(const DroneNetworkModel& model, double v0,
                                double theta0) {
  const double rate =
      handover_rate_given_serving(model, v0, theta0, kDefaultTol);
  if (rate > 0.0) return 1.0 / rate;
  return std::numeric_limits<double>::infinity();
}

RateReport handover_rate(const DroneNetworkModel& model, double tol) {
  require_isotropic(model, "handover_rate");
  require_tol(tol, "handover_rate");
  const SpeedDistribution& speeds = model.speeds();
  const std::vector<double> crit = speeds.critical_speeds(1e-6);

  // E over theta0 of E_v[F(v, v0, theta0)], with theta0 uniform on [0, 2 pi).
  // F depends on theta0 through cos(theta0) only, so the circle integral is
  // twice the integral over [0, pi]. The inner expectation has kinks in
  // theta where v0 |cos(theta)| crosses an edge or atom of the speed law.
  const auto mean_over_directions = [&](double v0) {
    std::vector<double> cuts{kPi / 2.0};
    if (v0 > 0.0) {
      for (double vc : crit) {
        if (vc > 0.0 && vc < v0) {
          const double branch_angle = std::acos(vc / v0);
          cuts.push_back(branch_angle);
          cuts.push_back(kPi - branch_angle);
        }
      }
    }
    const double theta_integral = integrate_segmented(
        [&](double theta) { return mean_kernel(speeds, v0, theta, tol); },
        0.0, kPi, cuts, QuadratureOptions{tol, 60});
    return theta_integral / kPi;
  };

  const double mean_F = speeds.expectation(mean_over_directions, tol, 1e-6,
                                           std::span<const double>(crit));
  return RateReport::analytic(std::sqrt(model.lambda()) * mean_F);
}

double rate_special_constant(double lambda, double v) {
  if (!(lambda > 0.0) || !(v >= 0.0)) {
    throw std::invalid_argument(
        "rate_special_constant: need lambda > 0, v >= 0");
  }
  return (4.0 / kPi) * std::sqrt(lambda) * v;
}

TwoPointRate rate_special_two_point(double lambda, double v, double p_move) {
  if (!(lambda > 0.0) || !(v > 0.0) || !(p_move >= 0.0) || !(p_move <= 1.0)) {
    throw std::invalid_argument(
        "rate_special_two_point: need lambda > 0, v > 0, p_move in [0, 1]");
  }
  const double sqrt_l = std::sqrt(lambda);
  TwoPointRate r;
  r.moving_to_static = sqrt_l * v * p_move * (1.0 - p_move);
  r.static_to_moving = r.moving_to_static;
  r.moving_to_moving = (4.0 / kPi) * sqrt_l * v * p_move * p_move;
  // Summing the components keeps total == sum exact; it equals
  // 2 sqrt(lambda) v p (1 - (1 - 2/pi) p) algebraically.
  r.total = r.moving_to_static + r.static_to_moving + r.moving_to_moving;
  return r;
}

double corollary_gap(double lambda, const SpeedDistribution& d, double tol) {
  const double mean_speed = d.mean();
  if (!(mean_speed > 0.0)) {
    throw std::invalid_argument("corollary_gap: speed law needs mean > 0");
  }
  const DroneNetworkModel model(lambda, 0.0, d,
                                DirectionDistribution::uniform_circle());
  return handover_rate(model, tol).handover_rate -
         rate_special_constant(lambda, mean_speed);
}

double hybrid_boundary(const HybridTierConfig& cfg, int i, int j, double x) {
  cfg.validate();
  if (i == j || i < 1 || i > 2 || j < 1 || j > 2) {
    throw std::invalid_argument(
        "hybrid_boundary: tier indices must be distinct members of {1, 2}");
  }
  if (!(x >= 0.0)) {
    throw std::invalid_argument("hybrid_boundary: x must be >= 0");
  }
  const TierParams& ti = cfg.tier(i);
  const TierParams& tj = cfg.tier(j);
  const double bracket =
      std::pow(ti.bias / tj.bias, 2.0 / ti.alpha) *
          std::pow(x * x + tj.height * tj.height, tj.alpha / ti.alpha) -
      ti.height * ti.height;
  return std::sqrt(std::max(0.0, bracket));
}

double hybrid_ccdf_tier1(const HybridTierConfig& cfg,
                         const DroneNetworkModel& droneModel, double r0,
                         double v0, double theta0, double s, double tol) {
  cfg.validate();
  if (!(r0 > 0.0) || !(v0 >= 0.0) || !(s >= 0.0)) {
    throw std::invalid_argument(
        "hybrid_ccdf_tier1: need r0 > 0, v0 >= 0, s >= 0");
  }
  const DroneNetworkModel tier1_model(cfg.tier1.lambda, droneModel.height(),
                                      droneModel.speeds(),
                                      droneModel.directions());
  const double single = ccdf_given_r0(tier1_model, r0, v0, theta0, s, tol);
  // No handover to tier 2 means the tier-2 exclusion disc grown by the
  // serving drone's retreat stays empty of (static) tier-2 stations.
  const double r_far =
      std::max(r0, serving_distance_at(r0, v0, theta0, s));
  const double f21_far = hybrid_boundary(cfg, 2, 1, r_far);
  const double f21_now = hybrid_boundary(cfg, 2, 1, r0);
  const double grown_area =
      std::max(0.0, kPi * (f21_far * f21_far - f21_now * f21_now));
  return single * std::exp(-cfg.tier2.lambda * grown_area);
}

double hybrid_ccdf_tier2(const HybridTierConfig& cfg,
                         const DroneNetworkModel& droneModel, double r0,
                         double s) {
  cfg.validate();
  if (!(r0 >= 0.0) || !(s >= 0.0)) {
    throw std::invalid_argument("hybrid_ccdf_tier2: need r0 >= 0, s >= 0");
  }
  const double f12 = hybrid_boundary(cfg, 1, 2, r0);
  return std::exp(-2.0 * cfg.tier1.lambda * droneModel.speeds().mean() * s *
                  f12);
}

}  // namespace hosim

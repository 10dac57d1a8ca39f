#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>

namespace hosim {

/// Thrown when an adaptive integral cannot reach the requested tolerance
/// within the subdivision cap. Callers map this to a numerical-failure
/// exit path instead of silently returning a degraded value.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

struct QuadratureOptions {
  double rel_tol = 1e-9;
  int max_depth = 60;  // bisection levels per panel
};

/// Adaptive Gauss-Kronrod (7-15) integration of f over [a, b].
/// Panels are bisected until the embedded error estimate meets the
/// relative tolerance; exceeding the depth cap throws NumericalError.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& opts);

/// Same, but the domain is pre-split at the given interior nodes before
/// refinement starts. Use for integrands with known kinks or sqrt edges;
/// nodes outside (a, b) are ignored, and the list need not be sorted.
double integrate_segmented(const std::function<double(double)>& f, double a,
                           double b, std::span<const double> interior_nodes,
                           const QuadratureOptions& opts);

}  // namespace hosim

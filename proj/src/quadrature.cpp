#include "hosim/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace hosim {
namespace {

// QUADPACK qk15 nodes and weights on [-1, 1].
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelResult {
  double integral;
  double error;  // |K15 - G7|, a conservative estimate of the K15 error
};

PanelResult gk15(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  const double fc = f(center);
  double result_gauss = kWg[3] * fc;
  double result_kronrod = kWgk[7] * fc;
  for (int j = 0; j < 7; ++j) {
    const double offset = half * kXgk[j];
    const double fsum = f(center - offset) + f(center + offset);
    result_kronrod += kWgk[j] * fsum;
    if (j % 2 == 1) result_gauss += kWg[j / 2] * fsum;
  }
  result_gauss *= half;
  result_kronrod *= half;
  return {result_kronrod, std::fabs(result_kronrod - result_gauss)};
}

struct Panel {
  double a, b;
  double integral, error;
  int depth;
};

}  // namespace

double integrate_segmented(const std::function<double(double)>& f, double a,
                           double b, std::span<const double> interior_nodes,
                           const QuadratureOptions& opts) {
  if (!(b > a)) return 0.0;
  const double width = b - a;

  std::vector<double> cuts;
  cuts.reserve(interior_nodes.size() + 2);
  cuts.push_back(a);
  for (double x : interior_nodes) {
    if (x > a && x < b) cuts.push_back(x);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<Panel> stack;
  double total = 0.0;  // running whole-interval estimate, refined as we go
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const PanelResult r = gk15(f, cuts[i], cuts[i + 1]);
    stack.push_back({cuts[i], cuts[i + 1], r.integral, r.error, 0});
    total += r.integral;
  }

  double sum = 0.0;
  while (!stack.empty()) {
    const Panel p = stack.back();
    stack.pop_back();
    // Absolute floor keeps zero integrals terminating; the width-scaled
    // share bounds the summed accepted error by ~rel_tol * |total|.
    const double tol_global = opts.rel_tol * std::max(std::fabs(total), 1e-300);
    const double share = tol_global * (p.b - p.a) / width;
    if (p.error <= share || p.error <= 0.01 * tol_global) {
      sum += p.integral;
      continue;
    }
    if (p.depth >= opts.max_depth) {
      throw NumericalError("adaptive quadrature did not converge within " +
                           std::to_string(opts.max_depth) +
                           " subdivision levels");
    }
    const double mid = 0.5 * (p.a + p.b);
    const PanelResult left = gk15(f, p.a, mid);
    const PanelResult right = gk15(f, mid, p.b);
    total += left.integral + right.integral - p.integral;
    stack.push_back({p.a, mid, left.integral, left.error, p.depth + 1});
    stack.push_back({mid, p.b, right.integral, right.error, p.depth + 1});
  }
  return sum;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& opts) {
  return integrate_segmented(f, a, b, {}, opts);
}

}  // namespace hosim

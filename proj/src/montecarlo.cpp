#include "hosim/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <thread>
#include <vector>

#include "hosim/analytic.hpp"
#include "hosim/geometry.hpp"

namespace hosim::mc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kZ95 = 1.959963984540054;  // 97.5th percentile of N(0, 1)

// Runs body(0..reps-1), spreading replications over `threads` workers.
// Workers only write to disjoint per-replication slots, so the caller's
// reduction order (always by replication index) fixes the result bits.
void parallel_for_reps(int reps, int threads,
                       const std::function<void(int)>& body) {
  threads = std::max(1, std::min(threads, reps));
  if (threads == 1) {
    for (int r = 0; r < reps; ++r) body(r);
    return;
  }
  std::atomic<int> next{0};
  std::mutex failure_mutex;
  std::exception_ptr failure;
  const auto work = [&] {
    for (;;) {
      const int r = next.fetch_add(1);
      if (r >= reps) return;
      try {
        body(r);
      } catch (...) {
        const std::scoped_lock lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads - 1);
  for (int i = 1; i < threads; ++i) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

// One drone drawn from the field law: position uniform in the disk of
// radius R (area-uniform radius, uniform angle), then speed and direction.
// The draw order is part of the determinism contract: the two-pass pruning
// in run_handover_process replays this exact sequence.
DroneState draw_drone(const DroneNetworkModel& model, double R,
                      CounterRng& rng, int id) {
  const double r = R * std::sqrt(rng.next_double());
  const double phi = rng.uniform(0.0, 2.0 * kPi);
  const double speed = model.speeds().sample(rng);
  const double direction = model.directions().sample(rng);
  return DroneState::make(id, r * std::cos(phi), r * std::sin(phi), speed,
                          direction);
}

// Smallest t > 0 at which the quadratic a t^2 + b t + c enters negative
// territory. When the value is already negative at t = 0 (possible for the
// just-displaced serving drone at an event instant, up to rounding), the
// entry of the next negative excursion is returned instead; nullopt when no
// strictly positive down-crossing exists.
std::optional<double> next_down_crossing(double a, double b, double c) {
  if (a == 0.0) {
    if (b < 0.0 && c > 0.0) return -c / b;
    return std::nullopt;
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc <= 0.0) return std::nullopt;  // constant sign (a touch never crosses)
  const double sq = std::sqrt(disc);
  const double q = -0.5 * (b + std::copysign(sq, b));
  const double r1 = q / a;
  const double r2 = c / q;
  const double t_lo = std::min(r1, r2);
  const double t_hi = std::max(r1, r2);
  const double sign_now = (c != 0.0) ? c : ((b != 0.0) ? b : a);
  if (a > 0.0) {
    // Negative exactly on (t_lo, t_hi).
    if (sign_now > 0.0 && t_lo > 0.0) return t_lo;
    return std::nullopt;
  }
  // a < 0: negative on (-inf, t_lo) and (t_hi, +inf).
  if (sign_now > 0.0) return t_hi;
  if (t_lo > 0.0) return t_hi;  // below now, back above on [t_lo, t_hi]
  return std::nullopt;
}

// A couple of Newton steps on the selected crossing so the reported event
// time satisfies |d_new^2(t) - d_old^2(t)| <= 1e-9 * max(d^2).
double polish_root(double a, double b, double c, double t) {
  for (int it = 0; it < 3; ++it) {
    const double f = (a * t + b) * t + c;
    const double df = 2.0 * a * t + b;
    if (df == 0.0) break;
    const double step = f / df;
    t -= step;
    if (std::fabs(step) <= 1e-15 * std::fabs(t)) break;
  }
  return t;
}

struct Crossing {
  double time = kInf;
  std::size_t index = static_cast<std::size_t>(-1);
  bool found() const { return index != static_cast<std::size_t>(-1); }
};

// Earliest down-crossing of `serving`'s squared distance by any drone in
// `field` other than field[skip], searched from global time t_now on.
// Ties resolve to the lowest drone id.
template <typename FieldT>
Crossing earliest_crossing(const FieldT& field, std::size_t skip,
                           const DroneState& serving, double t_now) {
  Crossing best;
  int best_id = 0;
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (i == skip) continue;
    const DroneState& d = field[i];
    const double a = d.c2 - serving.c2;
    const double b = d.c1 - serving.c1;
    const double c = d.c0 - serving.c0;
    const double b_local = 2.0 * a * t_now + b;
    const double c_local = (a * t_now + b) * t_now + c;
    const auto tau = next_down_crossing(a, b_local, c_local);
    if (!tau) continue;
    const double t_cand = t_now + *tau;
    if (t_cand < best.time ||
        (t_cand == best.time && best.found() && d.id < best_id)) {
      best.time = t_cand;
      best.index = i;
      best_id = d.id;
    }
  }
  return best;
}

double wilson_or_zero(std::int64_t k, std::int64_t n) {
  return wilson_halfwidth(k, n);
}

CcdfCurve curve_from_counts(const std::vector<double>& s_grid,
                            const std::vector<std::int64_t>& counts,
                            int reps) {
  std::vector<double> values(s_grid.size());
  std::vector<double> ci(s_grid.size());
  for (std::size_t j = 0; j < s_grid.size(); ++j) {
    values[j] = static_cast<double>(counts[j]) / reps;
    ci[j] = wilson_or_zero(counts[j], reps);
  }
  return CcdfCurve::empirical(s_grid, values, ci);
}

void check_estimator_args(const std::vector<double>& s_grid, int reps) {
  if (s_grid.empty()) {
    throw std::invalid_argument("estimator: s_grid must be non-empty");
  }
  if (reps < 1) {
    throw std::invalid_argument("estimator: reps must be >= 1");
  }
}

}  // namespace

DroneState DroneState::make(int id, double x0, double y0, double speed,
                            double direction) {
  DroneState d;
  d.id = id;
  d.x0 = x0;
  d.y0 = y0;
  d.speed = speed;
  d.direction = direction;
  d.c0 = x0 * x0 + y0 * y0;
  d.c1 = 2.0 * speed * (x0 * std::cos(direction) + y0 * std::sin(direction));
  d.c2 = speed * speed;
  return d;
}

double DroneState::min_dist2_over(double t_lo, double t_hi) const {
  double best = std::min(dist2_at(t_lo), dist2_at(t_hi));
  if (c2 > 0.0) {
    const double t_vertex = -c1 / (2.0 * c2);
    if (t_vertex > t_lo && t_vertex < t_hi) {
      best = std::min(best, dist2_at(t_vertex));
    }
  }
  return std::max(0.0, best);
}

std::vector<DroneState> sample_field(const DroneNetworkModel& model,
                                     double window_radius, CounterRng& rng,
                                     std::optional<double> exclusion_radius) {
  if (!(window_radius > 0.0)) {
    throw std::invalid_argument("sample_field: window_radius must be > 0");
  }
  if (exclusion_radius && !(*exclusion_radius >= 0.0)) {
    throw std::invalid_argument("sample_field: exclusion radius must be >= 0");
  }
  const double excl2 =
      exclusion_radius ? *exclusion_radius * *exclusion_radius : -1.0;
  const std::uint64_t n =
      rng.poisson(model.lambda() * kPi * window_radius * window_radius);
  std::vector<DroneState> out;
  out.reserve(n);
  int id = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    DroneState d = draw_drone(model, window_radius, rng, 0);
    if (d.c0 < excl2) continue;  // thinned: inside the exclusion disk
    d.id = id++;
    out.push_back(d);
  }
  return out;
}

std::optional<double> first_handover_time(const DroneState& serving,
                                          const std::vector<DroneState>& others,
                                          double horizon) {
  if (!(horizon >= 0.0)) {
    throw std::invalid_argument("first_handover_time: horizon must be >= 0");
  }
  const Crossing hit =
      earliest_crossing(others, static_cast<std::size_t>(-1), serving, 0.0);
  if (!hit.found() || hit.time > horizon) return std::nullopt;
  const DroneState& d = others[hit.index];
  const double t = polish_root(d.c2 - serving.c2, d.c1 - serving.c1,
                               d.c0 - serving.c0, hit.time);
  return std::min(std::max(t, std::numeric_limits<double>::min()), horizon);
}

bool endpoint_serving_unchanged(const DroneState& serving,
                                const std::vector<DroneState>& others,
                                double s) {
  const double d0 = serving.dist2_at(s);
  for (const DroneState& d : others) {
    const double di = d.dist2_at(s);
    if (di < d0 || (di == d0 && d.id < serving.id)) return false;
  }
  return true;
}

double tracking_radius(double lambda, double epsilon) {
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("tracking_radius: lambda must be > 0");
  }
  if (!(epsilon > 0.0) || !(epsilon < 1.0)) {
    throw std::invalid_argument("tracking_radius: epsilon must lie in (0, 1)");
  }
  return std::sqrt(std::log(1.0 / epsilon) / (lambda * kPi));
}

double simulation_window_radius(const DroneNetworkModel& model, double horizon,
                                double window_epsilon,
                                double speed_quantile_epsilon) {
  if (!(horizon >= 0.0)) {
    throw std::invalid_argument(
        "simulation_window_radius: horizon must be >= 0");
  }
  return tracking_radius(model.lambda(), window_epsilon) +
         model.speeds().max_speed(speed_quantile_epsilon) * horizon;
}

double wilson_halfwidth(std::int64_t successes, std::int64_t trials) {
  if (trials < 1 || successes < 0 || successes > trials) {
    throw std::invalid_argument("wilson_halfwidth: need 0 <= successes <= trials");
  }
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2n = kZ95 * kZ95 / n;
  return kZ95 * std::sqrt(p * (1.0 - p) / n + z2n / (4.0 * n)) / (1.0 + z2n);
}

namespace {

// Shared replication core of the two conditional-CCDF estimators: the
// serving drone is pinned at (r0, 0) with speed v0 and direction theta0;
// the rest of the field is sampled outside b(0, r0).
template <typename PerRep>
void for_each_conditional_rep(const DroneNetworkModel& model, double r0,
                              double v0, double theta0, double horizon,
                              int reps, std::uint64_t seed, int threads,
                              std::optional<double> window_radius,
                              const PerRep& per_rep) {
  if (!(r0 > 0.0) || !(v0 >= 0.0)) {
    throw std::invalid_argument("estimator: need r0 > 0 and v0 >= 0");
  }
  const double window = window_radius
                            ? *window_radius
                            : simulation_window_radius(model, horizon);
  if (!(window > 0.0)) {
    throw std::invalid_argument("estimator: window radius must be > 0");
  }
  parallel_for_reps(reps, threads, [&](int rep) {
    CounterRng rng(seed, static_cast<std::uint64_t>(rep));
    const DroneState serving = DroneState::make(0, r0, 0.0, v0, theta0);
    std::vector<DroneState> others = sample_field(model, window, rng, r0);
    for (DroneState& d : others) d.id += 1;  // serving holds id 0
    per_rep(rep, serving, others);
  });
}

}  // namespace

CcdfCurve estimate_conditional_ccdf(const DroneNetworkModel& model, double r0,
                                    double v0, double theta0,
                                    const std::vector<double>& s_grid,
                                    int reps, std::uint64_t seed, int threads,
                                    std::optional<double> window_radius) {
  check_estimator_args(s_grid, reps);
  const double horizon = s_grid.back();
  std::vector<double> first_time(reps);
  for_each_conditional_rep(
      model, r0, v0, theta0, horizon, reps, seed, threads, window_radius,
      [&](int rep, const DroneState& serving,
          const std::vector<DroneState>& others) {
        const auto t = first_handover_time(serving, others, horizon);
        first_time[rep] = t ? *t : kInf;
      });
  std::vector<std::int64_t> counts(s_grid.size(), 0);
  for (int rep = 0; rep < reps; ++rep) {
    for (std::size_t j = 0; j < s_grid.size(); ++j) {
      if (first_time[rep] > s_grid[j]) ++counts[j];
    }
  }
  return curve_from_counts(s_grid, counts, reps);
}

CcdfCurve estimate_endpoint_ccdf(const DroneNetworkModel& model, double r0,
                                 double v0, double theta0,
                                 const std::vector<double>& s_grid, int reps,
                                 std::uint64_t seed, int threads,
                                 std::optional<double> window_radius) {
  check_estimator_args(s_grid, reps);
  const double horizon = s_grid.back();
  const std::size_t m = s_grid.size();
  std::vector<std::uint8_t> unchanged(static_cast<std::size_t>(reps) * m);
  for_each_conditional_rep(
      model, r0, v0, theta0, horizon, reps, seed, threads, window_radius,
      [&](int rep, const DroneState& serving,
          const std::vector<DroneState>& others) {
        std::uint8_t* row = unchanged.data() + static_cast<std::size_t>(rep) * m;
        for (std::size_t j = 0; j < m; ++j) {
          row[j] = endpoint_serving_unchanged(serving, others, s_grid[j]);
        }
      });
  std::vector<std::int64_t> counts(m, 0);
  for (int rep = 0; rep < reps; ++rep) {
    const std::uint8_t* row = unchanged.data() + static_cast<std::size_t>(rep) * m;
    for (std::size_t j = 0; j < m; ++j) counts[j] += row[j];
  }
  return curve_from_counts(s_grid, counts, reps);
}

HandoverTrace trace_from_field(const std::vector<DroneState>& field,
                               double horizon) {
  if (!(horizon > 0.0)) {
    throw std::invalid_argument("trace_from_field: horizon must be > 0");
  }
  HandoverTrace trace;
  trace.horizon = horizon;
  if (field.empty()) {
    trace.serving_ids = {-1};
    return trace;
  }
  std::size_t cur = 0;
  for (std::size_t i = 1; i < field.size(); ++i) {
    const double di = field[i].c0;
    const double dc = field[cur].c0;
    if (di < dc || (di == dc && field[i].id < field[cur].id)) cur = i;
  }
  trace.serving_ids.push_back(field[cur].id);
  double t_now = 0.0;
  for (;;) {
    const DroneState& serving = field[cur];
    const Crossing hit = earliest_crossing(field, cur, serving, t_now);
    if (!hit.found() || hit.time > horizon) break;
    const DroneState& entrant = field[hit.index];
    double t_star =
        polish_root(entrant.c2 - serving.c2, entrant.c1 - serving.c1,
                    entrant.c0 - serving.c0, hit.time);
    if (!(t_star > t_now)) {
      t_star = std::nextafter(t_now, kInf);  // keep event times increasing
    }
    if (t_star > horizon) break;
    trace.event_times.push_back(t_star);
    trace.serving_ids.push_back(entrant.id);
    cur = hit.index;
    t_now = t_star;
  }
  return trace;
}

namespace {

// Upper bound (squared) on the nearest-drone distance over [0, T], from a
// candidate subset: each d_i^2 is convex in t, so on any interval its
// maximum sits at an endpoint, and min-over-candidates of that endpoint
// maximum bounds the nearest distance everywhere in the interval.
double envelope_bound_sq(const std::vector<DroneState>& candidates, double T) {
  constexpr int kIntervals = 128;
  std::vector<double> prev(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    prev[i] = candidates[i].c0;
  }
  double bound_sq = 0.0;
  for (int j = 1; j <= kIntervals; ++j) {
    const double t = T * j / kIntervals;
    double interval_bound = kInf;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      const double cur = candidates[i].dist2_at(t);
      interval_bound = std::min(interval_bound, std::max(prev[i], cur));
      prev[i] = cur;
    }
    bound_sq = std::max(bound_sq, interval_bound);
  }
  return bound_sq;
}

}  // namespace

HandoverTrace run_handover_process(const DroneNetworkModel& model, double T,
                                   CounterRng& rng, double window_epsilon,
                                   double speed_quantile_epsilon) {
  if (!(T > 0.0)) {
    throw std::invalid_argument("run_handover_process: T must be > 0");
  }
  const double window = simulation_window_radius(
      model, T, window_epsilon, speed_quantile_epsilon);
  const double mean_count = model.lambda() * kPi * window * window;
  constexpr std::size_t kEnvelopeSize = 256;

  const CounterRng replay = rng;  // snapshot for the pruning replay pass
  const std::uint64_t n = rng.poisson(mean_count);

  std::vector<DroneState> field;
  if (n <= kEnvelopeSize) {
    field.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
      field.push_back(draw_drone(model, window, rng, static_cast<int>(i)));
    }
    return trace_from_field(field, T);
  }

  // Pass 1: stream the field, keeping only the kEnvelopeSize drones with the
  // smallest closest approach (max-heap on dmin^2).
  std::vector<std::pair<double, DroneState>> top;
  top.reserve(kEnvelopeSize + 1);
  const auto heap_cmp = [](const std::pair<double, DroneState>& a,
                           const std::pair<double, DroneState>& b) {
    return a.first < b.first;
  };
  for (std::uint64_t i = 0; i < n; ++i) {
    const DroneState d = draw_drone(model, window, rng, static_cast<int>(i));
    const double dmin2 = d.min_dist2_over(0.0, T);
    if (top.size() < kEnvelopeSize) {
      top.emplace_back(dmin2, d);
      std::push_heap(top.begin(), top.end(), heap_cmp);
    } else if (dmin2 < top.front().first) {
      std::pop_heap(top.begin(), top.end(), heap_cmp);
      top.back() = {dmin2, d};
      std::push_heap(top.begin(), top.end(), heap_cmp);
    }
  }
  std::vector<DroneState> candidates;
  candidates.reserve(top.size());
  for (const auto& e : top) candidates.push_back(e.second);
  // Any drone that is ever nearest (hence any that ever crosses the serving
  // distance) must dip under this bound, so dropping the rest cannot change
  // the trace. Tiny relative slack guards the boundary against rounding.
  const double keep_sq = envelope_bound_sq(candidates, T) * (1.0 + 1e-9);

  // Pass 2: replay the same draw sequence and keep the relevant drones with
  // their original generation ids (so tie-breaks match the unpruned field).
  CounterRng rng2 = replay;
  const std::uint64_t n2 = rng2.poisson(mean_count);
  field.reserve(2 * kEnvelopeSize);
  for (std::uint64_t i = 0; i < n2; ++i) {
    const DroneState d = draw_drone(model, window, rng2, static_cast<int>(i));
    if (d.min_dist2_over(0.0, T) <= keep_sq) field.push_back(d);
  }
  return trace_from_field(field, T);
}

RateReport estimate_rate_and_sojourn(const DroneNetworkModel& model,
                                     const SimulationConfig& cfg,
                                     int threads) {
  cfg.validate();
  const int reps = cfg.replications;
  std::vector<std::uint64_t> events(reps, 0);
  std::vector<double> sojourn_sum(reps, 0.0);
  std::vector<std::uint64_t> sojourn_count(reps, 0);
  parallel_for_reps(reps, threads, [&](int rep) {
    CounterRng rng(cfg.seed, static_cast<std::uint64_t>(rep));
    const HandoverTrace trace =
        run_handover_process(model, cfg.horizon_T, rng, cfg.window_epsilon,
                             cfg.speed_quantile_epsilon);
    events[rep] = trace.handovers();
    // Complete sojourns only: intervals between consecutive events. The
    // censored stubs at 0 and T are discarded.
    for (std::size_t k = 1; k < trace.event_times.size(); ++k) {
      sojourn_sum[rep] += trace.event_times[k] - trace.event_times[k - 1];
      ++sojourn_count[rep];
    }
  });

  std::uint64_t total_events = 0;
  double total_sojourn = 0.0;
  std::uint64_t total_intervals = 0;
  for (int rep = 0; rep < reps; ++rep) {
    total_events += events[rep];
    total_sojourn += sojourn_sum[rep];
    total_intervals += sojourn_count[rep];
  }
  const double rate =
      static_cast<double>(total_events) / (cfg.horizon_T * reps);

  RateReport report;
  report.method = RateReport::Method::MonteCarlo;
  report.handover_rate = rate;
  report.mean_sojourn = total_intervals > 0
                            ? total_sojourn / static_cast<double>(total_intervals)
                            : kInf;
  if (reps > 1) {
    double ss = 0.0;
    for (int rep = 0; rep < reps; ++rep) {
      const double dev =
          static_cast<double>(events[rep]) / cfg.horizon_T - rate;
      ss += dev * dev;
    }
    const double var = ss / (reps - 1);
    report.ci_halfwidth = kZ95 * std::sqrt(var / reps);
  }
  return report;
}

CcdfCurve estimate_hybrid_ccdf(const HybridTierConfig& cfg,
                               const DroneNetworkModel& droneModel,
                               int served_tier,
                               const HybridConditioning& conditioning,
                               const std::vector<double>& s_grid, int reps,
                               std::uint64_t seed, double dt, int threads) {
  cfg.validate();
  check_estimator_args(s_grid, reps);
  if (served_tier != 1 && served_tier != 2) {
    throw std::invalid_argument(
        "estimate_hybrid_ccdf: served_tier must be 1 or 2");
  }
  if (!(conditioning.r0 > 0.0) || !(conditioning.v0 >= 0.0)) {
    throw std::invalid_argument(
        "estimate_hybrid_ccdf: need r0 > 0 and v0 >= 0");
  }
  if (!(dt > 0.0)) {
    throw std::invalid_argument("estimate_hybrid_ccdf: dt must be > 0");
  }
  const double s_max = s_grid.back();
  const DroneNetworkModel drones(cfg.tier1.lambda, droneModel.height(),
                                 droneModel.speeds(),
                                 droneModel.directions());
  const double window1 = simulation_window_radius(drones, s_max);
  const double window2 = tracking_radius(cfg.tier2.lambda, 1e-6);
  // t = 0 association region: same-tier stations beyond the serving
  // distance, cross-tier stations beyond the matching-power boundary.
  const double excl1 = served_tier == 1
                           ? conditioning.r0
                           : hybrid_boundary(cfg, 1, 2, conditioning.r0);
  const double excl2 = served_tier == 1
                           ? hybrid_boundary(cfg, 2, 1, conditioning.r0)
                           : conditioning.r0;
  const std::int64_t steps =
      static_cast<std::int64_t>(std::ceil(s_max / dt - 1e-9));

  std::vector<double> first_time(reps, kInf);
  parallel_for_reps(reps, threads, [&](int rep) {
    CounterRng rng(seed, static_cast<std::uint64_t>(rep));
    const std::vector<DroneState> others1 =
        sample_field(drones, window1, rng, excl1);
    // Tier 2 is static: only the nearest surviving planar distance matters.
    double nearest2_sq = kInf;
    const std::uint64_t n2 =
        rng.poisson(cfg.tier2.lambda * kPi * window2 * window2);
    for (std::uint64_t i = 0; i < n2; ++i) {
      const double r = window2 * std::sqrt(rng.next_double());
      (void)rng.uniform(0.0, 2.0 * kPi);  // angle is irrelevant for a static tier
      if (r < excl2) continue;
      nearest2_sq = std::min(nearest2_sq, r * r);
    }

    double detected = kInf;
    if (served_tier == 1) {
      const DroneState serving = DroneState::make(
          0, conditioning.r0, 0.0, conditioning.v0, conditioning.theta0);
      const double pow_bias = std::pow(cfg.tier2.bias / cfg.tier1.bias,
                                       2.0 / cfg.tier2.alpha);
      const double exp21 = cfg.tier1.alpha / cfg.tier2.alpha;
      const double h1_sq = cfg.tier1.height * cfg.tier1.height;
      const double h2_sq = cfg.tier2.height * cfg.tier2.height;
      for (std::int64_t j = 1; j <= steps; ++j) {
        const double t = dt * static_cast<double>(j);
        const double serving_sq = serving.dist2_at(t);
        bool changed = false;
        for (const DroneState& d : others1) {
          if (d.dist2_at(t) < serving_sq) {
            changed = true;
            break;
          }
        }
        if (!changed && nearest2_sq < kInf) {
          // Tier-2 station at planar r2 beats the serving drone at planar
          // r1 iff r2^2 < f21(r1)^2 (no clamp needed for the comparison).
          const double f21_sq =
              pow_bias * std::pow(serving_sq + h1_sq, exp21) - h2_sq;
          changed = nearest2_sq < f21_sq;
        }
        if (changed) {
          detected = t;
          break;
        }
      }
    } else {
      // Static serving station: only tier-1 drones can ever beat it, and
      // they do exactly when their planar distance dips below f12(r0).
      const double beat_sq = excl1 * excl1;
      for (std::int64_t j = 1; j <= steps; ++j) {
        const double t = dt * static_cast<double>(j);
        for (const DroneState& d : others1) {
          if (d.dist2_at(t) < beat_sq) {
            detected = t;
            break;
          }
        }
        if (detected < kInf) break;
      }
    }
    first_time[rep] = detected;
  });

  std::vector<std::int64_t> counts(s_grid.size(), 0);
  for (int rep = 0; rep < reps; ++rep) {
    for (std::size_t j = 0; j < s_grid.size(); ++j) {
      if (first_time[rep] > s_grid[j]) ++counts[j];
    }
  }
  return curve_from_counts(s_grid, counts, reps);
}

AreaEstimate area_dart_oracle(const SweepParams& p, std::int64_t darts,
                              CounterRng& rng) {
  p.validate();
  if (darts < 1) {
    throw std::invalid_argument("area_dart_oracle: darts must be >= 1");
  }
  const double r_far = serving_distance_at(p.r0, p.v0, p.theta0, p.s);
  const double r_max = std::max(p.r0, r_far);
  const double x_lo = -r_max;
  const double x_hi = p.v * p.s + r_max;
  const double box_area = (x_hi - x_lo) * 2.0 * r_max;
  std::int64_t hits = 0;
  for (std::int64_t i = 0; i < darts; ++i) {
    const double x = rng.uniform(x_lo, x_hi);
    const double y = rng.uniform(-r_max, r_max);
    if (CoverageQuadratic::at_point(p, x, y).covered(0.0, p.s)) ++hits;
  }
  const double frac = static_cast<double>(hits) / static_cast<double>(darts);
  AreaEstimate est;
  est.area = box_area * frac;
  est.se = box_area *
           std::sqrt(std::max(0.0, frac * (1.0 - frac)) /
                     static_cast<double>(darts));
  return est;
}

}  // namespace hosim::mc

// Experiment runner: reproduces the handover-analysis figures and validation
// sweeps as CSV. Subcommands: fig1, rates, corollary, area-check, hybrid.
//
//   hosim-cli <cmd> [--config cfg.json] [--out file.csv] [--seed N]
//                   [--reps N] [--tol X] [--dt X]
//
// Config files are JSON whose keys mirror the library types; command-line
// flags override config values. Output is UTF-8 CSV with a header row, LF
// line endings, and floating-point fields at 17 significant digits, so a
// rerun with the same seed and config is byte-identical. The only
// environment knob is HOSIM_THREADS (worker threads; results do not depend
// on it). Exit codes: 0 success, 1 configuration error, 2 numerical
// failure, 3 I/O error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hosim/analytic.hpp"
#include "hosim/geometry.hpp"
#include "hosim/model.hpp"
#include "hosim/montecarlo.hpp"
#include "hosim/quadrature.hpp"
#include "hosim/rng.hpp"
#include "hosim/serialize.hpp"

namespace {

using nlohmann::json;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int thread_count() {
  const char* env = std::getenv("HOSIM_THREADS");
  if (!env) return 1;
  const int n = std::atoi(env);
  return n >= 1 ? n : 1;
}

std::string g17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<double> linspace(double hi, int n) {
  if (n < 2 || !(hi > 0.0)) {
    throw std::invalid_argument("grid needs >= 2 points and s_max > 0");
  }
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = hi * i / (n - 1);
  g.front() = 0.0;
  g.back() = hi;
  return g;
}

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("cannot read config file: " + path);
  return json::parse(ss.str());  // parse_error maps to a config error
}

// RFC 4180 quoting for free-form CSV fields (speed-law names contain commas).
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_output(const std::string& out_path, const std::string& csv) {
  if (out_path.empty()) {
    std::cout << csv;
    if (!std::cout) throw IoError("cannot write to stdout");
    return;
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open output file: " + out_path);
  out << csv;
  out.flush();
  if (!out) throw IoError("cannot write output file: " + out_path);
}

// Common flag values; unset optionals fall through to config, then defaults.
struct Flags {
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> reps;
  std::optional<double> tol;
  std::optional<double> dt;
};

double cfg_number(const json& cfg, const char* key, double fallback) {
  const auto it = cfg.find(key);
  if (it == cfg.end()) return fallback;
  if (!it->is_number()) {
    throw std::invalid_argument(std::string("config: key \"") + key +
                                "\" must be a number");
  }
  return it->get<double>();
}

int cfg_int(const json& cfg, const char* key, int fallback) {
  const auto it = cfg.find(key);
  if (it == cfg.end()) return fallback;
  if (!it->is_number_integer()) {
    throw std::invalid_argument(std::string("config: key \"") + key +
                                "\" must be an integer");
  }
  return it->get<int>();
}

std::uint64_t resolve_seed(const Flags& f, const json& cfg) {
  if (f.seed) return *f.seed;
  const auto it = cfg.find("seed");
  if (it == cfg.end()) return 1;
  if (!it->is_number_integer() && !it->is_number_unsigned()) {
    throw std::invalid_argument("config: key \"seed\" must be an integer");
  }
  return it->get<std::uint64_t>();
}

double resolve_tol(const Flags& f, const json& cfg) {
  return f.tol ? *f.tol : cfg_number(cfg, "tol", 1e-6);
}

int resolve_reps(const Flags& f, const json& cfg, int fallback) {
  return f.reps ? *f.reps : cfg_int(cfg, "reps", fallback);
}

hosim::DroneNetworkModel default_fig1_model() {
  return hosim::DroneNetworkModel(
      5e-4, 0.0, hosim::SpeedDistribution::uniform_range(5.0, 25.0),
      hosim::DirectionDistribution::uniform_circle());
}

// ------------------------------------------------------------------ fig1 --

int cmd_fig1(const Flags& flags) {
  const json cfg = load_config(flags.config_path);
  const hosim::DroneNetworkModel model =
      cfg.contains("model") ? hosim::model_from_json(cfg.at("model"))
                            : default_fig1_model();
  const double r0 = cfg_number(cfg, "r0", 12.0);
  const double v0 = cfg_number(cfg, "v0", 10.0);
  const double theta0 = cfg_number(cfg, "theta0", std::numbers::pi / 3.0);
  const double s_max = cfg_number(cfg, "s_max", 2.0);
  const int grid_points = cfg_int(cfg, "grid_points", 20);
  const int reps = resolve_reps(flags, cfg, 100000);
  const double tol = resolve_tol(flags, cfg);
  const std::uint64_t seed = resolve_seed(flags, cfg);
  const std::vector<double> grid = linspace(s_max, grid_points);

  std::vector<double> analytic(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    analytic[j] = hosim::ccdf_given_r0(model, r0, v0, theta0, grid[j], tol);
  }
  // Validate monotonicity/range before emitting (slack covers quadrature
  // wiggle at the requested tolerance).
  hosim::CcdfCurve::analytic(grid, analytic, std::max(1e-9, 4.0 * tol));

  const int threads = thread_count();
  const hosim::CcdfCurve mc = hosim::mc::estimate_conditional_ccdf(
      model, r0, v0, theta0, grid, reps, seed, threads);
  const hosim::CcdfCurve endpoint = hosim::mc::estimate_endpoint_ccdf(
      model, r0, v0, theta0, grid, reps, seed, threads);

  std::string csv =
      "s,ccdf_analytic,ccdf_mc,ci_halfwidth,ccdf_endpoint_mc,ci_endpoint\n";
  for (std::size_t j = 0; j < grid.size(); ++j) {
    csv += g17(grid[j]) + "," + g17(analytic[j]) + "," +
           g17(mc.values()[j]) + "," + g17(mc.ci_halfwidth()[j]) + "," +
           g17(endpoint.values()[j]) + "," + g17(endpoint.ci_halfwidth()[j]) +
           "\n";
  }
  write_output(flags.out_path, csv);
  return 0;
}

// ----------------------------------------------------------------- rates --

std::vector<hosim::SpeedDistribution> config_distributions(
    const json& cfg, std::vector<hosim::SpeedDistribution> fallback) {
  const auto it = cfg.find("distributions");
  if (it == cfg.end()) return fallback;
  if (!it->is_array() || it->empty()) {
    throw std::invalid_argument(
        "config: \"distributions\" must be a non-empty array");
  }
  std::vector<hosim::SpeedDistribution> out;
  out.reserve(it->size());
  for (const json& d : *it) out.push_back(hosim::speed_from_json(d));
  return out;
}

int cmd_rates(const Flags& flags) {
  const json cfg = load_config(flags.config_path);
  std::vector<double> lambdas = {1e-4, 2e-4, 5e-4, 1e-3};
  if (const auto it = cfg.find("lambdas"); it != cfg.end()) {
    if (!it->is_array() || it->empty()) {
      throw std::invalid_argument(
          "config: \"lambdas\" must be a non-empty array");
    }
    lambdas = it->get<std::vector<double>>();
  }
  const std::vector<hosim::SpeedDistribution> dists = config_distributions(
      cfg, {hosim::SpeedDistribution::constant(15.0),
            hosim::SpeedDistribution::uniform_range(5.0, 25.0),
            hosim::SpeedDistribution::exponential(15.0)});
  const double tol = resolve_tol(flags, cfg);
  const std::uint64_t seed = resolve_seed(flags, cfg);
  hosim::SimulationConfig sim;
  sim.horizon_T = cfg_number(cfg, "horizon_T", 200.0);
  sim.replications = resolve_reps(flags, cfg, cfg_int(cfg, "replications", 200));
  const int threads = thread_count();

  std::string csv = "lambda,dist_name,H_analytic,H_mc,ci,mean_sojourn_analytic\n";
  std::uint64_t cell = 0;
  for (const double lambda : lambdas) {
    for (const hosim::SpeedDistribution& dist : dists) {
      const hosim::DroneNetworkModel model(
          lambda, 0.0, dist, hosim::DirectionDistribution::uniform_circle());
      const hosim::RateReport an = hosim::handover_rate(model, tol);
      hosim::SimulationConfig cell_sim = sim;
      cell_sim.seed = hosim::derive_seed(seed, cell++);
      const hosim::RateReport mc =
          hosim::mc::estimate_rate_and_sojourn(model, cell_sim, threads);
      csv += g17(lambda) + "," + csv_field(dist.name()) + "," +
             g17(an.handover_rate) +
             "," + g17(mc.handover_rate) + "," +
             g17(mc.ci_halfwidth.value_or(0.0)) + "," +
             (an.sojourn_is_infinite() ? std::string()
                                       : g17(an.mean_sojourn)) +
             "\n";
    }
  }
  write_output(flags.out_path, csv);
  return 0;
}

// ------------------------------------------------------------- corollary --

int cmd_corollary(const Flags& flags) {
  const json cfg = load_config(flags.config_path);
  const double lambda = cfg_number(cfg, "lambda", 5e-4);
  const std::vector<hosim::SpeedDistribution> dists = config_distributions(
      cfg, {hosim::SpeedDistribution::constant(15.0),
            hosim::SpeedDistribution::uniform_range(5.0, 25.0),
            hosim::SpeedDistribution::exponential(15.0),
            hosim::SpeedDistribution::two_point(30.0, 0.5),
            hosim::SpeedDistribution::discrete({{5.0, 0.5}, {25.0, 0.5}})});
  const double tol = resolve_tol(flags, cfg);

  std::string csv = "dist,mean,H,gap\n";
  for (const hosim::SpeedDistribution& dist : dists) {
    const hosim::DroneNetworkModel model(
        lambda, 0.0, dist, hosim::DirectionDistribution::uniform_circle());
    const double H = hosim::handover_rate(model, tol).handover_rate;
    const double gap = hosim::corollary_gap(lambda, dist, tol);
    csv += csv_field(dist.name()) + "," + g17(dist.mean()) + "," + g17(H) +
           "," + g17(gap) + "\n";
  }
  write_output(flags.out_path, csv);
  return 0;
}

// ------------------------------------------------------------ area-check --

std::string sweep_label(const hosim::SweepParams& p) {
  return "v=" + g17(p.v) + ";r0=" + g17(p.r0) + ";v0=" + g17(p.v0) +
         ";theta0=" + g17(p.theta0) + ";s=" + g17(p.s);
}

// Closed form when one is available: translating fixed disk (stadium),
// disks concentric at the origin, or zero horizon.
std::optional<double> exact_sweep_area(const hosim::SweepParams& p) {
  if (p.s == 0.0 || (p.v == 0.0 && p.v0 == 0.0)) {
    return std::numbers::pi * p.r0 * p.r0;
  }
  if (p.v0 == 0.0) {
    return 2.0 * p.r0 * p.v * p.s + std::numbers::pi * p.r0 * p.r0;
  }
  if (p.v == 0.0) {
    const double r_far =
        hosim::serving_distance_at(p.r0, p.v0, p.theta0, p.s);
    const double r_max = std::max(p.r0, r_far);
    return std::numbers::pi * r_max * r_max;
  }
  return std::nullopt;
}

int cmd_area_check(const Flags& flags) {
  const json cfg = load_config(flags.config_path);
  std::vector<hosim::SweepParams> rows;
  if (const auto it = cfg.find("rows"); it != cfg.end()) {
    if (!it->is_array() || it->empty()) {
      throw std::invalid_argument("config: \"rows\" must be a non-empty array");
    }
    for (const json& r : *it) rows.push_back(hosim::sweep_from_json(r));
  } else {
    rows = {
        {10.0, 12.0, 0.0, 0.0, 2.0},                      // stadium
        {0.0, 12.0, 10.0, std::numbers::pi / 3.0, 1.0},   // concentric
        {10.0, 12.0, 10.0, std::numbers::pi / 3.0, 0.0},  // zero horizon
        {7.0, 9.0, 13.0, 2.0 * std::numbers::pi / 3.0, 1.3},
        {18.0, 25.0, 6.0, std::numbers::pi / 4.0, 0.9},
    };
  }
  const double tol = resolve_tol(flags, cfg);
  const std::uint64_t seed = resolve_seed(flags, cfg);
  std::int64_t darts = 2000000;
  if (const auto it = cfg.find("darts"); it != cfg.end()) {
    if (!it->is_number_integer()) {
      throw std::invalid_argument("config: \"darts\" must be an integer");
    }
    darts = it->get<std::int64_t>();
  }

  std::string csv = "params,area_quadrature,area_darts,se,exact_if_known\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const hosim::SweepParams& p = rows[i];
    const double area = hosim::sweep_area(p, std::min(tol, 1e-2));
    hosim::CounterRng rng(hosim::derive_seed(seed, i));
    const hosim::mc::AreaEstimate darts_est =
        hosim::mc::area_dart_oracle(p, darts, rng);
    const std::optional<double> exact = exact_sweep_area(p);
    csv += csv_field(sweep_label(p)) + "," + g17(area) + "," +
           g17(darts_est.area) + "," +
           g17(darts_est.se) + "," + (exact ? g17(*exact) : std::string()) +
           "\n";
  }
  write_output(flags.out_path, csv);
  return 0;
}

// ---------------------------------------------------------------- hybrid --

int cmd_hybrid(const Flags& flags) {
  const json cfg = load_config(flags.config_path);
  hosim::HybridTierConfig tiers;
  if (cfg.contains("tiers")) {
    tiers = hosim::hybrid_from_json(cfg.at("tiers"));
  } else {
    tiers.tier1 = {1.0, 20.0, 5e-4, 4.0};
    tiers.tier2 = {1.0, 0.0, 1e-4, 4.0};
    tiers.validate();
  }
  const hosim::SpeedDistribution speeds =
      cfg.contains("speeds")
          ? hosim::speed_from_json(cfg.at("speeds"))
          : hosim::SpeedDistribution::uniform_range(5.0, 25.0);
  const hosim::DirectionDistribution directions =
      cfg.contains("directions")
          ? hosim::direction_from_json(cfg.at("directions"))
          : hosim::DirectionDistribution::uniform_circle();
  const hosim::DroneNetworkModel drones(tiers.tier1.lambda, tiers.tier1.height,
                                        speeds, directions);

  hosim::mc::HybridConditioning cond1;
  cond1.r0 = cfg_number(cfg, "tier1_r0", 12.0);
  cond1.v0 = cfg_number(cfg, "tier1_v0", 10.0);
  cond1.theta0 = cfg_number(cfg, "tier1_theta0", std::numbers::pi / 3.0);
  const double r0_tier2 = cfg_number(cfg, "tier2_r0", 30.0);

  const double s_max = cfg_number(cfg, "s_max", 1.0);
  const int grid_points = cfg_int(cfg, "grid_points", 11);
  const int reps = resolve_reps(flags, cfg, 20000);
  const double tol = resolve_tol(flags, cfg);
  const double dt = flags.dt ? *flags.dt : cfg_number(cfg, "dt", 1e-3);
  const std::uint64_t seed = resolve_seed(flags, cfg);
  const int threads = thread_count();
  const std::vector<double> grid = linspace(s_max, grid_points);

  hosim::mc::HybridConditioning cond2;
  cond2.r0 = r0_tier2;
  cond2.v0 = 0.0;
  cond2.theta0 = 0.0;

  const hosim::CcdfCurve mc1 = hosim::mc::estimate_hybrid_ccdf(
      tiers, drones, 1, cond1, grid, reps, hosim::derive_seed(seed, 1), dt,
      threads);
  const hosim::CcdfCurve mc2 = hosim::mc::estimate_hybrid_ccdf(
      tiers, drones, 2, cond2, grid, reps, hosim::derive_seed(seed, 2), dt,
      threads);

  std::string csv = "tier,s,ccdf_formula,ccdf_mc,ci\n";
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double formula = hosim::hybrid_ccdf_tier1(
        tiers, drones, cond1.r0, cond1.v0, cond1.theta0, grid[j], tol);
    csv += "1," + g17(grid[j]) + "," + g17(formula) + "," +
           g17(mc1.values()[j]) + "," + g17(mc1.ci_halfwidth()[j]) + "\n";
  }
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double formula =
        hosim::hybrid_ccdf_tier2(tiers, drones, r0_tier2, grid[j]);
    csv += "2," + g17(grid[j]) + "," + g17(formula) + "," +
           g17(mc2.values()[j]) + "," + g17(mc2.ci_halfwidth()[j]) + "\n";
  }
  write_output(flags.out_path, csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"handover-rate experiment runner (CSV output)"};
  app.require_subcommand(1);

  Flags flags;
  const auto add_common = [&flags](CLI::App* sub) {
    sub->add_option("--config", flags.config_path, "JSON config file");
    sub->add_option("--out", flags.out_path,
                    "output CSV path (default: stdout)");
    sub->add_option("--seed", flags.seed, "master RNG seed");
    sub->add_option("--reps", flags.reps, "Monte Carlo replications");
    sub->add_option("--tol", flags.tol, "relative quadrature tolerance");
    sub->add_option("--dt", flags.dt, "hybrid MC time step");
    return sub;
  };
  CLI::App* fig1 = add_common(app.add_subcommand(
      "fig1", "conditional CCDF of time to first handover (analytic vs MC)"));
  CLI::App* rates = add_common(app.add_subcommand(
      "rates", "handover rate sweep over density and speed laws"));
  CLI::App* corollary = add_common(app.add_subcommand(
      "corollary", "constant-speed lower bound gap per speed law"));
  CLI::App* area = add_common(app.add_subcommand(
      "area-check", "swept-area quadrature vs dart oracle"));
  CLI::App* hybrid = add_common(app.add_subcommand(
      "hybrid", "two-tier conditional CCDF (formula vs grid MC)"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // bad flags are a configuration error
  }

  try {
    if (fig1->parsed()) return cmd_fig1(flags);
    if (rates->parsed()) return cmd_rates(flags);
    if (corollary->parsed()) return cmd_corollary(flags);
    if (area->parsed()) return cmd_area_check(flags);
    if (hybrid->parsed()) return cmd_hybrid(flags);
    std::cerr << "error: no subcommand\n";
    return 1;
  } catch (const hosim::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 1;
  }
}

#include "bjacobi/cli/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <memory>
#include <ostream>

#include <CLI11.hpp>

#include "bjacobi/cli/checks.hpp"
#include "bjacobi/errors.hpp"
#include "bjacobi/experiments.hpp"
#include "bjacobi/parallel.hpp"
#include "bjacobi/regularized.hpp"
#include "bjacobi/version.hpp"

namespace bjacobi::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// ---- parsing -------------------------------------------------------------

template <class T>
void set_if(const CLI::Option* opt, const T& value, std::optional<T>& target) {
  if (opt->count() > 0) target = value;
}

// ---- helpers -------------------------------------------------------------

json run_json(const RunStats& r) {
  return {{"paths", r.n_paths},
          {"errored", r.errored},
          {"stopped_early", r.stopped_early},
          {"refinements", r.refinements},
          {"collisions", r.collisions},
          {"tamed_steps", r.tamed_steps},
          {"crossings", r.crossings},
          {"first_error", r.first_error}};
}

json threshold_json(const ThresholdResult& t) {
  return {{"value", number(t.value)}, {"no_collision", t.no_collision}};
}

json numbers(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(number(x));
  return out;
}

std::string csv_preamble(const RunConfig& cfg, const std::string& digest) {
  return "# bjacobi " + std::string(kVersion) + " config_digest=" + digest +
         " seed=" + std::to_string(cfg.seed) + "\n";
}

std::unique_ptr<DiffusionModel> make_model(const RunConfig& cfg) {
  const auto& m = cfg.model;
  if (m == "lambda") return std::make_unique<LambdaModel>(cfg.params);
  if (m == "dual") return std::make_unique<LambdaModel>(cfg.params, LambdaModel::Form::Dual);
  if (m == "phi") return std::make_unique<PhiModel>(cfg.params);
  if (m == "psi") return std::make_unique<PsiModel>(cfg.params);
  return std::make_unique<RegularizedModel>(regularization_from_string(m), cfg.params, cfg.reg_eps);
}

StateVector to_coord(const StateVector& lambda, Coord coord) {
  if (coord == Coord::Phi) return lambda_to_phi(lambda);
  if (coord == Coord::Psi) return phi_to_psi(lambda_to_phi(lambda));
  return lambda;
}

// ---- commands ------------------------------------------------------------

struct Context {
  const RunConfig& cfg;
  std::string digest;
  fs::path out;
  Summary summary;
};

void simulate(Context& c) {
  const RunConfig& cfg = c.cfg;
  const auto model = make_model(cfg);
  const auto exp = cfg.experiment();
  const auto integ = cfg.integrator();
  const StateVector x0 = to_coord(exp.start(), model->coord());
  const std::size_t paths = *cfg.paths;

  std::vector<PathRecord> records(paths);
  parallel_for(paths, cfg.threads, [&](std::size_t i) {
    records[i] = simulate_path(*model, integ, x0, NoiseSource(cfg.seed, i));
  });

  json events = json::array();
  std::size_t errored = 0;
  std::vector<std::vector<double>> finals(x0.size());
  for (std::size_t i = 0; i < paths; ++i) {
    const auto& r = records[i];
    const std::string name = paths == 1 ? "trajectory.csv" : "trajectory_" + std::to_string(i) + ".csv";
    write_text(c.out / name, emit_trajectory(r, c.digest));
    events.push_back({{"path_id", r.path_id},
                      {"termination", std::string(to_string(r.termination))},
                      {"error_reason", r.error_reason},
                      {"error_time", number(r.error_time)},
                      {"refinements", r.refinements},
                      {"collisions", r.collisions},
                      {"tamed_steps", r.tamed_steps},
                      {"crossings", r.crossings}});
    if (r.termination == Termination::Errored) {
      ++errored;
      continue;
    }
    for (std::size_t j = 0; j < x0.size(); ++j) finals[j].push_back(r.states.back()[j]);
  }
  for (std::size_t j = 0; j < finals.size() && !finals[j].empty(); ++j) {
    const std::string name = "final_" + std::string(to_string(model->coord())) + "_" + std::to_string(j + 1);
    if (finals[j].size() >= 2) {
      c.summary.estimates.push_back(mean_estimate(name, finals[j]));
    } else {
      c.summary.estimates.push_back(Estimate{name, finals[j][0], 0.0, 1});
    }
  }
  c.summary.events = {{"model", model->describe()}, {"paths", events}, {"errored", errored}};
  c.summary.pass = errored == 0;
}

void hitting(Context& c) {
  const auto rep = hitting_probability(c.cfg.experiment());
  c.summary.estimates.push_back(rep.estimate);
  std::string csv = csv_preamble(c.cfg, c.digest) + "path,hit_time\n";
  for (std::size_t i = 0; i < rep.hit_times.size(); ++i) {
    const double t = rep.hit_times[i].value_or(INFINITY);
    csv += std::to_string(i) + "," + format_double(t) + "\n";
  }
  write_text(c.out / "hit_times.csv", csv);
  c.summary.events = {{"threshold", threshold_json(rep.threshold)},
                      {"delta", number(*c.cfg.delta)},
                      {"partial", rep.partial},
                      {"run", run_json(rep.run)}};
  const double f = rep.estimate.value;
  c.summary.pass = !rep.partial && (rep.threshold.no_collision ? f <= *c.cfg.max_fraction
                                                               : f >= *c.cfg.min_fraction);
}

void nocollision(Context& c) {
  const auto rep = no_collision_check(c.cfg.experiment());
  c.summary.estimates.push_back(rep.flagged_fraction);
  std::string csv = csv_preamble(c.cfg, c.digest) + "path,minimum\n";
  for (std::size_t i = 0; i < rep.minima.size(); ++i)
    csv += std::to_string(i) + "," + format_double(rep.minima[i]) + "\n";
  write_text(c.out / "minima.csv", csv);
  c.summary.events = {{"threshold", threshold_json(rep.threshold)},
                      {"delta", number(*c.cfg.delta)},
                      {"min", number(rep.min)},
                      {"q05", number(rep.q05)},
                      {"median", number(rep.median)},
                      {"max", number(rep.max)},
                      {"flagged", rep.flagged},
                      {"partial", rep.partial},
                      {"run", run_json(rep.run)}};
  c.summary.pass = !rep.partial && (rep.threshold.no_collision
                                        ? rep.flagged == 0
                                        : rep.flagged_fraction.value >= 0.5);
}

void contraction(Context& c) {
  const RunConfig& cfg = c.cfg;
  const auto n = static_cast<std::size_t>(cfg.params.n);
  StateVector a{Coord::Lambda, cfg.x0}, b{Coord::Lambda, cfg.x0_b};
  if (a.values.empty()) {
    a.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) a.values[i] = (1.0 + 4.0 * (i + 0.5) / n) / 10.0;
  }
  if (b.values.empty()) {
    b.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) b.values[i] = (5.0 + 4.0 * (i + 0.5) / n) / 10.0;
  }
  std::vector<double> checkpoints;
  for (double t : {0.5, 1.0, 2.0, 3.0})
    if (t <= *cfg.horizon_T) checkpoints.push_back(t);

  ExperimentConfig exp = cfg.experiment();
  exp.x0.reset();
  const auto rep = contraction_experiment(exp, a, b, checkpoints);

  std::string csv = csv_preamble(cfg, c.digest) + "t,mean_abs_diff,std_error,bound\n";
  for (std::size_t i = 0; i < rep.times.size(); ++i) {
    const double bound = rep.initial_distance * std::exp(-rep.rate_tested * rep.times[i]);
    csv += format_double(rep.times[i]) + "," + format_double(rep.curve[i]) + "," +
           format_double(rep.curve_se[i]) + "," + format_double(bound) + "\n";
  }
  write_text(c.out / "curve.csv", csv);

  c.summary.estimates.push_back(
      Estimate{"fitted_rate", rep.fitted_rate, rep.fit.slope_se, rep.fit.n});
  for (double t : rep.checkpoints) {
    const auto it = std::min_element(rep.times.begin(), rep.times.end(), [t](double x, double y) {
      return std::abs(x - t) < std::abs(y - t);
    });
    const auto i = static_cast<std::size_t>(it - rep.times.begin());
    c.summary.estimates.push_back(Estimate{"distance_t" + format_double(t), rep.curve[i],
                                           rep.curve_se[i], rep.run.n_paths});
  }
  c.summary.events = {{"initial_distance", number(rep.initial_distance)},
                      {"rate_tested", number(rep.rate_tested)},
                      {"rate_stated", number(rep.rate_stated)},
                      {"below_bound", rep.below_bound},
                      {"monotone", rep.monotone},
                      {"slope", number(rep.fit.slope)},
                      {"slope_ci", numbers({rep.fit.slope_lower(), rep.fit.slope_upper()})},
                      {"checkpoints", numbers(rep.checkpoints)},
                      {"run", run_json(rep.run)}};
  c.summary.pass = rep.monotone && rep.below_bound && rep.fit.slope_upper() < 0.0;
}

void compare(Context& c) {
  const RunConfig& cfg = c.cfg;
  const auto exp = cfg.experiment();
  const double tol = *cfg.tolerance;
  if (cfg.pair == "psi") {
    const auto rep = psi_domination_experiment(exp, cfg.k, tol);
    const double frac = static_cast<double>(rep.paths_with_violations) / rep.run.n_paths;
    c.summary.estimates.push_back(
        binomial_estimate("violating_fraction", rep.paths_with_violations, rep.run.n_paths));
    c.summary.events = {{"pair", "psi"},
                        {"k", rep.k},
                        {"eps", number(rep.eps)},
                        {"tolerance", number(rep.tolerance)},
                        {"cir", {{"a", number(rep.cir.a)}, {"b", number(rep.cir.b)},
                                 {"sigma", number(rep.cir.sigma)}}},
                        {"segments", rep.segments},
                        {"checked_steps", rep.checked_steps},
                        {"violations", rep.violations},
                        {"paths_with_violations", rep.paths_with_violations},
                        {"max_violation", number(rep.max_violation)},
                        {"run", run_json(rep.run)}};
    c.summary.pass = cfg.expect_violations ? frac >= 0.99 : rep.violations == 0;
    return;
  }
  const ComparisonPair pair =
      cfg.pair == "cir"
          ? cir_pair({cfg.upper, cfg.ref_b, 2.0}, {cfg.lower, cfg.ref_b, 2.0}, cfg.ref_x0)
          : jacobi_pair({cfg.upper, cfg.ref_b}, {cfg.lower, cfg.ref_b}, cfg.ref_x0);
  const auto rep = comparison_experiment(exp, pair, tol);
  c.summary.estimates.push_back(rep.violating_fraction);
  c.summary.events = {{"pair", rep.label},
                      {"tolerance", number(rep.tolerance)},
                      {"total_violations", rep.total_violations},
                      {"paths_with_violations", rep.paths_with_violations},
                      {"max_violation", number(rep.max_violation)},
                      {"run", run_json(rep.run)}};
  c.summary.pass = cfg.expect_violations ? rep.violating_fraction.value >= 0.99
                                         : rep.total_violations == 0;
}

void stationary(Context& c) {
  const RunConfig& cfg = c.cfg;
  StationaryOptions opts;
  opts.min_samples = cfg.min_samples;
  opts.grid_points = cfg.grid;
  const auto rep = stationary_experiment(cfg.experiment(), cfg.burn_in, cfg.thin, opts);
  const auto& r = rep.report;
  bool pass = true;
  json moments = json::array();
  for (const auto& m : r.moments) {
    c.summary.estimates.push_back(Estimate{m.name, m.sample_mean, m.std_error, r.n_samples});
    moments.push_back({{"name", m.name},
                       {"oracle", number(m.oracle)},
                       {"oracle_error", number(m.oracle_error)},
                       {"z", number(m.z)}});
    pass = pass && std::abs(m.z) < cfg.z_max;
  }
  json events = {{"burn_in", number(rep.burn_in)},
                 {"thin", number(rep.thin)},
                 {"n_samples", r.n_samples},
                 {"lag1_autocorrelation", number(r.lag1_autocorrelation)},
                 {"moments", moments},
                 {"run", run_json(rep.run)}};
  if (r.ks_distance) {
    events["ks_distance"] = number(*r.ks_distance);
    events["ks_critical"] = number(*r.ks_critical);
    events["ks_limit"] = number(cfg.ks_scale * *r.ks_critical);
    pass = pass && *r.ks_distance <= cfg.ks_scale * *r.ks_critical;
  }
  c.summary.events = events;
  c.summary.pass = pass && rep.run.errored == 0;
}

void consistency(Context& c) {
  const RunConfig& cfg = c.cfg;
  const Coord coord_b = cfg.coord_b == "phi" ? Coord::Phi : Coord::Lambda;
  const auto rep = coordinate_consistency_experiment(cfg.experiment(), coord_b, cfg.seed_b);
  json coords = json::array();
  for (const auto& s : rep.coordinates) {
    coords.push_back({{"index", s.index},
                      {"mean_a", number(s.mean_a)},
                      {"mean_b", number(s.mean_b)},
                      {"var_a", number(s.var_a)},
                      {"var_b", number(s.var_b)},
                      {"z_mean", number(s.z_mean)},
                      {"z_var", number(s.z_var)}});
  }
  c.summary.events = {{"coord_b", std::string(to_string(rep.coord_b))},
                      {"coordinates", coords},
                      {"max_abs_z", number(rep.max_abs_z)},
                      {"run_a", run_json(rep.run_a)},
                      {"run_b", run_json(rep.run_b)}};
  c.summary.pass = rep.max_abs_z < cfg.z_max && rep.run_a.errored == 0 && rep.run_b.errored == 0;
}

void identities(Context& c, const std::vector<IdentityCheck>& checks) {
  json list = json::array();
  bool pass = true;
  for (const auto& k : checks) {
    list.push_back({{"name", k.name},
                    {"max_error", number(k.max_error)},
                    {"tolerance", number(k.tolerance)},
                    {"cases", k.cases},
                    {"pass", k.pass}});
    pass = pass && k.pass;
  }
  c.summary.events = {{"checks", list}};
  c.summary.pass = pass;
}

}  // namespace

ParseResult parse_args(const std::vector<std::string>& args) {
  ParseResult result;
  RunConfig& c = result.config;
  CLI::App app{"Simulation and checks for the beta-Jacobi particle system", "bjacobi"};
  app.set_config("--config", "", "Read key = value settings from a file; flags win");

  std::string command;
  app.add_option("command", command,
                 "simulate, hitting, nocollision, contraction, compare, stationary, "
                 "consistency, driftcheck or gradcheck")
      ->required();

  app.add_option("--n", c.params.n, "Number of particles");
  app.add_option("--p", c.params.p);
  app.add_option("--q", c.params.q);
  app.add_option("--beta", c.params.beta);
  app.add_option("--model", c.model, "lambda, dual, phi, psi, hat, tilde, check or bar");
  app.add_option("--reg-eps", c.reg_eps, "Width of the regularized models");

  double T = 0.0;
  auto* t_opt = app.add_option("--T", T, "Horizon");
  app.add_option("--dt", c.dt, "Base step");
  app.add_option("--scheme", c.scheme, "truncated_em or em_reflect");
  app.add_option("--max-refinements", c.max_refinements);
  app.add_option("--stride", c.record_stride, "Record every stride-th base step");
  app.add_option("--clip-floor", c.clip_floor);
  app.add_option("--gap-floor", c.gap_floor);
  app.add_option("--kick", c.kick_factor);

  app.add_option("--seed", c.seed);
  std::size_t paths = 0;
  auto* paths_opt = app.add_option("--paths", paths);
  app.add_option("--threads", c.threads, "Workers; 0 defers to BJACOBI_THREADS");

  double delta = 0.0;
  auto* delta_opt = app.add_option("--delta", delta, "Collision proxy; default 1e-3 n");
  app.add_option("--k", c.k);
  std::string side = "zero", threshold = "final";
  app.add_option("--side", side)->check(CLI::IsMember({"zero", "one"}));
  app.add_option("--threshold", threshold)->check(CLI::IsMember({"final", "draft"}));
  app.add_option("--eps", c.eps, "Gap window for psi domination");
  app.add_flag("--stop-at-event", c.stop_at_event);
  double min_fraction = 0.0, max_fraction = 0.0;
  auto* min_opt = app.add_option("--min-fraction", min_fraction);
  auto* max_opt = app.add_option("--max-fraction", max_fraction);

  app.add_option("--x0", c.x0, "Lambda start, comma separated")->delimiter(',');
  app.add_option("--x0-b", c.x0_b, "Second start for contraction")->delimiter(',');

  app.add_option("--pair", c.pair)->check(CLI::IsMember({"cir", "jacobi", "psi"}));
  app.add_option("--upper", c.upper, "CIR a or Jacobi d of the upper process");
  app.add_option("--lower", c.lower, "CIR a or Jacobi d of the lower process");
  app.add_option("--ref-b", c.ref_b, "CIR b or Jacobi d' shared by the pair");
  app.add_option("--ref-x0", c.ref_x0);
  double tolerance = 0.0;
  auto* tol_opt = app.add_option("--tolerance", tolerance);
  app.add_flag("--expect-violations", c.expect_violations);

  double burn_in = 0.0, thin = 0.0;
  auto* burn_opt = app.add_option("--burn-in", burn_in);
  auto* thin_opt = app.add_option("--thin", thin);
  app.add_option("--min-samples", c.min_samples);
  app.add_option("--grid", c.grid, "Quadrature points per axis");
  app.add_option("--ks-scale", c.ks_scale);
  app.add_option("--z-max", c.z_max);

  app.add_option("--coord-b", c.coord_b)->check(CLI::IsMember({"phi", "lambda"}));
  std::uint64_t seed_b = 0;
  auto* seed_b_opt = app.add_option("--seed-b", seed_b);

  app.add_option("--samples", c.samples);
  app.add_option("--out", c.out_dir, "Output directory");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    result.help = true;
    result.help_text = app.help();
    return result;
  } catch (const CLI::ParseError& e) {
    throw Error(ErrorKind::Config, e.what());
  }

  c.command = command_from_string(command);
  set_if(t_opt, T, c.horizon_T);
  set_if(paths_opt, paths, c.paths);
  set_if(delta_opt, delta, c.delta);
  set_if(min_opt, min_fraction, c.min_fraction);
  set_if(max_opt, max_fraction, c.max_fraction);
  set_if(tol_opt, tolerance, c.tolerance);
  set_if(burn_opt, burn_in, c.burn_in);
  set_if(thin_opt, thin, c.thin);
  set_if(seed_b_opt, seed_b, c.seed_b);
  c.side = side == "zero" ? Side::Zero : Side::One;
  c.threshold = threshold == "final" ? ThresholdForm::Final : ThresholdForm::Draft;
  return result;
}

Summary execute(const RunConfig& config, std::ostream& log) {
  const RunConfig cfg = config.resolved();
  cfg.validate();
  Context c{cfg, hex_u64(cfg.digest()), fs::path(cfg.out_dir), {}};
  c.summary.version = kVersion;
  c.summary.command = std::string(to_string(cfg.command));
  c.summary.config_digest = c.digest;
  c.summary.seed = cfg.seed;
  c.summary.config = cfg.to_json();

  switch (cfg.command) {
    case Command::Simulate: simulate(c); break;
    case Command::Hitting: hitting(c); break;
    case Command::NoCollision: nocollision(c); break;
    case Command::Contraction: contraction(c); break;
    case Command::Compare: compare(c); break;
    case Command::Stationary: stationary(c); break;
    case Command::Consistency: consistency(c); break;
    case Command::DriftCheck: identities(c, drift_identities(cfg.samples, cfg.seed)); break;
    case Command::GradCheck: identities(c, gradient_identities(cfg.samples, cfg.seed)); break;
  }
  write_text(c.out / "summary.json", emit_summary(c.summary));
  log << c.summary.command << (c.summary.pass ? " pass" : " FAIL")
      << " config_digest=" << c.digest << " out=" << c.out.string() << "\n";
  return c.summary;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    const auto parsed = parse_args(args);
    if (parsed.help) {
      out << parsed.help_text;
      return kExitOk;
    }
    return execute(parsed.config, out).pass ? kExitOk : kExitFailed;
  } catch (const Error& e) {
    err << "bjacobi: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::InvalidParams:
      case ErrorKind::NotOrdered:
      case ErrorKind::GapTooSmall:
      case ErrorKind::OutOfRange:
      case ErrorKind::NotWellPosed:
      case ErrorKind::DimensionTooLarge:
      case ErrorKind::Config: return kExitInvalid;
      default: return kExitRuntime;
    }
  } catch (const std::exception& e) {
    err << "bjacobi: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace bjacobi::cli

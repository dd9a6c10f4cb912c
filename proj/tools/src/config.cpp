#include "bjacobi/cli/config.hpp"

#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "bjacobi/errors.hpp"
#include "bjacobi/regularized.hpp"

namespace bjacobi::cli {

namespace {

constexpr std::array<std::pair<Command, std::string_view>, 9> kCommands{{
    {Command::Simulate, "simulate"},
    {Command::Hitting, "hitting"},
    {Command::NoCollision, "nocollision"},
    {Command::Contraction, "contraction"},
    {Command::Compare, "compare"},
    {Command::Stationary, "stationary"},
    {Command::Consistency, "consistency"},
    {Command::DriftCheck, "driftcheck"},
    {Command::GradCheck, "gradcheck"},
}};

double default_horizon(Command c) {
  switch (c) {
    case Command::Hitting:
    case Command::NoCollision: return 50.0;
    case Command::Contraction: return 3.0;
    case Command::Compare: return 5.0;
    case Command::Stationary: return 200.0;
    default: return 1.0;
  }
}

std::size_t default_paths(Command c) {
  switch (c) {
    case Command::Simulate: return 1;
    case Command::Stationary: return 20;
    case Command::Consistency: return 10000;
    default: return 1000;
  }
}

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::Config, what);
}

bool is_one_of(const std::string& v, std::initializer_list<std::string_view> names) {
  for (auto n : names)
    if (v == n) return true;
  return false;
}

}  // namespace

std::string_view to_string(Command command) noexcept {
  for (const auto& [c, name] : kCommands)
    if (c == command) return name;
  return "unknown";
}

Command command_from_string(std::string_view name) {
  for (const auto& [c, n] : kCommands)
    if (n == name) return c;
  throw Error(ErrorKind::Config, "unknown command '" + std::string(name) + "'");
}

RunConfig RunConfig::resolved() const {
  RunConfig r = *this;
  if (!r.horizon_T) r.horizon_T = default_horizon(command);
  if (!r.paths) r.paths = default_paths(command);
  if (!r.delta) r.delta = 1e-3 * params.n;
  if (!r.tolerance) r.tolerance = (command == Command::Compare && pair == "psi") ? 1e-5 : 1e-12;
  if (!r.min_fraction) r.min_fraction = 0.95;
  if (!r.max_fraction) r.max_fraction = 0.05;
  if (r.scheme.empty()) r.scheme = model == "phi" ? "em_reflect" : "truncated_em";
  return r;
}

void RunConfig::validate() const {
  const RunConfig r = resolved();
  if (command == Command::DriftCheck || command == Command::GradCheck) {
    require(samples > 0, "samples must be positive");
    return;
  }
  params.validate();
  r.integrator().validate();
  require(is_one_of(model, {"lambda", "dual", "phi", "psi", "hat", "tilde", "check", "bar"}),
          "unknown model '" + model + "'");
  require(reg_eps > 0.0 && reg_eps < 0.5, "reg-eps must lie in (0, 1/2)");
  require(is_one_of(pair, {"cir", "jacobi", "psi"}), "unknown pair '" + pair + "'");
  require(is_one_of(coord_b, {"phi", "lambda"}), "coord-b must be phi or lambda");
  require(*r.paths > 0, "paths must be positive");
  require(threads >= 0, "threads must be nonnegative");
  require(*r.tolerance >= 0.0, "tolerance must be nonnegative");
  require(*r.min_fraction >= 0.0 && *r.min_fraction <= 1.0, "min-fraction must lie in [0, 1]");
  require(*r.max_fraction >= 0.0 && *r.max_fraction <= 1.0, "max-fraction must lie in [0, 1]");
  require(grid >= 4, "grid must be at least 4");
  require(ks_scale > 0.0 && z_max > 0.0, "ks-scale and z-max must be positive");
  require(!x0.empty() || x0_b.empty() || command == Command::Contraction,
          "x0-b needs x0");
  if (!x0.empty()) require(x0.size() == static_cast<std::size_t>(params.n), "x0 needs n values");
  if (!x0_b.empty())
    require(x0_b.size() == static_cast<std::size_t>(params.n), "x0-b needs n values");
  if (command != Command::Simulate && command != Command::Compare &&
      command != Command::Contraction)
    r.experiment().validate();
}

IntegratorConfig RunConfig::integrator() const {
  const RunConfig r = resolved();
  IntegratorConfig c;
  c.dt = dt;
  c.scheme = scheme_from_string(r.scheme);
  c.horizon_T = *r.horizon_T;
  c.max_refinements = max_refinements;
  c.record_stride = record_stride;
  c.clip_floor = clip_floor;
  c.gap_floor = gap_floor;
  c.kick_factor = kick_factor;
  return c;
}

ExperimentConfig RunConfig::experiment() const {
  const RunConfig r = resolved();
  ExperimentConfig c;
  c.params = params;
  c.integrator = r.integrator();
  c.n_paths = *r.paths;
  c.seed = seed;
  c.threads = threads;
  c.delta = *r.delta;
  c.k = k;
  c.side = side;
  c.threshold_form = threshold;
  c.eps = eps;
  if (!x0.empty()) c.x0 = StateVector{Coord::Lambda, x0};
  c.stop_at_event = stop_at_event;
  return c;
}

nlohmann::json RunConfig::to_json() const {
  const RunConfig r = resolved();
  nlohmann::json j;
  j["command"] = std::string(to_string(command));
  j["n"] = params.n;
  j["p"] = params.p;
  j["q"] = params.q;
  j["beta"] = params.beta;
  j["model"] = model;
  j["reg_eps"] = reg_eps;
  j["T"] = *r.horizon_T;
  j["dt"] = dt;
  j["scheme"] = r.scheme;
  j["max_refinements"] = max_refinements;
  j["stride"] = record_stride;
  j["clip_floor"] = clip_floor;
  j["gap_floor"] = gap_floor;
  j["kick"] = kick_factor;
  j["seed"] = seed;
  j["paths"] = *r.paths;
  j["delta"] = *r.delta;
  j["k"] = k;
  j["side"] = std::string(to_string(side));
  j["threshold"] = threshold == ThresholdForm::Final ? "final" : "draft";
  j["eps"] = eps;
  j["stop_at_event"] = stop_at_event;
  j["min_fraction"] = *r.min_fraction;
  j["max_fraction"] = *r.max_fraction;
  j["x0"] = x0;
  j["x0_b"] = x0_b;
  j["pair"] = pair;
  j["upper"] = upper;
  j["lower"] = lower;
  j["ref_b"] = ref_b;
  j["ref_x0"] = ref_x0;
  j["tolerance"] = *r.tolerance;
  j["expect_violations"] = expect_violations;
  j["burn_in"] = burn_in ? nlohmann::json(*burn_in) : nlohmann::json();
  j["thin"] = thin ? nlohmann::json(*thin) : nlohmann::json();
  j["min_samples"] = min_samples;
  j["grid"] = grid;
  j["ks_scale"] = ks_scale;
  j["z_max"] = z_max;
  j["coord_b"] = coord_b;
  j["seed_b"] = seed_b ? nlohmann::json(*seed_b) : nlohmann::json();
  j["samples"] = samples;
  return j;
}

std::uint64_t RunConfig::digest() const { return fnv1a64(to_json().dump()); }

}  // namespace bjacobi::cli

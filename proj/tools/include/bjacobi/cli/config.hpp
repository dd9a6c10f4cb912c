#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "bjacobi/experiments.hpp"
#include "bjacobi/integrate.hpp"
#include "bjacobi/model.hpp"
#include "bjacobi/reference.hpp"

namespace bjacobi::cli {

enum class Command {
  Simulate,
  Hitting,
  NoCollision,
  Contraction,
  Compare,
  Stationary,
  Consistency,
  DriftCheck,
  GradCheck,
};

std::string_view to_string(Command command) noexcept;
Command command_from_string(std::string_view name);

/// Everything a run depends on. Unset optionals take per-command defaults in resolved().
struct RunConfig {
  Command command = Command::Simulate;

  ModelParams params{1, 3.0, 3.0, 1.0};
  /// lambda, dual, phi, psi, hat, tilde, check or bar.
  std::string model = "lambda";
  double reg_eps = 0.1;

  std::optional<double> horizon_T;
  double dt = 1e-3;
  /// truncated_em or em_reflect; empty picks em_reflect for phi and truncated_em otherwise.
  std::string scheme;
  int max_refinements = 20;
  int record_stride = 1;
  double clip_floor = kClipFloor;
  double gap_floor = kGapFloor;
  double kick_factor = 1.0;

  std::uint64_t seed = 0;
  std::optional<std::size_t> paths;
  /// Worker count; 0 defers to BJACOBI_THREADS. Never part of the digest.
  int threads = 0;

  std::optional<double> delta;
  int k = 1;
  Side side = Side::Zero;
  ThresholdForm threshold = ThresholdForm::Final;
  double eps = 0.2;
  bool stop_at_event = false;
  std::optional<double> min_fraction;
  std::optional<double> max_fraction;

  /// Lambda coordinates; empty means the command default.
  std::vector<double> x0;
  std::vector<double> x0_b;

  /// cir, jacobi or psi.
  std::string pair = "cir";
  double upper = 3.0;
  double lower = 2.0;
  /// CIR b, or Jacobi d'.
  double ref_b = 0.0;
  double ref_x0 = 1.0;
  std::optional<double> tolerance;
  bool expect_violations = false;

  std::optional<double> burn_in;
  std::optional<double> thin;
  std::size_t min_samples = 100;
  int grid = kDefaultOracleGrid;
  double ks_scale = 1.5;
  double z_max = 4.0;

  /// phi or lambda.
  std::string coord_b = "phi";
  std::optional<std::uint64_t> seed_b;

  std::size_t samples = 1000;

  /// Never part of the digest.
  std::string out_dir = ".";

  /// Copy with every per-command default filled in.
  RunConfig resolved() const;
  /// Throws Error(Config) or the parameter error of the offending field.
  void validate() const;

  IntegratorConfig integrator() const;
  ExperimentConfig experiment() const;

  /// Effective configuration without threads and out_dir.
  nlohmann::json to_json() const;
  /// FNV-1a of to_json().dump().
  std::uint64_t digest() const;
};

}  // namespace bjacobi::cli

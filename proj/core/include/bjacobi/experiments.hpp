#pragma once

// Monte Carlo drivers. Paths are independent, keyed by (seed, path index),
// and every aggregate is folded in path order, so results do not depend on
// the worker count.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bjacobi/integrate.hpp"
#include "bjacobi/model.hpp"
#include "bjacobi/reference.hpp"
#include "bjacobi/stationary.hpp"
#include "bjacobi/stats.hpp"

namespace bjacobi {

struct ExperimentConfig {
  ModelParams params;
  IntegratorConfig integrator;
  std::size_t n_paths = 1000;
  std::uint64_t seed = 0;
  /// 0 resolves through BJACOBI_THREADS, then the hardware.
  int threads = 0;
  /// Collision proxy: a sum within delta of its boundary value counts as a hit.
  double delta = 1e-3;
  int k = 1;
  Side side = Side::Zero;
  ThresholdForm threshold_form = ThresholdForm::Final;
  /// Gap window for psi domination.
  double eps = 0.2;
  /// Lambda start; defaults to evenly spaced i / (n + 1).
  std::optional<StateVector> x0;
  /// no_collision_check stops a path once it is flagged.
  bool stop_at_event = false;

  void validate() const;
  StateVector start() const;
};

/// Totals over all paths of an experiment.
struct RunStats {
  std::size_t n_paths = 0;
  std::size_t errored = 0;
  std::size_t stopped_early = 0;
  std::uint64_t refinements = 0;
  std::uint64_t collisions = 0;
  std::uint64_t tamed_steps = 0;
  std::uint64_t crossings = 0;
  /// Reason of the lowest-index errored path.
  std::string first_error;

  void add(const PathRecord& path);
};

struct HittingReport {
  /// Fraction of completed paths that hit; errored paths are excluded and counted in run.
  Estimate estimate;
  ThresholdResult threshold;
  std::vector<std::optional<double>> hit_times;
  RunStats run;
  bool partial = false;
};

HittingReport hitting_probability(const ExperimentConfig& cfg);

struct NoCollisionReport {
  ThresholdResult threshold;
  /// Per-path minimum of the k-sum (or top deficit), in path order.
  std::vector<double> minima;
  double min = 0.0;
  double q05 = 0.0;
  double median = 0.0;
  double max = 0.0;
  std::size_t flagged = 0;
  Estimate flagged_fraction;
  RunStats run;
  bool partial = false;
};

NoCollisionReport no_collision_check(const ExperimentConfig& cfg);

struct ContractionReport {
  std::vector<double> times;
  /// Mean over pairs of sum_i |lambda^i - tilde lambda^i|.
  std::vector<double> curve;
  std::vector<double> curve_se;
  double initial_distance = 0.0;
  /// beta (p + q), the rate tested.
  double rate_tested = 0.0;
  /// 2 beta (p + q), the rate stated for the contraction estimate.
  double rate_stated = 0.0;
  /// curve(t) <= D0 exp(-rate_tested t) + 3 SE(t) on the whole grid.
  bool below_bound = false;
  /// Checkpoint times and whether each increment is <= 3 SE of the pathwise increment.
  std::vector<double> checkpoints;
  bool monotone = false;
  /// OLS of log curve on t over grid points with positive curve.
  LinearFit fit;
  double fitted_rate = 0.0;
  RunStats run;
};

ContractionReport contraction_experiment(const ExperimentConfig& cfg, const StateVector& x0_a,
                                         const StateVector& x0_b,
                                         std::vector<double> checkpoints = {0.5, 1.0, 2.0, 3.0});

/// Two one-dimensional models driven by one noise; upper is expected to stay above lower.
struct ComparisonPair {
  std::shared_ptr<const DiffusionModel> upper;
  std::shared_ptr<const DiffusionModel> lower;
  double x0_upper = 1.0;
  double x0_lower = 1.0;
  std::string label;
};

ComparisonPair cir_pair(const CIRParams& upper, const CIRParams& lower, double x0);
ComparisonPair jacobi_pair(const JacobiParams& upper, const JacobiParams& lower, double x0);

struct ComparisonReport {
  std::string label;
  double tolerance = 1e-12;
  /// Grid times with lower - upper > tolerance, per path.
  std::vector<std::size_t> violations;
  std::size_t total_violations = 0;
  std::size_t paths_with_violations = 0;
  double max_violation = 0.0;
  Estimate violating_fraction;
  RunStats run;
};

ComparisonReport comparison_experiment(const ExperimentConfig& cfg, const ComparisonPair& pair,
                                       double tolerance = 1e-12);

/// psi^1..psi^n, a CIR r and a clock w, simulated under the measure in
/// which psi^1..psi^k carry the Laguerre-type drift
///   beta (p - n + 1) + 2 beta sum_{j != i} psi^i / (psi^i - psi^j)
/// and psi^{k+1}..psi^n keep their own drift. r has a = k beta (p - n + k),
/// b = 4 beta (n - k) / eps, sigma = 2 and is driven by the aggregated noise
/// of psi^1..psi^k, so psi^1 + ... + psi^k dominates r while the window
/// psi^{k+1} - psi^k > eps/2 stays open. w accumulates time spent outside
/// the window and has no noise.
class PsiDominationModel final : public DiffusionModel {
 public:
  PsiDominationModel(ModelParams params, int k, double eps);

  std::size_t dimension() const override { return static_cast<std::size_t>(params_.n) + 2; }
  Coord coord() const override { return Coord::Psi; }
  double upper(std::size_t i) const override;
  std::pair<std::size_t, std::size_t> ordered_range() const override;
  void drift(std::span<const double> x, std::span<double> out) const override;
  void diffusion(std::span<const double> x, std::span<double> out) const override;
  void noise_increment(std::span<const double> x, std::span<const double> dw,
                       std::span<double> out) const override;
  bool flipped(std::span<const double> before, std::span<const double> after) const override;
  bool regime_changed(std::span<const double> before, std::span<const double> after) const override;
  std::string describe() const override;

  const CIRParams& cir() const noexcept { return cir_; }
  double partial_sum(std::span<const double> x) const noexcept;
  /// k = n, or psi^{k+1} - psi^k > eps/2.
  bool in_window(std::span<const double> x) const noexcept;

 private:
  ModelParams params_;
  int k_;
  double eps_;
  CIRParams cir_;
};

struct PsiDominationReport {
  int k = 1;
  double eps = 0.0;
  double tolerance = 0.0;
  CIRParams cir;
  std::size_t segments = 0;
  std::size_t checked_steps = 0;
  std::size_t violations = 0;
  std::size_t paths_with_violations = 0;
  /// Largest r - (psi^1 + ... + psi^k) seen on a window.
  double max_violation = 0.0;
  RunStats run;
};

/// Counts base steps spent entirely inside a window on which
/// r - (psi^1 + ... + psi^k) > tolerance * max(1, r). r restarts from the
/// partial sum whenever a step leaves the window. Throws NoQualifyingSegments
/// when no window psi^{k+1} - psi^k > eps/2 opens. For k = n the window
/// condition is dropped.
PsiDominationReport psi_domination_experiment(const ExperimentConfig& cfg, int k,
                                              double tolerance = 1e-5);

struct CoordinateStat {
  std::size_t index = 0;
  double mean_a = 0.0;
  double mean_b = 0.0;
  double var_a = 0.0;
  double var_b = 0.0;
  double z_mean = 0.0;
  double z_var = 0.0;
};

struct ConsistencyReport {
  Coord coord_b = Coord::Phi;
  std::vector<CoordinateStat> coordinates;
  double max_abs_z = 0.0;
  RunStats run_a;
  RunStats run_b;
};

/// Runs the lambda system and the same law in coord_b (Phi, or Lambda as a
/// control) with noise seeds cfg.seed and seed_b, and compares the sorted
/// lambda values at the horizon.
ConsistencyReport coordinate_consistency_experiment(const ExperimentConfig& cfg,
                                                    Coord coord_b = Coord::Phi,
                                                    std::optional<std::uint64_t> seed_b = {});

struct StationaryExperimentReport {
  double burn_in = 0.0;
  double thin = 0.0;
  StationaryReport report;
  RunStats run;
};

/// Samples every `thin` time units after `burn_in` on each path and compares
/// them with the invariant law. Defaults: burn-in 10% of the horizon, thin = thinning_lag.
StationaryExperimentReport stationary_experiment(const ExperimentConfig& cfg,
                                                 std::optional<double> burn_in = {},
                                                 std::optional<double> thin = {},
                                                 const StationaryOptions& options = {});

}  // namespace bjacobi

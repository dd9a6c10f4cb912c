#pragma once

// Euler-type time stepping for the particle system and the reference
// processes. Steps that break ordering, produce a non-finite state or take
// an outsized drift kick are split with Brownian-bridge increments, so the
// underlying Brownian path never changes under refinement.

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bjacobi/model.hpp"
#include "bjacobi/reference.hpp"
#include "bjacobi/regularized.hpp"
#include "bjacobi/rng.hpp"

namespace bjacobi {

/// Drift and noise of an SDE on a box of coordinates, with an ordered block.
class DiffusionModel {
 public:
  virtual ~DiffusionModel() = default;

  virtual std::size_t dimension() const = 0;
  virtual Coord coord() const = 0;
  virtual double lower(std::size_t /*i*/) const { return 0.0; }
  virtual double upper(std::size_t i) const = 0;
  /// Coordinates [first, last) must stay nondecreasing.
  virtual std::pair<std::size_t, std::size_t> ordered_range() const { return {0, dimension()}; }
  /// Whether coefficient evaluation keeps clip_floor away from the box edges.
  virtual bool interior_evaluation() const { return true; }

  virtual void drift(std::span<const double> x, std::span<double> out) const = 0;
  virtual void diffusion(std::span<const double> x, std::span<double> out) const = 0;

  /// Noise part of one step. The default is diagonal: diffusion(x)[i] * dw[i].
  virtual void noise_increment(std::span<const double> x, std::span<const double> dw,
                               std::span<double> out) const;

  /// True when a comparison internal to the model changed strict sign
  /// between two states; such steps are refined like ordering violations.
  virtual bool flipped(std::span<const double> /*before*/, std::span<const double> /*after*/) const {
    return false;
  }

  /// True when the coefficients switch regime between two states. Such steps
  /// are refined to locate the switch; running out of levels is not an error.
  virtual bool regime_changed(std::span<const double> /*before*/,
                              std::span<const double> /*after*/) const {
    return false;
  }

  /// Canonical text identifying the model and its parameters.
  virtual std::string describe() const = 0;
};

class LambdaModel final : public DiffusionModel {
 public:
  enum class Form { Standard, Dual };

  explicit LambdaModel(ModelParams params, Form form = Form::Standard);

  std::size_t dimension() const override { return static_cast<std::size_t>(params_.n); }
  Coord coord() const override { return Coord::Lambda; }
  double upper(std::size_t) const override { return 1.0; }
  void drift(std::span<const double> x, std::span<double> out) const override;
  void diffusion(std::span<const double> x, std::span<double> out) const override;
  std::string describe() const override;

  const ModelParams& params() const noexcept { return params_; }

 private:
  ModelParams params_;
  Form form_;
};

class RegularizedModel final : public DiffusionModel {
 public:
  RegularizedModel(Regularization variant, ModelParams params, double eps);

  std::size_t dimension() const override { return static_cast<std::size_t>(params_.n); }
  Coord coord() const override { return Coord::Lambda; }
  double upper(std::size_t) const override { return 1.0; }
  std::pair<std::size_t, std::size_t> ordered_range() const override;
  void drift(std::span<const double> x, std::span<double> out) const override;
  void diffusion(std::span<const double> x, std::span<double> out) const override;
  std::string describe() const override;

 private:
  Regularization variant_;
  ModelParams params_;
  double eps_;
};

/// Unit additive noise in phi = arcsin(sqrt(lambda)).
class PhiModel final : public DiffusionModel {
 public:
  explicit PhiModel(ModelParams params);

  std::size_t dimension() const override { return static_cast<std::size_t>(params_.n); }
  Coord coord() const override { return Coord::Phi; }
  double upper(std::size_t) const override { return kHalfPi; }
  void drift(std::span<const double> x, std::span<double> out) const override;
  void diffusion(std::span<const double> x, std::span<double> out) const override;
  std::string describe() const override;

 private:
  ModelParams params_;
};

class PsiModel final : public DiffusionModel {
 public:
  explicit PsiModel(ModelParams params);

  std::size_t dimension() const override { return static_cast<std::size_t>(params_.n); }
  Coord coord() const override { return Coord::Psi; }
  double upper(std::size_t) const override { return kHalfPi * kHalfPi; }
  void drift(std::span<const double> x, std::span<double> out) const override;
  void diffusion(std::span<const double> x, std::span<double> out) const override;
  std::string describe() const override;

 private:
  ModelParams params_;
};

class CirModel final : public DiffusionModel {
 public:
  explicit CirModel(CIRParams params);

  std::size_t dimension() const override { return 1; }
  Coord coord() const override { return Coord::Reference; }
  double upper(std::size_t) const override;
  bool interior_evaluation() const override { return false; }
  void drift(std::span<const double> x, std::span<double> out) const override;
  void diffusion(std::span<const double> x, std::span<double> out) const override;
  std::string describe() const override;

 private:
  CIRParams params_;
};

class JacobiModel final : public DiffusionModel {
 public:
  explicit JacobiModel(JacobiParams params);

  std::size_t dimension() const override { return 1; }
  Coord coord() const override { return Coord::Reference; }
  double upper(std::size_t) const override { return 1.0; }
  bool interior_evaluation() const override { return false; }
  void drift(std::span<const double> x, std::span<double> out) const override;
  void diffusion(std::span<const double> x, std::span<double> out) const override;
  std::string describe() const override;

 private:
  JacobiParams params_;
};

enum class Scheme {
  /// Full-truncation Euler: coefficients at the clipped state, result clamped to the box.
  TruncatedEMLambda,
  /// Euler with reflection at the box edges.
  EMPhi,
};

std::string_view to_string(Scheme scheme) noexcept;
Scheme scheme_from_string(std::string_view name);

struct IntegratorConfig {
  double dt = 1e-3;
  Scheme scheme = Scheme::TruncatedEMLambda;
  double horizon_T = 1.0;
  int max_refinements = 20;
  int record_stride = 1;
  double clip_floor = kClipFloor;
  double gap_floor = kGapFloor;
  /// A step is split when some |drift * h| exceeds kick_factor * sqrt(h).
  double kick_factor = 1.0;
  /// Coupled runs split a step when a coordinate difference changes strict sign.
  bool coupled_order_guard = true;

  static constexpr int kMaxRefinementsLimit = 30;

  void validate() const;
  std::size_t steps() const;
  /// Canonical text of every field, doubles in hex.
  std::string canonical() const;
};

enum class Termination { HorizonReached, StoppedEarly, Errored };

std::string_view to_string(Termination t) noexcept;

enum class AnnotationKind {
  /// Ordering restored by sorting after refinement ran out.
  NumericalCollision,
  /// Drift displacement capped after refinement ran out.
  TamedStep,
  /// Coupled systems crossed after refinement ran out.
  CoupledCrossing,
};

std::string_view to_string(AnnotationKind kind) noexcept;

struct Annotation {
  AnnotationKind kind;
  double time;
  std::size_t system;
};

struct PathRecord {
  Coord coord = Coord::Lambda;
  std::vector<double> times;
  std::vector<StateVector> states;
  std::uint64_t seed = 0;
  std::uint64_t path_id = 0;
  std::uint64_t config_digest = 0;
  Termination termination = Termination::HorizonReached;
  std::string error_reason;
  double error_time = 0.0;
  /// At most kMaxAnnotations are kept; the counters below are exact.
  std::vector<Annotation> annotations;
  std::uint64_t refinements = 0;
  std::uint64_t collisions = 0;
  std::uint64_t tamed_steps = 0;
  std::uint64_t crossings = 0;

  static constexpr std::size_t kMaxAnnotations = 256;
};

/// View handed to observers after every base step (and once at t = 0 with empty dw).
/// Observers may overwrite states, e.g. to restart an auxiliary coordinate.
struct StepView {
  std::size_t step = 0;
  double t = 0.0;
  std::span<std::vector<double>> states;
  /// Base-step increments per coordinate.
  std::span<const double> dw;
};

/// Returning false ends the run with Termination::StoppedEarly.
using StepObserver = std::function<bool(const StepView&)>;

PathRecord simulate_path(const DiffusionModel& model, const IntegratorConfig& config,
                         const StateVector& x0, const NoiseSource& noise,
                         const StepObserver& observer = {});

/// Both systems consume the same increments and refine jointly.
std::pair<PathRecord, PathRecord> simulate_coupled(const DiffusionModel& model_a,
                                                   const DiffusionModel& model_b,
                                                   const IntegratorConfig& config,
                                                   const StateVector& x0_a,
                                                   const StateVector& x0_b,
                                                   const NoiseSource& noise,
                                                   const StepObserver& observer = {});

PathRecord simulate_cir(const CIRParams& params, const IntegratorConfig& config, double r0,
                        const NoiseSource& noise);
PathRecord simulate_jacobi(const JacobiParams& params, const IntegratorConfig& config,
                           double r0, const NoiseSource& noise);

/// FNV-1a, 64 bit.
std::uint64_t fnv1a64(std::string_view text) noexcept;
std::string hex_double(double v);
std::string hex_u64(std::uint64_t v);

}  // namespace bjacobi

#include "bjacobi/integrate.hpp"

#include <algorithm>
#include <array>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "bjacobi/errors.hpp"

namespace bjacobi {

// ---- hashing and canonical text ---------------------------------------------

std::uint64_t fnv1a64(std::string_view text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

std::string hex_u64(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
  return buf;
}

namespace {

std::string describe_params(const ModelParams& p) {
  return "n=" + std::to_string(p.n) + ",p=" + hex_double(p.p) + ",q=" + hex_double(p.q) +
         ",beta=" + hex_double(p.beta);
}

}  // namespace

// ---- models -------------------------------------------------------------------

void DiffusionModel::noise_increment(std::span<const double> x, std::span<const double> dw,
                                     std::span<double> out) const {
  diffusion(x, out);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= dw[i];
}

LambdaModel::LambdaModel(ModelParams params, Form form) : params_(params), form_(form) {
  params_.validate();
}

void LambdaModel::drift(std::span<const double> x, std::span<double> out) const {
  if (form_ == Form::Standard) {
    kernels::lambda_drift(params_, x, out);
  } else {
    kernels::lambda_dual_drift(params_, x, out);
  }
}

void LambdaModel::diffusion(std::span<const double> x, std::span<double> out) const {
  kernels::lambda_diffusion(x, out);
}

std::string LambdaModel::describe() const {
  return "lambda(" + describe_params(params_) +
         (form_ == Form::Standard ? ",form=standard)" : ",form=dual)");
}

RegularizedModel::RegularizedModel(Regularization variant, ModelParams params, double eps)
    : variant_(variant), params_(params), eps_(eps) {
  params_.validate();
  if (!(eps_ > 0.0 && eps_ < 1.0)) {
    throw Error(ErrorKind::InvalidParams, "regularization eps must lie in (0, 1)");
  }
}

std::pair<std::size_t, std::size_t> RegularizedModel::ordered_range() const {
  return ordered_block(variant_, dimension());
}

void RegularizedModel::drift(std::span<const double> x, std::span<double> out) const {
  kernels::regularized_drift(variant_, params_, eps_, x, out);
}

void RegularizedModel::diffusion(std::span<const double> x, std::span<double> out) const {
  kernels::lambda_diffusion(x, out);
}

std::string RegularizedModel::describe() const {
  return std::string(to_string(variant_)) + "(" + describe_params(params_) +
         ",eps=" + hex_double(eps_) + ")";
}

PhiModel::PhiModel(ModelParams params) : params_(params) { params_.validate(); }

void PhiModel::drift(std::span<const double> x, std::span<double> out) const {
  kernels::phi_drift(params_, x, out);
}

void PhiModel::diffusion(std::span<const double>, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 1.0);
}

std::string PhiModel::describe() const { return "phi(" + describe_params(params_) + ")"; }

PsiModel::PsiModel(ModelParams params) : params_(params) { params_.validate(); }

void PsiModel::drift(std::span<const double> x, std::span<double> out) const {
  kernels::psi_drift(params_, x, out);
}

void PsiModel::diffusion(std::span<const double> x, std::span<double> out) const {
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = 2.0 * std::sqrt(x[i]);
}

std::string PsiModel::describe() const { return "psi(" + describe_params(params_) + ")"; }

CirModel::CirModel(CIRParams params) : params_(params) { params_.validate(); }

double CirModel::upper(std::size_t) const { return std::numeric_limits<double>::infinity(); }

void CirModel::drift(std::span<const double> x, std::span<double> out) const {
  out[0] = params_.a - params_.b * x[0];
}

void CirModel::diffusion(std::span<const double> x, std::span<double> out) const {
  out[0] = params_.sigma * std::sqrt(x[0]);
}

std::string CirModel::describe() const {
  return "cir(a=" + hex_double(params_.a) + ",b=" + hex_double(params_.b) +
         ",sigma=" + hex_double(params_.sigma) + ")";
}

JacobiModel::JacobiModel(JacobiParams params) : params_(params) { params_.validate(); }

void JacobiModel::drift(std::span<const double> x, std::span<double> out) const {
  out[0] = params_.d - (params_.d + params_.d_prime) * x[0];
}

void JacobiModel::diffusion(std::span<const double> x, std::span<double> out) const {
  out[0] = 2.0 * std::sqrt(x[0] * (1.0 - x[0]));
}

std::string JacobiModel::describe() const {
  return "jacobi(d=" + hex_double(params_.d) + ",d_prime=" + hex_double(params_.d_prime) + ")";
}

// ---- configuration ------------------------------------------------------------

std::string_view to_string(Scheme scheme) noexcept {
  return scheme == Scheme::TruncatedEMLambda ? "truncated_em" : "em_reflect";
}

Scheme scheme_from_string(std::string_view name) {
  if (name == "truncated_em") return Scheme::TruncatedEMLambda;
  if (name == "em_reflect") return Scheme::EMPhi;
  throw Error(ErrorKind::Config, "unknown scheme '" + std::string(name) + "'");
}

std::string_view to_string(Termination t) noexcept {
  switch (t) {
    case Termination::HorizonReached: return "HorizonReached";
    case Termination::StoppedEarly: return "StoppedEarly";
    case Termination::Errored: return "Errored";
  }
  return "unknown";
}

std::string_view to_string(AnnotationKind kind) noexcept {
  switch (kind) {
    case AnnotationKind::NumericalCollision: return "NumericalCollision";
    case AnnotationKind::TamedStep: return "TamedStep";
    case AnnotationKind::CoupledCrossing: return "CoupledCrossing";
  }
  return "unknown";
}

void IntegratorConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorKind::Config, "dt must be positive");
  if (!(horizon_T >= dt) || !std::isfinite(horizon_T)) {
    throw Error(ErrorKind::Config, "horizon T must be finite and at least dt");
  }
  if (max_refinements < 0 || max_refinements > kMaxRefinementsLimit) {
    throw Error(ErrorKind::Config, "max_refinements must lie in 0.." +
                                       std::to_string(kMaxRefinementsLimit));
  }
  if (record_stride < 1) throw Error(ErrorKind::Config, "record_stride must be >= 1");
  if (!(clip_floor >= 0.0) || !(gap_floor >= 0.0)) {
    throw Error(ErrorKind::Config, "clip_floor and gap_floor must be nonnegative");
  }
  if (!(kick_factor > 0.0)) throw Error(ErrorKind::Config, "kick_factor must be positive");
}

std::size_t IntegratorConfig::steps() const {
  return static_cast<std::size_t>(std::ceil(horizon_T / dt - 1e-9));
}

std::string IntegratorConfig::canonical() const {
  std::ostringstream os;
  os << "dt=" << hex_double(dt) << ";scheme=" << to_string(scheme)
     << ";T=" << hex_double(horizon_T) << ";max_refinements=" << max_refinements
     << ";record_stride=" << record_stride << ";clip_floor=" << hex_double(clip_floor)
     << ";gap_floor=" << hex_double(gap_floor) << ";kick_factor=" << hex_double(kick_factor)
     << ";coupled_order_guard=" << (coupled_order_guard ? 1 : 0);
  return os.str();
}

// ---- engine -------------------------------------------------------------------

namespace {

struct System {
  const DiffusionModel* model = nullptr;
  std::vector<double> x;
  std::vector<double> proposal;
  std::vector<double> eval;
  std::vector<double> drift;
  std::vector<double> diffusion;
  PathRecord* record = nullptr;
};

struct Flags {
  bool broken = false;  // non-finite or ordering
  bool kick = false;
  bool regime = false;
};

void validate_start(const DiffusionModel& model, const StateVector& x0) {
  if (x0.coord != model.coord()) {
    throw Error(ErrorKind::InvalidParams, "initial state coordinates (" +
                                              std::string(to_string(x0.coord)) +
                                              ") do not match the model (" +
                                              std::string(to_string(model.coord())) + ")");
  }
  if (x0.size() != model.dimension()) {
    throw Error(ErrorKind::InvalidParams, "initial state has the wrong dimension");
  }
  for (std::size_t i = 0; i < x0.size(); ++i) {
    if (!(x0[i] >= model.lower(i) && x0[i] <= model.upper(i))) {
      throw Error(ErrorKind::OutOfRange,
                  "initial coordinate " + std::to_string(i) + " outside the state space");
    }
  }
  const auto [first, last] = model.ordered_range();
  for (std::size_t i = first + 1; i < last; ++i) {
    if (x0[i] < x0[i - 1]) throw Error(ErrorKind::NotOrdered, "initial state is not ordered");
  }
}

class Engine {
 public:
  Engine(std::vector<System>& systems, const IntegratorConfig& config, const NoiseSource& noise)
      : systems_(systems), config_(config), noise_(noise), dim_(systems.front().x.size()) {
    const auto levels = static_cast<std::size_t>(config_.max_refinements) + 2;
    left_.assign(levels, std::vector<double>(dim_));
    right_.assign(levels, std::vector<double>(dim_));
    z_.assign(dim_, 0.0);
    quantum_.resize(levels);
    for (std::size_t l = 0; l < levels; ++l) {
      quantum_[l] = bridge_quantum(config_.dt, static_cast<int>(l), config_.max_refinements);
    }
  }

  void base_increments(std::size_t step, std::vector<double>& dw) {
    noise_.normals(step, 0, 0, dw);
    const double root = std::sqrt(config_.dt);
    for (double& v : dw) v = quantize(root * v, quantum_[0]);
  }

  /// Advances every system over one base step; false if a state became non-finite.
  bool step(std::size_t step, const std::vector<double>& dw) {
    step_ = step;
    failed_ = false;
    advance(0, 0, config_.dt, static_cast<double>(step) * config_.dt, dw);
    return !failed_;
  }

 private:
  void evaluation_state(const System& s, std::vector<double>& e) const {
    const DiffusionModel& m = *s.model;
    const bool interior = m.interior_evaluation();
    const double floor = interior ? config_.clip_floor : 0.0;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      e[i] = std::min(m.upper(i) - floor, std::max(m.lower(i) + floor, s.x[i]));
    }
    if (!interior) return;
    const auto [first, last] = m.ordered_range();
    if (last <= first + 1) return;
    const double spread = 2.0 * config_.gap_floor;
    for (std::size_t i = first + 1; i < last; ++i) e[i] = std::max(e[i], e[i - 1] + spread);
    e[last - 1] = std::min(e[last - 1], m.upper(last - 1) - floor);
    for (std::size_t i = last - 1; i > first; --i) e[i - 1] = std::min(e[i - 1], e[i] - spread);
  }

  void apply_boundary(const DiffusionModel& m, std::vector<double>& y) const {
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double lo = m.lower(i);
      const double hi = m.upper(i);
      double v = y[i];
      if (config_.scheme == Scheme::EMPhi) {
        if (v < lo) v = 2.0 * lo - v;
        if (v > hi) v = 2.0 * hi - v;
      }
      y[i] = std::min(hi, std::max(lo, v));
    }
  }

  Flags propose(System& s, double h, const std::vector<double>& dw) {
    evaluation_state(s, s.eval);
    s.model->drift(s.eval, s.drift);
    s.model->noise_increment(s.eval, dw, s.diffusion);
    Flags flags;
    const double kick_limit = config_.kick_factor * std::sqrt(h);
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double displacement = s.drift[i] * h;
      if (!(std::abs(displacement) <= kick_limit)) flags.kick = true;
      s.proposal[i] = s.x[i] + displacement + s.diffusion[i];
    }
    for (double v : s.proposal) {
      if (!std::isfinite(v)) flags.broken = true;
    }
    apply_boundary(*s.model, s.proposal);
    if (out_of_order(s) || s.model->flipped(s.x, s.proposal)) flags.broken = true;
    flags.regime = s.model->regime_changed(s.x, s.proposal);
    return flags;
  }

  bool out_of_order(const System& s) const {
    const auto [first, last] = s.model->ordered_range();
    for (std::size_t i = first + 1; i < last; ++i) {
      if (!(s.proposal[i] - s.proposal[i - 1] > config_.gap_floor)) return true;
    }
    return false;
  }

  bool crossed() const {
    if (systems_.size() < 2 || !config_.coupled_order_guard) return false;
    const System& a = systems_[0];
    const System& b = systems_[1];
    for (std::size_t i = 0; i < dim_; ++i) {
      const double before = a.x[i] - b.x[i];
      const double after = a.proposal[i] - b.proposal[i];
      if ((before > 0.0 && after < 0.0) || (before < 0.0 && after > 0.0)) return true;
    }
    return false;
  }

  void annotate(System& s, AnnotationKind kind, double t, std::size_t index) {
    PathRecord& r = *s.record;
    if (r.annotations.size() < PathRecord::kMaxAnnotations) r.annotations.push_back({kind, t, index});
  }

  // Last resort at the finest level: cap the drift kick, then restore order.
  void tame(System& s, std::size_t index, double h, double t, const Flags& flags) {
    const double kick_limit = config_.kick_factor * std::sqrt(h);
    if (flags.kick || flags.broken) {
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        double displacement = s.drift[i] * h;
        if (!std::isfinite(displacement)) displacement = 0.0;
        displacement = std::clamp(displacement, -kick_limit, kick_limit);
        double noise_term = s.diffusion[i];
        if (!std::isfinite(noise_term)) noise_term = 0.0;
        s.proposal[i] = s.x[i] + displacement + noise_term;
      }
      apply_boundary(*s.model, s.proposal);
    }
    if (flags.kick) {
      ++s.record->tamed_steps;
      annotate(s, AnnotationKind::TamedStep, t, index);
    }
    if (s.model->flipped(s.x, s.proposal)) {
      ++s.record->crossings;
      annotate(s, AnnotationKind::CoupledCrossing, t, index);
    }
    if (out_of_order(s)) {
      const auto [first, last] = s.model->ordered_range();
      std::sort(s.proposal.begin() + static_cast<std::ptrdiff_t>(first),
                s.proposal.begin() + static_cast<std::ptrdiff_t>(last));
      ++s.record->collisions;
      annotate(s, AnnotationKind::NumericalCollision, t, index);
    }
  }

  void advance(int level, std::uint64_t node, double h, double t, const std::vector<double>& dw) {
    std::array<Flags, 2> flags{};
    bool split = false;
    for (std::size_t k = 0; k < systems_.size(); ++k) {
      flags[k] = propose(systems_[k], h, dw);
      split = split || flags[k].broken || flags[k].kick || flags[k].regime;
    }
    const bool crossing = crossed();
    split = split || crossing;

    if (split && level < config_.max_refinements) {
      const auto next = static_cast<std::size_t>(level) + 1;
      noise_.normals(step_, next, node, z_);
      for (std::size_t c = 0; c < dim_; ++c) {
        const auto [l, r] = refine_increment(dw[c], h, z_[c], quantum_[next]);
        left_[next][c] = l;
        right_[next][c] = r;
      }
      for (System& s : systems_) ++s.record->refinements;
      advance(level + 1, 2 * node, 0.5 * h, t, left_[next]);
      advance(level + 1, 2 * node + 1, 0.5 * h, t + 0.5 * h, right_[next]);
      return;
    }

    if (split) {
      for (std::size_t k = 0; k < systems_.size(); ++k) {
        if (flags[k].broken || flags[k].kick) tame(systems_[k], k, h, t, flags[k]);
      }
      if (crossed()) {
        ++systems_[0].record->crossings;
        annotate(systems_[0], AnnotationKind::CoupledCrossing, t, 0);
      }
    }
    for (System& s : systems_) {
      for (double v : s.proposal) {
        if (!std::isfinite(v)) failed_ = true;
      }
      s.x.swap(s.proposal);
    }
  }

  std::vector<System>& systems_;
  const IntegratorConfig& config_;
  const NoiseSource& noise_;
  std::size_t dim_;
  std::size_t step_ = 0;
  bool failed_ = false;
  std::vector<std::vector<double>> left_;
  std::vector<std::vector<double>> right_;
  std::vector<double> z_;
  std::vector<double> quantum_;
};

std::string describe_start(const StateVector& x0) {
  std::string out = std::string(to_string(x0.coord)) + "[";
  for (std::size_t i = 0; i < x0.size(); ++i) {
    if (i) out += ",";
    out += hex_double(x0[i]);
  }
  return out + "]";
}

std::vector<PathRecord> run(const std::vector<const DiffusionModel*>& models,
                            const std::vector<const StateVector*>& starts,
                            const IntegratorConfig& config, const NoiseSource& noise,
                            const StepObserver& observer) {
  config.validate();
  std::string digest_text = config.canonical();
  for (std::size_t k = 0; k < models.size(); ++k) {
    validate_start(*models[k], *starts[k]);
    digest_text += "|" + models[k]->describe() + "|" + describe_start(*starts[k]);
  }
  if (models.size() == 2 && models[0]->dimension() != models[1]->dimension()) {
    throw Error(ErrorKind::InvalidParams, "coupled systems must have equal dimension");
  }
  const std::uint64_t digest = fnv1a64(digest_text);

  std::vector<PathRecord> records(models.size());
  std::vector<System> systems(models.size());
  const std::size_t steps = config.steps();
  const std::size_t recorded = steps / static_cast<std::size_t>(config.record_stride) + 2;
  for (std::size_t k = 0; k < models.size(); ++k) {
    PathRecord& r = records[k];
    r.coord = models[k]->coord();
    r.seed = noise.seed();
    r.path_id = noise.path_id();
    r.config_digest = digest;
    r.times.reserve(recorded);
    r.states.reserve(recorded);
    r.times.push_back(0.0);
    r.states.push_back(*starts[k]);
    System& s = systems[k];
    s.model = models[k];
    s.x = starts[k]->values;
    const std::size_t n = s.x.size();
    s.proposal.assign(n, 0.0);
    s.eval.assign(n, 0.0);
    s.drift.assign(n, 0.0);
    s.diffusion.assign(n, 0.0);
    s.record = &r;
  }

  const std::size_t dim = systems.front().x.size();
  std::vector<std::vector<double>> views(models.size());
  auto notify = [&](std::size_t step, double t, const std::vector<double>& dw) {
    if (!observer) return true;
    for (std::size_t k = 0; k < systems.size(); ++k) views[k] = systems[k].x;
    const bool keep_going = observer(StepView{step, t, views, dw});
    for (std::size_t k = 0; k < systems.size(); ++k) systems[k].x = views[k];
    return keep_going;
  };
  auto record = [&](double t) {
    for (std::size_t k = 0; k < systems.size(); ++k) {
      records[k].times.push_back(t);
      records[k].states.push_back(StateVector{records[k].coord, systems[k].x});
    }
  };
  auto finish = [&](Termination how) {
    for (PathRecord& r : records) r.termination = how;
  };

  Engine engine(systems, config, noise);
  std::vector<double> dw(dim);
  if (!notify(0, 0.0, {})) {
    finish(Termination::StoppedEarly);
    return records;
  }
  for (std::size_t step = 0; step < steps; ++step) {
    engine.base_increments(step, dw);
    const bool ok = engine.step(step, dw);
    const double t = static_cast<double>(step + 1) * config.dt;
    if (!ok) {
      record(t);
      for (PathRecord& r : records) {
        r.termination = Termination::Errored;
        r.error_reason = "non-finite state";
        r.error_time = t;
      }
      return records;
    }
    const bool last = step + 1 == steps;
    const bool keep_going = notify(step + 1, t, dw);
    if (last || !keep_going || (step + 1) % static_cast<std::size_t>(config.record_stride) == 0) {
      record(t);
    }
    if (!keep_going) {
      finish(Termination::StoppedEarly);
      return records;
    }
  }
  finish(Termination::HorizonReached);
  return records;
}

}  // namespace

PathRecord simulate_path(const DiffusionModel& model, const IntegratorConfig& config,
                         const StateVector& x0, const NoiseSource& noise,
                         const StepObserver& observer) {
  auto records = run({&model}, {&x0}, config, noise, observer);
  return std::move(records.front());
}

std::pair<PathRecord, PathRecord> simulate_coupled(const DiffusionModel& model_a,
                                                   const DiffusionModel& model_b,
                                                   const IntegratorConfig& config,
                                                   const StateVector& x0_a,
                                                   const StateVector& x0_b,
                                                   const NoiseSource& noise,
                                                   const StepObserver& observer) {
  auto records = run({&model_a, &model_b}, {&x0_a, &x0_b}, config, noise, observer);
  return {std::move(records[0]), std::move(records[1])};
}

PathRecord simulate_cir(const CIRParams& params, const IntegratorConfig& config, double r0,
                        const NoiseSource& noise) {
  const CirModel model(params);
  return simulate_path(model, config, StateVector{Coord::Reference, {r0}}, noise);
}

PathRecord simulate_jacobi(const JacobiParams& params, const IntegratorConfig& config,
                           double r0, const NoiseSource& noise) {
  const JacobiModel model(params);
  return simulate_path(model, config, StateVector{Coord::Reference, {r0}}, noise);
}

}  // namespace bjacobi

#include "bjacobi/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "bjacobi/errors.hpp"
#include "bjacobi/events.hpp"
#include "bjacobi/parallel.hpp"

namespace bjacobi {

void ExperimentConfig::validate() const {
  params.validate();
  integrator.validate();
  if (n_paths < 1) throw Error(ErrorKind::InvalidParams, "n_paths must be at least 1");
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    throw Error(ErrorKind::InvalidParams, "delta must be finite and nonnegative");
  }
  if (k < 1 || k > params.n) throw Error(ErrorKind::InvalidParams, "k must lie in [1, n]");
  if (!(eps > 0.0) || !std::isfinite(eps)) throw Error(ErrorKind::InvalidParams, "eps must be positive");
  if (x0) {
    if (x0->coord != Coord::Lambda || x0->size() != static_cast<std::size_t>(params.n)) {
      throw Error(ErrorKind::InvalidParams, "x0 must be a lambda state of size n");
    }
  }
}

StateVector ExperimentConfig::start() const {
  if (x0) return *x0;
  StateVector s{Coord::Lambda, std::vector<double>(static_cast<std::size_t>(params.n))};
  for (int i = 0; i < params.n; ++i) s.values[static_cast<std::size_t>(i)] = (i + 1.0) / (params.n + 1.0);
  return s;
}

void RunStats::add(const PathRecord& path) {
  ++n_paths;
  if (path.termination == Termination::Errored) {
    if (errored == 0) first_error = path.error_reason;
    ++errored;
  }
  if (path.termination == Termination::StoppedEarly) ++stopped_early;
  refinements += path.refinements;
  collisions += path.collisions;
  tamed_steps += path.tamed_steps;
  crossings += path.crossings;
}

namespace {

/// Runs body(i) for every path and returns the per-path results in path order.
template <class Result, class Body>
std::vector<Result> for_each_path(const ExperimentConfig& cfg, Body body) {
  std::vector<Result> out(cfg.n_paths);
  parallel_for(cfg.n_paths, resolve_threads(cfg.threads), [&](std::size_t i) { out[i] = body(i); });
  return out;
}

/// Keeps only the initial and final states; observers do the bookkeeping.
IntegratorConfig sparse_recording(IntegratorConfig c) {
  c.record_stride = static_cast<int>(std::min<std::size_t>(
      std::max<std::size_t>(c.steps(), 1), static_cast<std::size_t>(std::numeric_limits<int>::max())));
  return c;
}

/// Path summary without the trajectory.
PathRecord strip(PathRecord r) {
  r.times.clear();
  r.states.clear();
  r.times.shrink_to_fit();
  r.states.shrink_to_fit();
  return r;
}

double side_statistic(std::span<const double> x, int k, Side side) {
  const auto kk = static_cast<std::size_t>(k);
  return side == Side::Zero ? bottom_sum(x, kk) : top_deficit(x, kk);
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

HittingReport hitting_probability(const ExperimentConfig& cfg) {
  cfg.validate();
  const LambdaModel model(cfg.params);
  const IntegratorConfig integ = sparse_recording(cfg.integrator);
  const StateVector x0 = cfg.start();

  struct PathOut {
    PathRecord record;
    std::optional<double> hit;
  };
  auto paths = for_each_path<PathOut>(cfg, [&](std::size_t i) {
    PathOut out;
    const NoiseSource noise(cfg.seed, i);
    out.record = strip(simulate_path(model, integ, x0, noise, [&](const StepView& v) {
      if (side_statistic(v.states[0], cfg.k, cfg.side) <= cfg.delta) {
        out.hit = v.t;
        return false;
      }
      return true;
    }));
    return out;
  });

  HittingReport report;
  report.threshold = collision_threshold(cfg.k, cfg.side, cfg.params, cfg.threshold_form);
  std::size_t hits = 0;
  for (const PathOut& p : paths) {
    report.run.add(p.record);
    report.hit_times.push_back(p.hit);
    if (p.record.termination != Termination::Errored && p.hit) ++hits;
  }
  const std::size_t completed = report.run.n_paths - report.run.errored;
  report.partial = report.run.errored > 0;
  if (completed == 0) {
    throw Error(ErrorKind::InsufficientSamples, "every path failed: " + report.run.first_error);
  }
  report.estimate = binomial_estimate("hit_fraction", hits, completed);
  return report;
}

NoCollisionReport no_collision_check(const ExperimentConfig& cfg) {
  cfg.validate();
  const LambdaModel model(cfg.params);
  const IntegratorConfig integ = sparse_recording(cfg.integrator);
  const StateVector x0 = cfg.start();

  struct PathOut {
    PathRecord record;
    double min = std::numeric_limits<double>::infinity();
  };
  auto paths = for_each_path<PathOut>(cfg, [&](std::size_t i) {
    PathOut out;
    const NoiseSource noise(cfg.seed, i);
    out.record = strip(simulate_path(model, integ, x0, noise, [&](const StepView& v) {
      out.min = std::min(out.min, side_statistic(v.states[0], cfg.k, cfg.side));
      return !(cfg.stop_at_event && out.min <= cfg.delta);
    }));
    return out;
  });

  NoCollisionReport report;
  report.threshold = collision_threshold(cfg.k, cfg.side, cfg.params, cfg.threshold_form);
  std::size_t completed = 0;
  for (const PathOut& p : paths) {
    report.run.add(p.record);
    report.minima.push_back(p.min);
    if (p.record.termination == Termination::Errored) continue;
    ++completed;
    if (p.min <= cfg.delta) ++report.flagged;
  }
  report.partial = report.run.errored > 0;
  if (completed == 0) {
    throw Error(ErrorKind::InsufficientSamples, "every path failed: " + report.run.first_error);
  }
  std::vector<double> sorted = report.minima;
  std::sort(sorted.begin(), sorted.end());
  report.min = sorted.front();
  report.q05 = quantile_sorted(sorted, 0.05);
  report.median = quantile_sorted(sorted, 0.5);
  report.max = sorted.back();
  report.flagged_fraction = binomial_estimate("flagged_fraction", report.flagged, completed);
  return report;
}

ContractionReport contraction_experiment(const ExperimentConfig& cfg, const StateVector& x0_a,
                                         const StateVector& x0_b, std::vector<double> checkpoints) {
  cfg.validate();
  const LambdaModel model(cfg.params);

  struct PathOut {
    PathRecord record;
    std::vector<double> times;
    std::vector<double> distance;
  };
  auto paths = for_each_path<PathOut>(cfg, [&](std::size_t i) {
    const NoiseSource noise(cfg.seed, i);
    auto [a, b] = simulate_coupled(model, model, cfg.integrator, x0_a, x0_b, noise);
    PathOut out;
    out.times = a.times;
    out.distance.resize(a.states.size());
    for (std::size_t t = 0; t < a.states.size(); ++t) {
      double d = 0.0;
      for (std::size_t c = 0; c < a.states[t].size(); ++c) d += std::abs(a.states[t][c] - b.states[t][c]);
      out.distance[t] = d;
    }
    if (b.termination == Termination::Errored) a.termination = Termination::Errored;
    if (a.error_reason.empty()) a.error_reason = b.error_reason;
    a.crossings += b.crossings;
    a.collisions += b.collisions;
    a.tamed_steps += b.tamed_steps;
    out.record = strip(std::move(a));
    return out;
  });

  ContractionReport report;
  std::vector<const PathOut*> good;
  for (const PathOut& p : paths) {
    report.run.add(p.record);
    if (p.record.termination != Termination::Errored) good.push_back(&p);
  }
  if (good.size() < 2) {
    throw Error(ErrorKind::InsufficientSamples, "contraction needs at least 2 completed pairs");
  }
  report.times = good.front()->times;
  const std::size_t m = report.times.size();
  report.curve.assign(m, 0.0);
  report.curve_se.assign(m, 0.0);
  std::vector<double> column(good.size());
  for (std::size_t t = 0; t < m; ++t) {
    for (std::size_t j = 0; j < good.size(); ++j) column[j] = good[j]->distance[t];
    const SampleSummary s = summarize(column);
    report.curve[t] = s.mean;
    report.curve_se[t] = s.std_error();
  }
  report.initial_distance = report.curve.front();
  report.rate_tested = cfg.params.beta * (cfg.params.p + cfg.params.q);
  report.rate_stated = 2.0 * report.rate_tested;

  report.below_bound = true;
  for (std::size_t t = 0; t < m; ++t) {
    const double bound = report.initial_distance * std::exp(-report.rate_tested * report.times[t]);
    if (report.curve[t] > bound + 3.0 * report.curve_se[t]) report.below_bound = false;
  }

  auto nearest = [&](double time) {
    std::size_t best = 0;
    for (std::size_t t = 1; t < m; ++t) {
      if (std::abs(report.times[t] - time) < std::abs(report.times[best] - time)) best = t;
    }
    return best;
  };
  std::vector<std::size_t> indices;
  for (double c : checkpoints) {
    if (c < 0.0 || c > report.times.back() + 0.5 * cfg.integrator.dt) continue;
    report.checkpoints.push_back(c);
    indices.push_back(nearest(c));
  }
  report.monotone = true;
  for (std::size_t c = 1; c < indices.size(); ++c) {
    for (std::size_t j = 0; j < good.size(); ++j) {
      column[j] = good[j]->distance[indices[c]] - good[j]->distance[indices[c - 1]];
    }
    const SampleSummary s = summarize(column);
    if (s.mean > 3.0 * s.std_error()) report.monotone = false;
  }

  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t t = 0; t < m; ++t) {
    if (report.curve[t] > 0.0) {
      xs.push_back(report.times[t]);
      ys.push_back(std::log(report.curve[t]));
    }
  }
  if (xs.size() >= 3) {
    report.fit = fit_line(xs, ys);
    report.fitted_rate = -report.fit.slope;
  }
  return report;
}

ComparisonPair cir_pair(const CIRParams& upper, const CIRParams& lower, double x0) {
  ComparisonPair pair;
  pair.upper = std::make_shared<CirModel>(upper);
  pair.lower = std::make_shared<CirModel>(lower);
  pair.x0_upper = x0;
  pair.x0_lower = x0;
  pair.label = pair.upper->describe() + " >= " + pair.lower->describe();
  return pair;
}

ComparisonPair jacobi_pair(const JacobiParams& upper, const JacobiParams& lower, double x0) {
  ComparisonPair pair;
  pair.upper = std::make_shared<JacobiModel>(upper);
  pair.lower = std::make_shared<JacobiModel>(lower);
  pair.x0_upper = x0;
  pair.x0_lower = x0;
  pair.label = pair.upper->describe() + " >= " + pair.lower->describe();
  return pair;
}

ComparisonReport comparison_experiment(const ExperimentConfig& cfg, const ComparisonPair& pair,
                                       double tolerance) {
  cfg.validate();
  if (!pair.upper || !pair.lower) throw Error(ErrorKind::InvalidParams, "comparison pair is incomplete");
  if (pair.upper->dimension() != 1 || pair.lower->dimension() != 1) {
    throw Error(ErrorKind::InvalidParams, "comparison models must be one-dimensional");
  }
  const IntegratorConfig integ = sparse_recording(cfg.integrator);
  const StateVector xu{pair.upper->coord(), {pair.x0_upper}};
  const StateVector xl{pair.lower->coord(), {pair.x0_lower}};

  struct PathOut {
    PathRecord record;
    std::size_t violations = 0;
    double max_violation = 0.0;
  };
  auto paths = for_each_path<PathOut>(cfg, [&](std::size_t i) {
    PathOut out;
    const NoiseSource noise(cfg.seed, i);
    auto [u, l] = simulate_coupled(*pair.upper, *pair.lower, integ, xu, xl, noise,
                                   [&](const StepView& v) {
                                     const double gap = v.states[1][0] - v.states[0][0];
                                     if (gap > tolerance) {
                                       ++out.violations;
                                       out.max_violation = std::max(out.max_violation, gap);
                                     }
                                     return true;
                                   });
    if (l.termination == Termination::Errored && u.termination != Termination::Errored) {
      u.termination = Termination::Errored;
      u.error_reason = l.error_reason;
    }
    out.record = strip(std::move(u));
    return out;
  });

  ComparisonReport report;
  report.label = pair.label;
  report.tolerance = tolerance;
  std::size_t completed = 0;
  for (const PathOut& p : paths) {
    report.run.add(p.record);
    report.violations.push_back(p.violations);
    if (p.record.termination == Termination::Errored) continue;
    ++completed;
    report.total_violations += p.violations;
    if (p.violations > 0) ++report.paths_with_violations;
    report.max_violation = std::max(report.max_violation, p.max_violation);
  }
  if (completed == 0) {
    throw Error(ErrorKind::InsufficientSamples, "every path failed: " + report.run.first_error);
  }
  report.violating_fraction =
      binomial_estimate("violating_fraction", report.paths_with_violations, completed);
  return report;
}

PsiDominationModel::PsiDominationModel(ModelParams params, int k, double eps)
    : params_(params), k_(k), eps_(eps) {
  params_.validate();
  if (k_ < 1 || k_ > params_.n) throw Error(ErrorKind::InvalidParams, "k must lie in [1, n]");
  if (!(eps_ > 0.0)) throw Error(ErrorKind::InvalidParams, "eps must be positive");
  const double n = params_.n;
  cir_.a = k_ * params_.beta * (params_.p - n + k_);
  cir_.b = k_ == params_.n ? 0.0 : 4.0 * params_.beta * (n - k_) / eps_;
  cir_.sigma = 2.0;
}

double PsiDominationModel::upper(std::size_t i) const {
  if (i >= static_cast<std::size_t>(params_.n) || k_ == params_.n) {
    return std::numeric_limits<double>::infinity();
  }
  return kHalfPi * kHalfPi;
}

std::pair<std::size_t, std::size_t> PsiDominationModel::ordered_range() const {
  return {0, static_cast<std::size_t>(params_.n)};
}

double PsiDominationModel::partial_sum(std::span<const double> x) const noexcept {
  double s = 0.0;
  for (int i = 0; i < k_; ++i) s += x[static_cast<std::size_t>(i)];
  return s;
}

void PsiDominationModel::drift(std::span<const double> x, std::span<double> out) const {
  const auto n = static_cast<std::size_t>(params_.n);
  const auto k = static_cast<std::size_t>(k_);
  if (k < n) kernels::psi_drift(params_, x.first(n), out.first(n));
  const double base = params_.beta * (params_.p - params_.n + 1.0);
  for (std::size_t i = 0; i < k; ++i) {
    double pair = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) pair += x[i] / (x[i] - x[j]);
    }
    out[i] = base + 2.0 * params_.beta * pair;
  }
  out[n] = cir_.a - cir_.b * x[n];
  out[n + 1] = in_window(x) ? 0.0 : 1.0;
}

void PsiDominationModel::diffusion(std::span<const double> x, std::span<double> out) const {
  const auto n = static_cast<std::size_t>(params_.n);
  for (std::size_t i = 0; i <= n; ++i) out[i] = 2.0 * std::sqrt(x[i]);
  out[n + 1] = 0.0;
}

void PsiDominationModel::noise_increment(std::span<const double> x, std::span<const double> dw,
                                         std::span<double> out) const {
  const auto n = static_cast<std::size_t>(params_.n);
  for (std::size_t i = 0; i < n; ++i) out[i] = 2.0 * std::sqrt(x[i]) * dw[i];
  const double s = partial_sum(x);
  double aggregated = 0.0;
  for (int i = 0; i < k_; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    aggregated += s > 0.0 ? std::sqrt(x[ii]) * dw[ii] : dw[ii];
  }
  aggregated /= s > 0.0 ? std::sqrt(s) : std::sqrt(static_cast<double>(k_));
  out[n] = 2.0 * std::sqrt(x[n]) * aggregated;
  out[n + 1] = 0.0;
}

bool PsiDominationModel::flipped(std::span<const double> before, std::span<const double> after) const {
  const auto n = static_cast<std::size_t>(params_.n);
  const double b = partial_sum(before) - before[n];
  const double a = partial_sum(after) - after[n];
  return (b > 0.0 && a < 0.0) || (b < 0.0 && a > 0.0);
}

bool PsiDominationModel::in_window(std::span<const double> x) const noexcept {
  const auto k = static_cast<std::size_t>(k_);
  return k_ == params_.n || x[k] - x[k - 1] > 0.5 * eps_;
}

bool PsiDominationModel::regime_changed(std::span<const double> before,
                                        std::span<const double> after) const {
  return in_window(before) != in_window(after);
}

std::string PsiDominationModel::describe() const {
  return "psi_domination(n=" + std::to_string(params_.n) + ",p=" + hex_double(params_.p) +
         ",q=" + hex_double(params_.q) + ",beta=" + hex_double(params_.beta) +
         ",k=" + std::to_string(k_) + ",eps=" + hex_double(eps_) + ")";
}

PsiDominationReport psi_domination_experiment(const ExperimentConfig& cfg, int k, double tolerance) {
  cfg.validate();
  if (cfg.params.n < 1 || k < 1 || k > cfg.params.n) {
    throw Error(ErrorKind::InvalidParams, "k must lie in [1, n]");
  }
  const PsiDominationModel model(cfg.params, k, cfg.eps);
  const IntegratorConfig integ = sparse_recording(cfg.integrator);
  const auto n = static_cast<std::size_t>(cfg.params.n);

  StateVector x0 = phi_to_psi(lambda_to_phi(cfg.start()));
  x0.values.push_back(model.partial_sum(x0.values));
  x0.values.push_back(0.0);

  struct PathOut {
    PathRecord record;
    std::size_t segments = 0;
    std::size_t checked = 0;
    std::size_t violations = 0;
    double max_violation = 0.0;
  };
  auto paths = for_each_path<PathOut>(cfg, [&](std::size_t i) {
    PathOut out;
    bool was_open = false;
    const NoiseSource noise(cfg.seed, i);
    out.record = strip(simulate_path(model, integ, x0, noise, [&](const StepView& v) {
      std::vector<double>& x = v.states[0];
      const double s = model.partial_sum(x);
      const bool open = model.in_window(x) && x[n + 1] == 0.0;
      x[n + 1] = 0.0;
      if (open && was_open) {
        ++out.checked;
        const double shortfall = x[n] - s;
        if (shortfall > tolerance * std::max(1.0, x[n])) {
          ++out.violations;
          out.max_violation = std::max(out.max_violation, shortfall);
        }
      } else {
        if (open) ++out.segments;
        x[n] = s;
      }
      was_open = open;
      return true;
    }));
    return out;
  });

  PsiDominationReport report;
  report.k = k;
  report.eps = cfg.eps;
  report.tolerance = tolerance;
  report.cir = model.cir();
  for (const PathOut& p : paths) {
    report.run.add(p.record);
    if (p.record.termination == Termination::Errored) continue;
    report.segments += p.segments;
    report.checked_steps += p.checked;
    report.violations += p.violations;
    if (p.violations > 0) ++report.paths_with_violations;
    report.max_violation = std::max(report.max_violation, p.max_violation);
  }
  if (report.segments == 0) {
    throw Error(ErrorKind::NoQualifyingSegments,
                "the gap window psi^{k+1} - psi^k > eps/2 never opened");
  }
  return report;
}

namespace {

struct Moments {
  double mean = 0.0;
  double var = 0.0;
  /// Standard error of the sample variance from the fourth central moment.
  double var_se = 0.0;
  double mean_se = 0.0;
};

Moments moments(const std::vector<double>& xs) {
  Moments m;
  const SampleSummary s = summarize(xs);
  m.mean = s.mean;
  m.var = s.variance;
  m.mean_se = s.std_error();
  double m4 = 0.0;
  for (double x : xs) m4 += std::pow(x - s.mean, 4);
  const auto count = static_cast<double>(xs.size());
  m4 /= count;
  m.var_se = std::sqrt(std::max(m4 - s.variance * s.variance, 0.0) / count);
  return m;
}

double z_score(double a, double b, double se_a, double se_b) {
  const double diff = a - b;
  const double scale = std::hypot(se_a, se_b);
  if (scale > 0.0) return diff / scale;
  return diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
}

}  // namespace

ConsistencyReport coordinate_consistency_experiment(const ExperimentConfig& cfg, Coord coord_b,
                                                    std::optional<std::uint64_t> seed_b) {
  cfg.validate();
  if (coord_b != Coord::Phi && coord_b != Coord::Lambda) {
    throw Error(ErrorKind::InvalidParams, "consistency compares lambda with phi or lambda");
  }
  const std::uint64_t second_seed = seed_b.value_or(cfg.seed + 0x9E3779B97F4A7C15ULL);
  const StateVector x0 = cfg.start();
  const LambdaModel lambda_model(cfg.params);
  const PhiModel phi_model(cfg.params);

  IntegratorConfig integ_a = sparse_recording(cfg.integrator);
  IntegratorConfig integ_b = integ_a;
  if (coord_b == Coord::Phi) integ_b.scheme = Scheme::EMPhi;
  const StateVector x0_b = coord_b == Coord::Phi ? lambda_to_phi(x0) : x0;
  const DiffusionModel& model_b =
      coord_b == Coord::Phi ? static_cast<const DiffusionModel&>(phi_model) : lambda_model;

  struct PathOut {
    PathRecord a;
    PathRecord b;
    std::vector<double> final_a;
    std::vector<double> final_b;
  };
  auto paths = for_each_path<PathOut>(cfg, [&](std::size_t i) {
    PathOut out;
    PathRecord a = simulate_path(lambda_model, integ_a, x0, NoiseSource(cfg.seed, i));
    PathRecord b = simulate_path(model_b, integ_b, x0_b, NoiseSource(second_seed, i));
    out.final_a = a.states.back().values;
    out.final_b = b.coord == Coord::Phi ? phi_to_lambda(b.states.back()).values : b.states.back().values;
    std::sort(out.final_a.begin(), out.final_a.end());
    std::sort(out.final_b.begin(), out.final_b.end());
    out.a = strip(std::move(a));
    out.b = strip(std::move(b));
    return out;
  });

  ConsistencyReport report;
  report.coord_b = coord_b;
  std::vector<std::vector<double>> cols_a(x0.size());
  std::vector<std::vector<double>> cols_b(x0.size());
  for (const PathOut& p : paths) {
    report.run_a.add(p.a);
    report.run_b.add(p.b);
    if (p.a.termination != Termination::Errored) {
      for (std::size_t c = 0; c < x0.size(); ++c) cols_a[c].push_back(p.final_a[c]);
    }
    if (p.b.termination != Termination::Errored) {
      for (std::size_t c = 0; c < x0.size(); ++c) cols_b[c].push_back(p.final_b[c]);
    }
  }
  if (cols_a.front().size() < 2 || cols_b.front().size() < 2) {
    throw Error(ErrorKind::InsufficientSamples, "consistency needs at least 2 completed paths per side");
  }
  for (std::size_t c = 0; c < x0.size(); ++c) {
    const Moments ma = moments(cols_a[c]);
    const Moments mb = moments(cols_b[c]);
    CoordinateStat st;
    st.index = c;
    st.mean_a = ma.mean;
    st.mean_b = mb.mean;
    st.var_a = ma.var;
    st.var_b = mb.var;
    st.z_mean = z_score(ma.mean, mb.mean, ma.mean_se, mb.mean_se);
    st.z_var = z_score(ma.var, mb.var, ma.var_se, mb.var_se);
    report.max_abs_z = std::max({report.max_abs_z, std::abs(st.z_mean), std::abs(st.z_var)});
    report.coordinates.push_back(st);
  }
  return report;
}

StationaryExperimentReport stationary_experiment(const ExperimentConfig& cfg,
                                                 std::optional<double> burn_in,
                                                 std::optional<double> thin,
                                                 const StationaryOptions& options) {
  cfg.validate();
  StationaryExperimentReport report;
  report.burn_in = burn_in.value_or(0.1 * cfg.integrator.horizon_T);
  report.thin = thin.value_or(thinning_lag(cfg.params));
  if (!(report.burn_in >= 0.0) || !(report.thin > 0.0)) {
    throw Error(ErrorKind::InvalidParams, "burn-in must be nonnegative and thinning positive");
  }
  const auto burn_steps = static_cast<std::size_t>(std::ceil(report.burn_in / cfg.integrator.dt - 1e-9));
  const auto thin_steps = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(report.thin / cfg.integrator.dt)));
  const LambdaModel model(cfg.params);
  const IntegratorConfig integ = sparse_recording(cfg.integrator);
  const StateVector x0 = cfg.start();

  struct PathOut {
    PathRecord record;
    std::vector<StateVector> samples;
  };
  auto paths = for_each_path<PathOut>(cfg, [&](std::size_t i) {
    PathOut out;
    const NoiseSource noise(cfg.seed, i);
    out.record = strip(simulate_path(model, integ, x0, noise, [&](const StepView& v) {
      if (v.step >= burn_steps && (v.step - burn_steps) % thin_steps == 0) {
        out.samples.push_back(StateVector{Coord::Lambda, v.states[0]});
      }
      return true;
    }));
    return out;
  });

  std::vector<StateVector> samples;
  for (PathOut& p : paths) {
    report.run.add(p.record);
    if (p.record.termination == Termination::Errored) continue;
    for (StateVector& s : p.samples) samples.push_back(std::move(s));
  }
  report.report = empirical_compare(samples, cfg.params, options);
  return report;
}

}  // namespace bjacobi

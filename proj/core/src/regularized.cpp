#include "bjacobi/regularized.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bjacobi/errors.hpp"

namespace bjacobi {

namespace {

double clamp01(double v) noexcept { return std::min(1.0, std::max(0.0, v)); }

// Ramp in sqrt(y) reaching 1 at y = eps/2.
double wide_ramp(double y, double eps) noexcept {
  const double root_eps = std::sqrt(eps);
  return clamp01(2.0 * std::sqrt(2.0) / root_eps * (std::sqrt(y) - root_eps / (2.0 * std::sqrt(2.0))));
}

// Ramp in sqrt(y) reaching 1 at y = eps.
double narrow_ramp(double y, double eps) noexcept {
  const double root_eps = std::sqrt(eps);
  return clamp01(2.0 / root_eps * (std::sqrt(y) - root_eps / 2.0));
}

double cap(double y, double eps) noexcept { return std::min(y, eps / 2.0) / (eps / 2.0); }

enum class Ramp { Wide, Narrow };

double bracket(double x, double eps, Ramp upper, Ramp lower) noexcept {
  const double up = upper == Ramp::Wide ? wide_ramp(1.0 - x, eps) : narrow_ramp(1.0 - x, eps);
  const double lo = lower == Ramp::Wide ? wide_ramp(x, eps) : narrow_ramp(x, eps);
  return (1.0 - 2.0 * x) * (2.0 - up - lo);
}

// Bottom particle with its interactions capped.
double freed_bottom(const ModelParams& params, double eps, std::span<const double> x) {
  const std::size_t n = x.size();
  const double x1 = x[0];
  double sum = 0.0;
  for (std::size_t j = 1; j < n; ++j) {
    sum += x1 * (1.0 - x[j]) / std::max(x[j] - std::min(x1, eps), eps);
  }
  return params.beta * (params.p - static_cast<double>(n) + 1.0 - (params.p + params.q) * x1 -
                        2.0 * cap(1.0 - x1, eps) * sum);
}

// Top particle, mirror image of freed_bottom.
double freed_top(const ModelParams& params, double eps, std::span<const double> x) {
  const std::size_t n = x.size();
  const double xn = x[n - 1];
  double sum = 0.0;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    sum += xn * (1.0 - x[j]) / std::max(std::max(xn, 1.0 - eps) - x[j], eps);
  }
  return params.beta * (params.p - static_cast<double>(n) + 1.0 - (params.p + params.q) * xn +
                        2.0 * cap(xn, eps) * sum);
}

// Dual-form interaction of coordinate i with the coordinates in [first, last).
double block_interaction(std::span<const double> x, std::size_t i, std::size_t first,
                         std::size_t last) {
  double sum = 0.0;
  for (std::size_t j = first; j < last; ++j) {
    if (j == i) continue;
    sum += x[i] * (1.0 - x[j]) / (x[i] - x[j]);
  }
  return 2.0 * sum;
}

void check_state(Regularization variant, const ModelParams& params, const StateVector& state,
                 double gap_floor) {
  params.validate();
  if (state.coord != Coord::Lambda) {
    throw Error(ErrorKind::InvalidParams, "drift_regularized expects lambda coordinates");
  }
  if (state.size() != static_cast<std::size_t>(params.n)) {
    throw Error(ErrorKind::InvalidParams, "drift_regularized: state size does not match n");
  }
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (!(state[i] >= 0.0 && state[i] <= 1.0)) {
      throw Error(ErrorKind::OutOfRange,
                  "drift_regularized: coordinate " + std::to_string(i) + " outside [0, 1]");
    }
  }
  const auto [first, last] = ordered_block(variant, state.size());
  for (std::size_t i = first + 1; i < last; ++i) {
    if (state[i] < state[i - 1]) {
      throw Error(ErrorKind::NotOrdered,
                  "drift_regularized: coordinates " + std::to_string(i - 1) + " and " +
                      std::to_string(i) + " are out of order");
    }
    if (state[i] - state[i - 1] <= gap_floor) {
      throw Error(ErrorKind::GapTooSmall,
                  "drift_regularized: gap below floor at coordinate " + std::to_string(i));
    }
  }
}

}  // namespace

std::string_view to_string(Regularization variant) noexcept {
  switch (variant) {
    case Regularization::Hat: return "hat";
    case Regularization::Tilde: return "tilde";
    case Regularization::Check: return "check";
    case Regularization::Bar: return "bar";
  }
  return "unknown";
}

Regularization regularization_from_string(std::string_view name) {
  if (name == "hat") return Regularization::Hat;
  if (name == "tilde") return Regularization::Tilde;
  if (name == "check") return Regularization::Check;
  if (name == "bar") return Regularization::Bar;
  throw Error(ErrorKind::Config, "unknown regularization '" + std::string(name) + "'");
}

std::pair<std::size_t, std::size_t> ordered_block(Regularization variant, std::size_t n) noexcept {
  switch (variant) {
    case Regularization::Hat: return {0, n};
    case Regularization::Tilde: return {std::min<std::size_t>(1, n), n};
    case Regularization::Check: return {0, n == 0 ? 0 : n - 1};
    case Regularization::Bar:
      if (n <= 2) return {std::min<std::size_t>(1, n), std::min<std::size_t>(1, n)};
      return {1, n - 1};
  }
  return {0, n};
}

namespace kernels {

void regularized_drift(Regularization variant, const ModelParams& params, double eps,
                       std::span<const double> x, std::span<double> out) {
  const std::size_t n = x.size();
  const double edge = params.p - static_cast<double>(n) + 1.0;
  switch (variant) {
    case Regularization::Hat: {
      kernels::lambda_drift(params, x, out);
      for (std::size_t i = 0; i < n; ++i) out[i] += bracket(x[i], eps, Ramp::Wide, Ramp::Wide);
      return;
    }
    case Regularization::Tilde: {
      out[0] = freed_bottom(params, eps, x);
      for (std::size_t i = 1; i < n; ++i) {
        const double capped =
            2.0 * cap(1.0 - x[i], eps) * x[i] * (1.0 - x[0]) / std::max(x[i] - x[0], eps);
        out[i] = bracket(x[i], eps, Ramp::Wide, Ramp::Narrow) +
                 params.beta * (edge - (params.p + params.q) * x[i] + capped +
                                block_interaction(x, i, 1, n));
      }
      return;
    }
    case Regularization::Check: {
      out[n - 1] = freed_top(params, eps, x);
      for (std::size_t i = 0; i + 1 < n; ++i) {
        const double capped =
            2.0 * cap(1.0 - x[i], eps) * x[i] * (1.0 - x[n - 1]) / std::max(x[n - 1] - x[i], eps);
        out[i] = bracket(x[i], eps, Ramp::Narrow, Ramp::Wide) +
                 params.beta * (edge - (params.p + params.q) * x[i] - capped +
                                block_interaction(x, i, 0, n - 1));
      }
      return;
    }
    case Regularization::Bar: {
      out[0] = freed_bottom(params, eps, x);
      if (n == 1) return;
      out[n - 1] = freed_top(params, eps, x);
      for (std::size_t i = 1; i + 1 < n; ++i) {
        const double below = x[i] * (1.0 - x[0]) / std::max(x[i] - x[0], eps);
        const double above = x[i] * (1.0 - x[n - 1]) / std::max(x[n - 1] - x[i], eps);
        out[i] = bracket(x[i], eps, Ramp::Narrow, Ramp::Narrow) +
                 params.beta * (edge - (params.p + params.q) * x[i] +
                                2.0 * cap(1.0 - x[i], eps) * (below - above) +
                                block_interaction(x, i, 1, n - 1));
      }
      return;
    }
  }
}

}  // namespace kernels

DriftVector drift_regularized(Regularization variant, const ModelParams& params, double eps,
                              const StateVector& state, double gap_floor) {
  if (!(eps > 0.0) || !(eps < 1.0)) {
    throw Error(ErrorKind::InvalidParams, "regularization eps must lie in (0, 1)");
  }
  check_state(variant, params, state, gap_floor);
  DriftVector out(state.size());
  kernels::regularized_drift(variant, params, eps, state.values, out);
  return out;
}

bool coincidence_domain(Regularization variant, double eps, const StateVector& state) {
  const auto& x = state.values;
  const std::size_t n = x.size();
  if (n == 0) return false;
  const double lo = x.front();
  const double hi = x.back();
  const bool bottom_gap = n < 2 || x[1] - x[0] >= eps;
  const bool top_gap = n < 2 || x[n - 1] - x[n - 2] >= eps;
  switch (variant) {
    case Regularization::Hat: return lo >= eps / 2.0 && hi <= 1.0 - eps / 2.0;
    case Regularization::Tilde: return lo <= eps && bottom_gap && hi <= 1.0 - eps / 2.0;
    case Regularization::Check: return lo >= eps / 2.0 && hi >= 1.0 - eps && top_gap;
    case Regularization::Bar: return lo <= eps && bottom_gap && hi >= 1.0 - eps && top_gap;
  }
  return false;
}

}  // namespace bjacobi

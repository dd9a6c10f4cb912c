#include "bjacobi/model.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "bjacobi/errors.hpp"

namespace bjacobi {

namespace {

double cot(double x) { return std::cos(x) / std::sin(x); }

void require_coord(const StateVector& state, Coord expected, const char* op) {
  if (state.coord != expected) {
    throw Error(ErrorKind::InvalidParams, std::string(op) + " expects " +
                                              std::string(to_string(expected)) +
                                              " coordinates, got " +
                                              std::string(to_string(state.coord)));
  }
}

void require_size(const ModelParams& params, const StateVector& state, const char* op) {
  params.validate();
  if (state.size() != static_cast<std::size_t>(params.n)) {
    throw Error(ErrorKind::InvalidParams, std::string(op) + ": state has " +
                                              std::to_string(state.size()) +
                                              " coordinates, model has n = " +
                                              std::to_string(params.n));
  }
}

void require_range(std::span<const double> x, double upper, const char* op) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= 0.0 && x[i] <= upper)) {
      throw Error(ErrorKind::OutOfRange, std::string(op) + ": coordinate " + std::to_string(i) +
                                             " = " + std::to_string(x[i]) + " outside [0, " +
                                             std::to_string(upper) + "]");
    }
  }
}

void require_ordered(std::span<const double> x, const char* op) {
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (x[i] < x[i - 1]) {
      throw Error(ErrorKind::NotOrdered,
                  std::string(op) + ": coordinates " + std::to_string(i - 1) + " and " +
                      std::to_string(i) + " are out of order");
    }
  }
}

void require_gaps(std::span<const double> x, double floor, ErrorKind kind, const char* op) {
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (x[i] - x[i - 1] <= floor) {
      throw Error(kind, std::string(op) + ": gap between coordinates " + std::to_string(i - 1) +
                            " and " + std::to_string(i) + " is " +
                            std::to_string(x[i] - x[i - 1]));
    }
  }
}

void check_lambda(const ModelParams& params, const StateVector& state, double gap_floor,
                  const char* op) {
  require_coord(state, Coord::Lambda, op);
  require_size(params, state, op);
  require_range(state.values, 1.0, op);
  require_ordered(state.values, op);
  require_gaps(state.values, gap_floor, ErrorKind::GapTooSmall, op);
}

// Angles must sit strictly inside (0, pi/2) and strictly apart.
void check_angles(std::span<const double> phi, double floor, const char* op) {
  require_ordered(phi, op);
  for (std::size_t i = 0; i < phi.size(); ++i) {
    if (phi[i] <= floor || phi[i] >= kHalfPi - floor) {
      throw Error(ErrorKind::Singular,
                  std::string(op) + ": coordinate " + std::to_string(i) + " on the boundary");
    }
  }
  require_gaps(phi, floor, ErrorKind::Singular, op);
}

void check_phi(const ModelParams& params, const StateVector& state, double floor,
               const char* op) {
  require_coord(state, Coord::Phi, op);
  require_size(params, state, op);
  require_range(state.values, kHalfPi, op);
  check_angles(state.values, floor, op);
}

}  // namespace

void ModelParams::validate() const {
  if (n < 1) throw Error(ErrorKind::InvalidParams, "n must be >= 1");
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw Error(ErrorKind::InvalidParams, "beta must be positive and finite");
  }
  if (!(p >= 0.0) || !std::isfinite(p)) {
    throw Error(ErrorKind::InvalidParams, "p must be nonnegative and finite");
  }
  if (!(q >= 0.0) || !std::isfinite(q)) {
    throw Error(ErrorKind::InvalidParams, "q must be nonnegative and finite");
  }
}

double ModelParams::edge_margin() const noexcept { return std::min(p, q) - n + 1.0; }

ValidationReport validate_params(const ModelParams& params) {
  params.validate();
  ValidationReport report;
  report.edge_margin = params.edge_margin();
  report.well_posed = report.edge_margin > 0.0;
  report.global_regime = report.edge_margin >= 1.0 / params.beta - 1.0;
  report.zero_side.reserve(static_cast<std::size_t>(params.n));
  report.one_side.reserve(static_cast<std::size_t>(params.n));
  for (int k = 1; k <= params.n; ++k) {
    report.zero_side.push_back(k * params.beta * (params.p - params.n + k));
    report.one_side.push_back(k * params.beta * (params.q - params.n + k));
  }
  return report;
}

std::string_view to_string(Coord coord) noexcept {
  switch (coord) {
    case Coord::Lambda: return "lambda";
    case Coord::Phi: return "phi";
    case Coord::Psi: return "psi";
    case Coord::Reference: return "x";
  }
  return "unknown";
}

double coord_upper(Coord coord) noexcept {
  switch (coord) {
    case Coord::Lambda: return 1.0;
    case Coord::Phi: return kHalfPi;
    case Coord::Psi: return kHalfPi * kHalfPi;
    case Coord::Reference: return std::numeric_limits<double>::infinity();
  }
  return 0.0;
}

namespace kernels {

void lambda_drift(const ModelParams& params, std::span<const double> x, std::span<double> out) {
  const std::size_t n = x.size();
  auto pair = [&](std::size_t i, std::size_t j) {
    return (x[i] * (1.0 - x[j]) + x[j] * (1.0 - x[i])) / (x[i] - x[j]);
  };
  for (std::size_t i = 0; i < n; ++i) {
    // Pairs summed by distance, left and right neighbour together.
    double interaction = 0.0;
    for (std::size_t d = 1; d < n; ++d) {
      const bool has_left = i >= d;
      const bool has_right = i + d < n;
      if (has_left && has_right) {
        interaction += pair(i, i - d) + pair(i, i + d);
      } else if (has_left) {
        interaction += pair(i, i - d);
      } else if (has_right) {
        interaction += pair(i, i + d);
      }
    }
    out[i] = params.beta * (params.p - (params.p + params.q) * x[i] + interaction);
  }
}

void lambda_dual_drift(const ModelParams& params, std::span<const double> x,
                       std::span<double> out) {
  const std::size_t n = x.size();
  const double edge = params.p - static_cast<double>(n) + 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    double interaction = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      interaction += (1.0 - x[j]) / (x[i] - x[j]);
    }
    out[i] = params.beta * (edge - (params.p + params.q) * x[i] + 2.0 * x[i] * interaction);
  }
}

void lambda_diffusion(std::span<const double> x, std::span<double> out) {
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = 2.0 * std::sqrt(x[i] * (1.0 - x[i]));
}

void phi_drift(const ModelParams& params, std::span<const double> phi, std::span<double> out) {
  const std::size_t n = phi.size();
  const double edge = params.beta * (params.p - params.q) / 2.0;
  const double doubled = params.beta * (params.q - static_cast<double>(n) + 1.0) - 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    double interaction = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      interaction += cot(phi[i] + phi[j]) + cot(phi[i] - phi[j]);
    }
    out[i] = edge * cot(phi[i]) + doubled * cot(2.0 * phi[i]) + 0.5 * params.beta * interaction;
  }
}

void psi_drift(const ModelParams& params, std::span<const double> psi, std::span<double> out) {
  const std::size_t n = psi.size();
  const double doubled = params.beta * (params.q - static_cast<double>(n) + 1.0) - 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = std::sqrt(psi[i]);
    double interaction = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double s = std::sqrt(psi[j]);
      interaction += cot(r + s) + cot(r - s);
    }
    out[i] = 1.0 + params.beta * (params.p - params.q) * r * cot(r) +
             2.0 * doubled * r * cot(2.0 * r) + params.beta * r * interaction;
  }
}

}  // namespace kernels

DriftVector drift_lambda(const ModelParams& params, const StateVector& state, double gap_floor) {
  check_lambda(params, state, gap_floor, "drift_lambda");
  DriftVector out(state.size());
  kernels::lambda_drift(params, state.values, out);
  return out;
}

DriftVector drift_lambda_dual(const ModelParams& params, const StateVector& state,
                              double gap_floor) {
  check_lambda(params, state, gap_floor, "drift_lambda_dual");
  DriftVector out(state.size());
  kernels::lambda_dual_drift(params, state.values, out);
  return out;
}

DriftVector diffusion_lambda(const StateVector& state) {
  require_coord(state, Coord::Lambda, "diffusion_lambda");
  require_range(state.values, 1.0, "diffusion_lambda");
  DriftVector out(state.size());
  kernels::lambda_diffusion(state.values, out);
  return out;
}

StateVector lambda_to_phi(const StateVector& state) {
  require_coord(state, Coord::Lambda, "lambda_to_phi");
  require_range(state.values, 1.0, "lambda_to_phi");
  StateVector out{Coord::Phi, std::vector<double>(state.size())};
  for (std::size_t i = 0; i < state.size(); ++i) out.values[i] = std::asin(std::sqrt(state[i]));
  return out;
}

StateVector phi_to_lambda(const StateVector& state) {
  require_coord(state, Coord::Phi, "phi_to_lambda");
  require_range(state.values, kHalfPi, "phi_to_lambda");
  StateVector out{Coord::Lambda, std::vector<double>(state.size())};
  for (std::size_t i = 0; i < state.size(); ++i) {
    const double s = std::sin(state[i]);
    out.values[i] = std::min(1.0, s * s);
  }
  return out;
}

StateVector phi_to_psi(const StateVector& state) {
  require_coord(state, Coord::Phi, "phi_to_psi");
  require_range(state.values, kHalfPi, "phi_to_psi");
  StateVector out{Coord::Psi, std::vector<double>(state.size())};
  for (std::size_t i = 0; i < state.size(); ++i) out.values[i] = state[i] * state[i];
  return out;
}

StateVector psi_to_phi(const StateVector& state) {
  require_coord(state, Coord::Psi, "psi_to_phi");
  require_range(state.values, coord_upper(Coord::Psi), "psi_to_phi");
  StateVector out{Coord::Phi, std::vector<double>(state.size())};
  for (std::size_t i = 0; i < state.size(); ++i) {
    out.values[i] = std::min(kHalfPi, std::sqrt(state[i]));
  }
  return out;
}

DriftVector drift_phi(const ModelParams& params, const StateVector& state, double floor) {
  check_phi(params, state, floor, "drift_phi");
  DriftVector out(state.size());
  kernels::phi_drift(params, state.values, out);
  return out;
}

double potential(const ModelParams& params, const StateVector& state, double floor) {
  check_phi(params, state, floor, "potential");
  const auto& phi = state.values;
  const std::size_t n = phi.size();
  const double edge = params.beta * (params.p - params.q) / 2.0;
  const double doubled = (params.beta * (params.q - static_cast<double>(n) + 1.0) - 1.0) / 2.0;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double pair = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      pair += std::log(std::abs(std::sin(phi[i] + phi[j]))) +
              std::log(std::abs(std::sin(phi[i] - phi[j])));
    }
    total += edge * std::log(std::abs(std::sin(phi[i]))) +
             doubled * std::log(std::abs(std::sin(2.0 * phi[i]))) + 0.25 * params.beta * pair;
  }
  return -total;
}

DriftVector grad_potential(const ModelParams& params, const StateVector& state, double floor) {
  check_phi(params, state, floor, "grad_potential");
  const auto& phi = state.values;
  const std::size_t n = phi.size();
  const double edge = params.beta * (params.p - params.q) / 2.0;
  const double doubled = (params.beta * (params.q - static_cast<double>(n) + 1.0) - 1.0) / 2.0;
  DriftVector grad(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Each unordered pair {i, j} appears twice in V; both copies depend on phi^i.
    double pair = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      pair += 2.0 * (cot(phi[i] + phi[j]) + cot(phi[i] - phi[j]));
    }
    grad[i] = -(edge * cot(phi[i]) + doubled * 2.0 * cot(2.0 * phi[i]) + 0.25 * params.beta * pair);
  }
  return grad;
}

DriftVector drift_psi(const ModelParams& params, const StateVector& state, double floor) {
  require_coord(state, Coord::Psi, "drift_psi");
  require_size(params, state, "drift_psi");
  require_range(state.values, coord_upper(Coord::Psi), "drift_psi");
  std::vector<double> roots(state.size());
  for (std::size_t i = 0; i < state.size(); ++i) roots[i] = std::sqrt(state[i]);
  check_angles(roots, floor, "drift_psi");
  DriftVector out(state.size());
  kernels::psi_drift(params, state.values, out);
  return out;
}

DriftVector diffusion_psi(const StateVector& state) {
  require_coord(state, Coord::Psi, "diffusion_psi");
  require_range(state.values, coord_upper(Coord::Psi), "diffusion_psi");
  DriftVector out(state.size());
  for (std::size_t i = 0; i < state.size(); ++i) out[i] = 2.0 * std::sqrt(state[i]);
  return out;
}

}  // namespace bjacobi

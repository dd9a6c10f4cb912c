#pragma once

// Deterministic formulas of the beta-Jacobi particle system: drifts and
// diffusions in the lambda, phi and psi coordinates, the gradient potential,
// and the coordinate maps between them.
//
// The checked entry points validate their input and throw bjacobi::Error.
// The `kernels` namespace holds the unchecked, allocation-free versions used
// by the integrators; they assume a strictly interior, strictly ordered state.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace bjacobi {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kHalfPi = kPi / 2.0;

/// Pairwise gaps at or below this are refused by drift evaluation.
inline constexpr double kGapFloor = 1e-12;
/// Distance from the domain edge below which coordinates count as singular.
inline constexpr double kClipFloor = 1e-12;

struct ModelParams {
  int n = 1;
  double p = 0.0;
  double q = 0.0;
  double beta = 1.0;

  /// Throws ErrorKind::InvalidParams unless n >= 1, beta > 0, p >= 0, q >= 0.
  void validate() const;

  /// min(p, q) - n + 1
  double edge_margin() const noexcept;
  bool well_posed() const noexcept { return edge_margin() > 0.0; }
};

struct ValidationReport {
  bool well_posed = false;
  /// min(p,q) - n + 1 >= 1/beta - 1: no multiple collision at the edges.
  bool global_regime = false;
  double edge_margin = 0.0;
  /// k * beta * (p - n + k) for k = 1..n (index k-1).
  std::vector<double> zero_side;
  /// k * beta * (q - n + k) for k = 1..n (index k-1).
  std::vector<double> one_side;
};

ValidationReport validate_params(const ModelParams& params);

enum class Coord { Lambda, Phi, Psi, Reference };

std::string_view to_string(Coord coord) noexcept;

/// Upper edge of the coordinate's range; the lower edge is always 0.
/// Reference processes (CIR) are unbounded above.
double coord_upper(Coord coord) noexcept;

struct StateVector {
  Coord coord = Coord::Lambda;
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
};

using DriftVector = std::vector<double>;

// ---- lambda coordinates -------------------------------------------------

DriftVector drift_lambda(const ModelParams& params, const StateVector& state,
                         double gap_floor = kGapFloor);

/// Same field written with the p - n + 1 edge constant.
DriftVector drift_lambda_dual(const ModelParams& params, const StateVector& state,
                              double gap_floor = kGapFloor);

DriftVector diffusion_lambda(const StateVector& state);

// ---- coordinate maps ----------------------------------------------------

StateVector lambda_to_phi(const StateVector& state);
StateVector phi_to_lambda(const StateVector& state);
StateVector phi_to_psi(const StateVector& state);
StateVector psi_to_phi(const StateVector& state);

// ---- phi coordinates ----------------------------------------------------

DriftVector drift_phi(const ModelParams& params, const StateVector& state,
                      double floor = kClipFloor);

/// V(phi); drift_phi is its negative gradient.
double potential(const ModelParams& params, const StateVector& state,
                 double floor = kClipFloor);

/// Analytic dV/dphi^i.
DriftVector grad_potential(const ModelParams& params, const StateVector& state,
                           double floor = kClipFloor);

// ---- psi coordinates ----------------------------------------------------

DriftVector drift_psi(const ModelParams& params, const StateVector& state,
                      double floor = kClipFloor);

/// 2 sqrt(psi) per coordinate.
DriftVector diffusion_psi(const StateVector& state);

namespace kernels {

void lambda_drift(const ModelParams& params, std::span<const double> x, std::span<double> out);
void lambda_dual_drift(const ModelParams& params, std::span<const double> x,
                       std::span<double> out);
void lambda_diffusion(std::span<const double> x, std::span<double> out);
void phi_drift(const ModelParams& params, std::span<const double> phi, std::span<double> out);
void psi_drift(const ModelParams& params, std::span<const double> psi, std::span<double> out);

}  // namespace kernels

}  // namespace bjacobi

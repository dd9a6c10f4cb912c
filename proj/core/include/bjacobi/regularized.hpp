#pragma once

// The four auxiliary systems that agree with the particle system away from
// edge collisions: Hat (both edges softened), Tilde (bottom particle freed),
// Check (top particle freed) and Bar (both extreme particles freed).

#include <span>
#include <string_view>
#include <utility>

#include "bjacobi/model.hpp"

namespace bjacobi {

enum class Regularization { Hat, Tilde, Check, Bar };

std::string_view to_string(Regularization variant) noexcept;
Regularization regularization_from_string(std::string_view name);

/// Half-open index range [first, last) of coordinates the variant keeps ordered.
std::pair<std::size_t, std::size_t> ordered_block(Regularization variant, std::size_t n) noexcept;

DriftVector drift_regularized(Regularization variant, const ModelParams& params, double eps,
                              const StateVector& state, double gap_floor = kGapFloor);

/// Closed-inequality test for the set where the variant coincides with the
/// unregularized drift. Particles that do not exist (n = 1) make their clause vacuous.
bool coincidence_domain(Regularization variant, double eps, const StateVector& state);

namespace kernels {

void regularized_drift(Regularization variant, const ModelParams& params, double eps,
                       std::span<const double> x, std::span<double> out);

}  // namespace kernels

}  // namespace bjacobi

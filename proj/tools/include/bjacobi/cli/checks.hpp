#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace bjacobi::cli {

struct IdentityCheck {
  std::string name;
  double max_error = 0.0;
  double tolerance = 0.0;
  std::size_t cases = 0;
  bool pass = false;
};

/// Dual form, phi drift against minus the gradient, lambda -> phi -> psi
/// Ito transforms, regularized drifts on coincidence domains and the (p, q)
/// swap, on random states for n in {1, 2, 3, 5}.
std::vector<IdentityCheck> drift_identities(std::size_t samples, std::uint64_t seed);

/// grad_potential against central differences of potential with step h.
std::vector<IdentityCheck> gradient_identities(std::size_t samples, std::uint64_t seed,
                                               double h = 1e-6);

}  // namespace bjacobi::cli

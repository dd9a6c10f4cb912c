#pragma once

// Grid-based event detection on recorded lambda paths. Exact hits of the
// continuous process are replaced by entry into an explicit delta-window.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bjacobi/integrate.hpp"

namespace bjacobi {

struct EventReport {
  std::optional<double> first_hit_time;
  double min_value = 0.0;
  double argmin_time = 0.0;
  std::vector<std::string> annotations;
};

/// lambda^1 + ... + lambda^k
double bottom_sum(std::span<const double> x, std::size_t k) noexcept;
/// (1 - lambda^n) + ... + (1 - lambda^{n-k+1}), summed from the top particle down.
double top_deficit(std::span<const double> x, std::size_t k) noexcept;

/// First grid time with bottom_sum <= delta; min_value is the minimum of bottom_sum.
EventReport first_sum_below(const PathRecord& path, int k, double delta);

/// First grid time with top_deficit <= delta, i.e. lambda^{n-k+1} + ... + lambda^n >= k - delta.
/// min_value is the minimum of top_deficit.
EventReport first_sum_above(const PathRecord& path, int k, double delta);

/// lambda -> 1 - lambda with the coordinate order reversed.
PathRecord reflect(const PathRecord& path);

/// First grid time with (lambda^1 <= eps and lambda^2 - lambda^1 <= eps) or
/// (lambda^n >= 1 - eps and lambda^n - lambda^{n-1} <= eps). Needs n >= 2.
std::optional<double> zeta_eps(const PathRecord& path, double eps);

struct GapScan {
  double min_gap = 0.0;
  double time = 0.0;
  /// Lower index i of the closest adjacent pair (i, i+1), zero-based.
  std::size_t pair = 0;
};

GapScan min_gap_scan(const PathRecord& path);

/// Grid times at which at least two of the gaps
/// lambda^1 - 0, lambda^{i+1} - lambda^i, 1 - lambda^n are <= delta.
std::vector<double> double_collision_scan(const PathRecord& path, double delta);

}  // namespace bjacobi

#include "bjacobi/events.hpp"

#include <limits>

#include "bjacobi/errors.hpp"

namespace bjacobi {

namespace {

std::size_t require_lambda(const PathRecord& path, const char* op) {
  if (path.coord != Coord::Lambda) {
    throw Error(ErrorKind::InvalidParams, std::string(op) + " needs a lambda path");
  }
  if (path.states.empty()) throw Error(ErrorKind::InvalidParams, std::string(op) + ": empty path");
  return path.states.front().size();
}

std::size_t require_k(const PathRecord& path, int k, const char* op) {
  const std::size_t n = require_lambda(path, op);
  if (k < 1 || static_cast<std::size_t>(k) > n) {
    throw Error(ErrorKind::InvalidParams,
                std::string(op) + ": k = " + std::to_string(k) + " outside 1..n");
  }
  return static_cast<std::size_t>(k);
}

template <typename Observable>
EventReport scan_below(const PathRecord& path, double delta, Observable&& observable) {
  EventReport report;
  report.min_value = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < path.states.size(); ++t) {
    const double v = observable(path.states[t].values);
    if (v < report.min_value) {
      report.min_value = v;
      report.argmin_time = path.times[t];
    }
    if (!report.first_hit_time && v <= delta) report.first_hit_time = path.times[t];
  }
  return report;
}

}  // namespace

double bottom_sum(std::span<const double> x, std::size_t k) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < k; ++i) s += x[i];
  return s;
}

double top_deficit(std::span<const double> x, std::size_t k) noexcept {
  const std::size_t n = x.size();
  double s = 0.0;
  for (std::size_t i = 0; i < k; ++i) s += 1.0 - x[n - 1 - i];
  return s;
}

EventReport first_sum_below(const PathRecord& path, int k, double delta) {
  const std::size_t kk = require_k(path, k, "first_sum_below");
  return scan_below(path, delta, [kk](const std::vector<double>& x) { return bottom_sum(x, kk); });
}

EventReport first_sum_above(const PathRecord& path, int k, double delta) {
  const std::size_t kk = require_k(path, k, "first_sum_above");
  return scan_below(path, delta, [kk](const std::vector<double>& x) { return top_deficit(x, kk); });
}

PathRecord reflect(const PathRecord& path) {
  require_lambda(path, "reflect");
  PathRecord out = path;
  for (StateVector& s : out.states) {
    const std::size_t n = s.size();
    std::vector<double> mirrored(n);
    for (std::size_t i = 0; i < n; ++i) mirrored[i] = 1.0 - s.values[n - 1 - i];
    s.values = std::move(mirrored);
  }
  return out;
}

std::optional<double> zeta_eps(const PathRecord& path, double eps) {
  const std::size_t n = require_lambda(path, "zeta_eps");
  if (n < 2) throw Error(ErrorKind::InvalidParams, "zeta_eps needs n >= 2");
  for (std::size_t t = 0; t < path.states.size(); ++t) {
    const auto& x = path.states[t].values;
    const bool bottom = x[0] <= eps && x[1] - x[0] <= eps;
    const bool top = x[n - 1] >= 1.0 - eps && x[n - 1] - x[n - 2] <= eps;
    if (bottom || top) return path.times[t];
  }
  return std::nullopt;
}

GapScan min_gap_scan(const PathRecord& path) {
  const std::size_t n = require_lambda(path, "min_gap_scan");
  if (n < 2) throw Error(ErrorKind::InvalidParams, "min_gap_scan needs n >= 2");
  GapScan scan;
  scan.min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < path.states.size(); ++t) {
    const auto& x = path.states[t].values;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double gap = x[i + 1] - x[i];
      if (gap < scan.min_gap) {
        scan.min_gap = gap;
        scan.time = path.times[t];
        scan.pair = i;
      }
    }
  }
  return scan;
}

std::vector<double> double_collision_scan(const PathRecord& path, double delta) {
  const std::size_t n = require_lambda(path, "double_collision_scan");
  std::vector<double> times;
  for (std::size_t t = 0; t < path.states.size(); ++t) {
    const auto& x = path.states[t].values;
    int small = 0;
    if (x[0] <= delta) ++small;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (x[i + 1] - x[i] <= delta) ++small;
    }
    if (1.0 - x[n - 1] <= delta) ++small;
    if (small >= 2) times.push_back(path.times[t]);
  }
  return times;
}

}  // namespace bjacobi

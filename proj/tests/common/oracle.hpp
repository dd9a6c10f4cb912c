#pragma once

// Independent reference evaluations used as test oracles.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "bjacobi/model.hpp"

namespace oracle {

/// beta [p - (p+q) l_i + sum_{j != i} (l_i (1 - l_j) + l_j (1 - l_i)) / (l_i - l_j)]
inline std::vector<double> lambda_drift(double p, double q, double beta, const std::vector<double>& l) {
  std::vector<double> out(l.size());
  for (std::size_t i = 0; i < l.size(); ++i) {
    double s = p - (p + q) * l[i];
    for (std::size_t j = 0; j < l.size(); ++j)
      if (j != i) s += (l[i] * (1 - l[j]) + l[j] * (1 - l[i])) / (l[i] - l[j]);
    out[i] = beta * s;
  }
  return out;
}

/// Ito drift of arcsin(sqrt(l)) for dl = b dt + 2 sqrt(l(1-l)) dB.
inline double phi_ito(double l, double b) {
  const double v = l * (1 - l);
  const double f1 = 0.5 / std::sqrt(v);
  const double f2 = (2 * l - 1) / (4 * v * std::sqrt(v));
  return f1 * b + 2 * v * f2;
}

/// Sorted draws on (lo, hi) with every gap and both edge distances at least margin.
inline std::vector<double> sorted_state(std::mt19937_64& rng, int n, double lo, double hi,
                                        double margin) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> x(static_cast<std::size_t>(n));
  for (;;) {
    for (auto& v : x) v = u(rng);
    std::sort(x.begin(), x.end());
    bool ok = x.front() - lo >= margin && hi - x.back() >= margin;
    for (std::size_t i = 1; i < x.size(); ++i) ok = ok && x[i] - x[i - 1] >= margin;
    if (ok) return x;
  }
}

inline bjacobi::ModelParams random_params(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return {n, n - 1 + 0.5 + 5.5 * u(rng), n - 1 + 0.5 + 5.5 * u(rng), 0.25 + 3.75 * u(rng)};
}

/// max_i |a_i - b_i| / max(1, max_i |b_i|)
inline double rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double scale = 1.0, err = 0.0;
  for (double v : b) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < a.size(); ++i) err = std::max(err, std::abs(a[i] - b[i]));
  return err / scale;
}

}  // namespace oracle

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bjacobi/model.hpp"
#include "bjacobi/quadrature.hpp"

namespace bjacobi {

/// Unnormalized log of the invariant density on the ordered simplex.
/// Throws Singular on the boundary or at a collision, NotWellPosed when an
/// endpoint exponent is <= -1.
double log_density_unnorm(const ModelParams& params, const StateVector& state);

/// Symmetric function of the particle configuration, evaluated on sorted values.
using Observable = std::function<double(std::span<const double>)>;

/// "one", "sum", "sum_squares", "min" or "max".
Observable observable_from_name(std::string_view name);

struct OracleResult {
  double value = 0.0;
  /// |v(N) - v(N/2)| plus a rounding floor.
  double error = 0.0;
};

inline constexpr int kMaxOracleDimension = 3;
inline constexpr int kDefaultOracleGrid = 128;

/// Expectation under the normalized invariant density by tensor Gauss-Jacobi
/// quadrature over the cube (the symmetric density makes the simplex factor
/// n! cancel). Throws DimensionTooLarge for n > 3.
OracleResult moment_oracle(const ModelParams& params, const Observable& observable,
                           int grid_points = kDefaultOracleGrid);

/// Invariant density with its log-normalizer computed by quadrature (n <= 3).
class StationaryDensity {
 public:
  explicit StationaryDensity(ModelParams params, int grid_points = kDefaultOracleGrid);

  const ModelParams& params() const noexcept { return params_; }
  /// log of the integral of exp(log_density_unnorm) over the ordered simplex.
  double log_normalizer() const noexcept { return log_normalizer_; }
  double log_normalizer_error() const noexcept { return log_normalizer_error_; }
  double log_density(const StateVector& state) const;

 private:
  ModelParams params_;
  double log_normalizer_ = 0.0;
  double log_normalizer_error_ = 0.0;
};

/// Beta(a, b) distribution whose CDF is evaluated by Gauss-Jacobi quadrature.
class BetaDistribution {
 public:
  BetaDistribution(double a, double b, int nodes = 64);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double mean() const noexcept { return a_ / (a_ + b_); }
  double cdf(double x) const;
  /// Inverse CDF by bisection to full double resolution.
  double quantile(double u) const;

 private:
  double lower_tail(double x, double a, double b, const QuadratureRule& rule) const;

  double a_;
  double b_;
  double log_beta_;
  QuadratureRule rule_a_;
  QuadratureRule rule_b_;
};

/// One-particle marginal Beta(beta p / 2, beta q / 2) of the n = 1 invariant law.
BetaDistribution single_particle_law(const ModelParams& params);

/// Lag after which the autocorrelation of the particle sum falls to 0.1.
/// The sum has linear drift with rate beta (p + q), so this is ln 10 / (beta (p + q)).
double thinning_lag(const ModelParams& params);

struct StationaryOptions {
  std::size_t min_samples = 100;
  int grid_points = kDefaultOracleGrid;
};

struct MomentCheck {
  std::string name;
  double sample_mean = 0.0;
  /// Naive standard error inflated by sqrt((1 + r) / (1 - r)), r the lag-1 autocorrelation.
  double std_error = 0.0;
  double oracle = 0.0;
  double oracle_error = 0.0;
  double z = 0.0;
};

struct StationaryReport {
  std::size_t n_samples = 0;
  /// n = 1 only.
  std::optional<double> ks_distance;
  std::optional<double> ks_critical;
  /// Sum and sum of squares, n <= 3 only.
  std::vector<MomentCheck> moments;
  /// Lag-1 autocorrelation of the particle sum along the sample order.
  double lag1_autocorrelation = 0.0;
};

/// Throws InsufficientSamples when fewer than options.min_samples are given.
StationaryReport empirical_compare(std::span<const StateVector> samples, const ModelParams& params,
                                   const StationaryOptions& options = {});

}  // namespace bjacobi

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace bjacobi {

struct Estimate {
  std::string name;
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
  double ci_level = 0.95;

  double half_width() const;
  double lower() const { return value - half_width(); }
  double upper() const { return value + half_width(); }

  bool operator==(const Estimate&) const = default;
};

double normal_quantile(double p);
double student_t_quantile(double p, double dof);

struct SampleSummary {
  std::size_t n = 0;
  double mean = 0.0;
  /// Unbiased sample variance.
  double variance = 0.0;

  double std_error() const;
};

/// Two-pass mean and variance in input order.
SampleSummary summarize(std::span<const double> xs);

/// Fraction of successes with the binomial standard error.
Estimate binomial_estimate(std::string name, std::size_t successes, std::size_t trials,
                           double ci_level = 0.95);

/// Sample mean with its naive standard error.
Estimate mean_estimate(std::string name, std::span<const double> xs, double ci_level = 0.95);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  std::size_t n = 0;

  /// Student-t interval for the slope.
  double slope_lower(double ci_level = 0.95) const;
  double slope_upper(double ci_level = 0.95) const;
};

/// Ordinary least squares y = intercept + slope * x. Needs at least 3 points.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

/// sup |F_n - F| over the sample.
double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf);

/// Asymptotic two-sided critical value 1.358 / sqrt(n) at the 95% level.
double ks_critical_95(std::size_t n);

/// Lag-1 sample autocorrelation.
double lag1_autocorrelation(std::span<const double> xs);

}  // namespace bjacobi

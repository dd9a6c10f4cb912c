#include "bjacobi/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>

#include "bjacobi/errors.hpp"

namespace bjacobi {

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorKind::InvalidParams, "quantile level outside (0, 1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

double student_t_quantile(double p, double dof) {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorKind::InvalidParams, "quantile level outside (0, 1)");
  if (!(dof > 0.0)) throw Error(ErrorKind::InvalidParams, "degrees of freedom must be positive");
  return boost::math::quantile(boost::math::students_t_distribution<double>(dof), p);
}

double Estimate::half_width() const {
  return normal_quantile(0.5 + 0.5 * ci_level) * std_error;
}

double SampleSummary::std_error() const {
  return n > 0 ? std::sqrt(variance / static_cast<double>(n)) : 0.0;
}

SampleSummary summarize(std::span<const double> xs) {
  SampleSummary s;
  s.n = xs.size();
  if (s.n == 0) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(s.n);
  if (s.n < 2) return s;
  double ss = 0.0;
  for (double x : xs) ss += (x - s.mean) * (x - s.mean);
  s.variance = ss / static_cast<double>(s.n - 1);
  return s;
}

Estimate binomial_estimate(std::string name, std::size_t successes, std::size_t trials,
                           double ci_level) {
  if (trials == 0) throw Error(ErrorKind::InsufficientSamples, "binomial estimate over 0 trials");
  const double p = static_cast<double>(successes) / static_cast<double>(trials);
  return {std::move(name), p, std::sqrt(p * (1.0 - p) / static_cast<double>(trials)), trials,
          ci_level};
}

Estimate mean_estimate(std::string name, std::span<const double> xs, double ci_level) {
  const SampleSummary s = summarize(xs);
  return {std::move(name), s.mean, s.std_error(), s.n, ci_level};
}

double LinearFit::slope_lower(double ci_level) const {
  return slope - student_t_quantile(0.5 + 0.5 * ci_level, static_cast<double>(n - 2)) * slope_se;
}

double LinearFit::slope_upper(double ci_level) const {
  return slope + student_t_quantile(0.5 + 0.5 * ci_level, static_cast<double>(n - 2)) * slope_se;
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 3) {
    throw Error(ErrorKind::InsufficientSamples, "line fit needs at least 3 paired points");
  }
  const std::size_t n = x.size();
  const SampleSummary sx = summarize(x);
  const SampleSummary sy = summarize(y);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - sx.mean) * (x[i] - sx.mean);
    sxy += (x[i] - sx.mean) * (y[i] - sy.mean);
  }
  if (!(sxx > 0.0)) throw Error(ErrorKind::Singular, "line fit with constant abscissa");
  LinearFit fit;
  fit.n = n;
  fit.slope = sxy / sxx;
  fit.intercept = sy.mean - fit.slope * sx.mean;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - fit.intercept - fit.slope * x[i];
    rss += r * r;
  }
  fit.slope_se = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
  return fit;
}

double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw Error(ErrorKind::InsufficientSamples, "KS distance of no samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max(d, std::max(static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n));
  }
  return d;
}

double ks_critical_95(std::size_t n) { return 1.358 / std::sqrt(static_cast<double>(n)); }

double lag1_autocorrelation(std::span<const double> xs) {
  if (xs.size() < 3) return 0.0;
  const SampleSummary s = summarize(xs);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    den += (xs[i] - s.mean) * (xs[i] - s.mean);
    if (i + 1 < xs.size()) num += (xs[i] - s.mean) * (xs[i + 1] - s.mean);
  }
  return den > 0.0 ? num / den : 0.0;
}

}  // namespace bjacobi

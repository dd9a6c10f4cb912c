#include "bjacobi/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bjacobi/errors.hpp"
#include "bjacobi/stats.hpp"

namespace bjacobi {

namespace {

struct Exponents {
  double zero;
  double one;
};

Exponents endpoint_exponents(const ModelParams& params) {
  params.validate();
  const double n = params.n;
  const Exponents e{params.beta * (params.p - n + 1.0) / 2.0 - 1.0,
                    params.beta * (params.q - n + 1.0) / 2.0 - 1.0};
  if (!(e.zero > -1.0) || !(e.one > -1.0)) {
    throw Error(ErrorKind::NotWellPosed, "invariant density exponents must exceed -1");
  }
  return e;
}

void require_oracle_dimension(const ModelParams& params) {
  if (params.n > kMaxOracleDimension) {
    throw Error(ErrorKind::DimensionTooLarge,
                "quadrature oracle supports n <= 3, got n = " + std::to_string(params.n));
  }
}

struct CubeSums {
  double weight = 0.0;
  double weighted = 0.0;
};

CubeSums cube_sums(const ModelParams& params, const Exponents& e, const Observable& g, int m) {
  const QuadratureRule rule = gauss_jacobi_unit(m, e.zero, e.one);
  const auto n = static_cast<std::size_t>(params.n);
  std::vector<std::size_t> idx(n, 0);
  std::vector<double> x(n);
  std::vector<double> sorted(n);
  CubeSums s;
  for (;;) {
    double w = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = rule.nodes[idx[i]];
      w *= rule.weights[idx[i]];
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) w *= std::pow(std::abs(x[j] - x[i]), params.beta);
    }
    if (w != 0.0) {
      sorted = x;
      std::sort(sorted.begin(), sorted.end());
      s.weight += w;
      if (g) s.weighted += w * g(sorted);
    }
    std::size_t d = 0;
    while (d < n && ++idx[d] == rule.size()) idx[d++] = 0;
    if (d == n) break;
  }
  return s;
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

void require_grid(int grid_points) {
  if (grid_points < 2) throw Error(ErrorKind::InvalidParams, "grid_points must be at least 2");
}

}  // namespace

double log_density_unnorm(const ModelParams& params, const StateVector& state) {
  const Exponents e = endpoint_exponents(params);
  if (state.coord != Coord::Lambda) {
    throw Error(ErrorKind::InvalidParams, "invariant density takes lambda coordinates");
  }
  if (state.size() != static_cast<std::size_t>(params.n)) {
    throw Error(ErrorKind::InvalidParams, "state size does not match n");
  }
  const auto& x = state.values;
  double v = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0 && x[i] < 1.0)) {
      throw Error(ErrorKind::Singular, "invariant density evaluated on the boundary");
    }
    if (i > 0 && !(x[i] > x[i - 1])) {
      throw Error(ErrorKind::Singular, "invariant density evaluated at a collision");
    }
    v += e.zero * std::log(x[i]) + e.one * std::log1p(-x[i]);
  }
  double pairs = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (j != i) pairs += std::log(std::abs(x[j] - x[i]));
    }
  }
  return v + params.beta / 2.0 * pairs;
}

Observable observable_from_name(std::string_view name) {
  if (name == "one") return [](std::span<const double>) { return 1.0; };
  if (name == "sum") {
    return [](std::span<const double> x) {
      double s = 0.0;
      for (double v : x) s += v;
      return s;
    };
  }
  if (name == "sum_squares") {
    return [](std::span<const double> x) {
      double s = 0.0;
      for (double v : x) s += v * v;
      return s;
    };
  }
  if (name == "min") return [](std::span<const double> x) { return x.front(); };
  if (name == "max") return [](std::span<const double> x) { return x.back(); };
  throw Error(ErrorKind::Config, "unknown observable '" + std::string(name) + "'");
}

OracleResult moment_oracle(const ModelParams& params, const Observable& observable,
                           int grid_points) {
  const Exponents e = endpoint_exponents(params);
  require_oracle_dimension(params);
  require_grid(grid_points);
  if (!observable) throw Error(ErrorKind::InvalidParams, "empty observable");
  const CubeSums fine = cube_sums(params, e, observable, grid_points);
  const CubeSums coarse = cube_sums(params, e, observable, grid_points / 2);
  const double v = fine.weighted / fine.weight;
  const double vh = coarse.weighted / coarse.weight;
  return {v, std::abs(v - vh) + 1e-14 * std::abs(v)};
}

StationaryDensity::StationaryDensity(ModelParams params, int grid_points) : params_(params) {
  const Exponents e = endpoint_exponents(params_);
  require_oracle_dimension(params_);
  require_grid(grid_points);
  const double log_fact = std::log(factorial(params_.n));
  const double fine = std::log(cube_sums(params_, e, {}, grid_points).weight) - log_fact;
  const double coarse = std::log(cube_sums(params_, e, {}, grid_points / 2).weight) - log_fact;
  log_normalizer_ = fine;
  log_normalizer_error_ = std::abs(fine - coarse) + 1e-14 * std::abs(fine);
}

double StationaryDensity::log_density(const StateVector& state) const {
  return log_density_unnorm(params_, state) - log_normalizer_;
}

BetaDistribution::BetaDistribution(double a, double b, int nodes)
    : a_(a),
      b_(b),
      log_beta_(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b)),
      rule_a_(),
      rule_b_() {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw Error(ErrorKind::InvalidParams, "beta distribution needs positive finite shapes");
  }
  rule_a_ = gauss_jacobi_unit(nodes, a - 1.0, 0.0);
  rule_b_ = gauss_jacobi_unit(nodes, b - 1.0, 0.0);
}

double BetaDistribution::lower_tail(double x, double a, double b, const QuadratureRule& rule) const {
  // integral_0^x t^(a-1) (1-t)^(b-1) dt = x^a integral_0^1 u^(a-1) (1 - x u)^(b-1) du
  double s = 0.0;
  for (std::size_t k = 0; k < rule.size(); ++k) {
    s += rule.weights[k] * std::pow(1.0 - x * rule.nodes[k], b - 1.0);
  }
  return std::exp(a * std::log(x) - log_beta_) * s;
}

double BetaDistribution::cdf(double x) const {
  if (std::isnan(x)) throw Error(ErrorKind::InvalidParams, "beta cdf of NaN");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  if (x <= 0.5) return std::clamp(lower_tail(x, a_, b_, rule_a_), 0.0, 1.0);
  return std::clamp(1.0 - lower_tail(1.0 - x, b_, a_, rule_b_), 0.0, 1.0);
}

double BetaDistribution::quantile(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) throw Error(ErrorKind::OutOfRange, "beta quantile level outside [0, 1]");
  if (u == 0.0) return 0.0;
  if (u == 1.0) return 1.0;
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (cdf(mid) < u) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

BetaDistribution single_particle_law(const ModelParams& params) {
  params.validate();
  if (params.n != 1) throw Error(ErrorKind::InvalidParams, "single-particle law needs n = 1");
  return {params.beta * params.p / 2.0, params.beta * params.q / 2.0};
}

double thinning_lag(const ModelParams& params) {
  params.validate();
  const double rate = params.beta * (params.p + params.q);
  if (!(rate > 0.0)) throw Error(ErrorKind::InvalidParams, "thinning lag needs p + q > 0");
  return std::log(10.0) / rate;
}

namespace {

MomentCheck moment_check(std::string name, std::span<const double> series, const OracleResult& o) {
  MomentCheck m;
  m.name = std::move(name);
  const SampleSummary s = summarize(series);
  const double r = std::clamp(lag1_autocorrelation(series), 0.0, 0.99);
  m.sample_mean = s.mean;
  m.std_error = s.std_error() * std::sqrt((1.0 + r) / (1.0 - r));
  m.oracle = o.value;
  m.oracle_error = o.error;
  const double diff = m.sample_mean - m.oracle;
  const double scale = std::hypot(m.std_error, m.oracle_error);
  if (scale > 0.0) {
    m.z = diff / scale;
  } else {
    m.z = diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
  }
  return m;
}

}  // namespace

StationaryReport empirical_compare(std::span<const StateVector> samples, const ModelParams& params,
                                   const StationaryOptions& options) {
  params.validate();
  if (samples.size() < std::max<std::size_t>(options.min_samples, 2)) {
    throw Error(ErrorKind::InsufficientSamples,
                "stationary comparison needs at least " + std::to_string(options.min_samples) +
                    " samples, got " + std::to_string(samples.size()));
  }
  const auto n = static_cast<std::size_t>(params.n);
  std::vector<double> sums(samples.size());
  std::vector<double> squares(samples.size());
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const StateVector& x = samples[s];
    if (x.coord != Coord::Lambda || x.size() != n) {
      throw Error(ErrorKind::InvalidParams, "samples must be lambda states of size n");
    }
    double a = 0.0;
    double b = 0.0;
    for (double v : x.values) {
      a += v;
      b += v * v;
    }
    sums[s] = a;
    squares[s] = b;
  }

  StationaryReport report;
  report.n_samples = samples.size();
  report.lag1_autocorrelation = lag1_autocorrelation(sums);
  if (n == 1) {
    const BetaDistribution law = single_particle_law(params);
    report.ks_distance = ks_distance(sums, [&](double x) { return law.cdf(x); });
    report.ks_critical = ks_critical_95(samples.size());
  }
  if (params.n <= kMaxOracleDimension) {
    report.moments.push_back(moment_check(
        "sum", sums, moment_oracle(params, observable_from_name("sum"), options.grid_points)));
    report.moments.push_back(
        moment_check("sum_squares", squares,
                     moment_oracle(params, observable_from_name("sum_squares"), options.grid_points)));
  }
  return report;
}

}  // namespace bjacobi

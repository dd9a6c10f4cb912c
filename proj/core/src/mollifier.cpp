#include "bjacobi/mollifier.hpp"

#include <cmath>
#include <string>

#include "bjacobi/errors.hpp"
#include "bjacobi/quadrature.hpp"

namespace bjacobi {

namespace {

double e_fn(double x) noexcept { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

constexpr double kSeriesCutoff = 0.1;

}  // namespace

void MollifierParams::validate() const {
  if (!(s > 0.0) || !(eps_s > 0.0) || !(s + eps_s < 1.0)) {
    throw Error(ErrorKind::InvalidParams, "mollifier needs 0 < s < s + eps_s < 1");
  }
}

MapValue arcsin_squared(double x) {
  MapValue out;
  if (x < kSeriesCutoff) {
    // derivatives of arcsin^2(sqrt x) = sum c_k x^k, c_1 = 1, c_{k+1} = c_k 2k^2 / ((2k+1)(k+1)).
    double c = 1.0;
    double xk = 1.0;  // x^(k-1)
    double xk2 = 0.0;  // x^(k-2)
    for (int k = 1; k < 60; ++k) {
      const double term = c * xk;
      out.f += term * x;
      out.df += k * term;
      out.d2f += k * (k - 1) * c * xk2;
      if (k > 2 && term < 1e-18) break;
      c *= 2.0 * k * k / ((2.0 * k + 1.0) * (k + 1.0));
      xk2 = xk;
      xk *= x;
    }
    const double u = std::asin(std::sqrt(x));
    out.f = u * u;
    return out;
  }
  const double u = std::asin(std::sqrt(x));
  const double r = x * (1.0 - x);
  const double root = std::sqrt(r);
  out.f = u * u;
  out.df = u / root;
  out.d2f = 0.5 / r - u * (1.0 - 2.0 * x) / (2.0 * r * root);
  return out;
}

Mollifier::Mollifier(MollifierParams params) : params_(params) {
  params_.validate();
  const double lo = params_.s;
  const double hi = params_.s + params_.eps_s;
  mass_ = integrate_adaptive([this](double x) { return bump(x); }, lo, hi, 1e-13).value;
}

double Mollifier::bump(double x) const noexcept {
  return e_fn(x - params_.s) * e_fn(params_.s + params_.eps_s - x);
}

double Mollifier::blend(double x) const {
  if (x <= params_.s) return 1.0;
  if (x >= params_.s + params_.eps_s) return 0.0;
  const double partial =
      integrate_adaptive([this](double y) { return bump(y); }, params_.s, x, 1e-13, 40, 1e-16 * mass_)
          .value;
  return 1.0 - partial / mass_;
}

MapValue Mollifier::operator()(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw Error(ErrorKind::OutOfRange, "mollified map defined on [0, 1], got " + std::to_string(x));
  }
  const double lo = params_.s;
  const double hi = params_.s + params_.eps_s;
  if (x <= lo) return arcsin_squared(x);
  const MapValue h{x / 10.0 + 9.0 / 10.0, 0.1, 0.0};
  if (x >= hi) return h;

  const MapValue g = arcsin_squared(x);
  const double blend_value = blend(x);
  const double f_bump = bump(x);
  const double left = x - lo;
  const double right = hi - x;
  const double d_bump = f_bump * (1.0 / (left * left) - 1.0 / (right * right));
  const double d_blend = -f_bump / mass_;
  const double d2_blend = -d_bump / mass_;

  MapValue out;
  out.f = blend_value * g.f + (1.0 - blend_value) * h.f;
  out.df = d_blend * (g.f - h.f) + blend_value * g.df + (1.0 - blend_value) * h.df;
  out.d2f = d2_blend * (g.f - h.f) + 2.0 * d_blend * (g.df - h.df) + blend_value * g.d2f;
  return out;
}

MapValue mollified_map(const MollifierParams& params, double x) {
  return Mollifier(params)(x);
}

}  // namespace bjacobi

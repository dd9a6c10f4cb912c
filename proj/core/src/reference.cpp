#include "bjacobi/reference.hpp"

#include <cmath>
#include <string>

#include "bjacobi/errors.hpp"

namespace bjacobi {

void CIRParams::validate() const {
  if (!(a >= 0.0) || !std::isfinite(a)) {
    throw Error(ErrorKind::InvalidParams, "CIR drift constant a must be nonnegative");
  }
  if (!std::isfinite(b) || !std::isfinite(sigma)) {
    throw Error(ErrorKind::InvalidParams, "CIR b and sigma must be finite");
  }
}

void JacobiParams::validate() const {
  if (!(d >= 0.0) || !(d_prime >= 0.0) || !std::isfinite(d) || !std::isfinite(d_prime)) {
    throw Error(ErrorKind::InvalidParams, "Jacobi parameters d, d' must be nonnegative");
  }
}

std::string_view to_string(CIRHitClass c) noexcept {
  switch (c) {
    case CIRHitClass::NeverHitsZero: return "NeverHitsZero";
    case CIRHitClass::HitsZeroAS: return "HitsZeroAS";
    case CIRHitClass::HitsZeroWithProbIn01: return "HitsZeroWithProbIn01";
  }
  return "unknown";
}

std::string_view to_string(JacobiHitClass c) noexcept {
  switch (c) {
    case JacobiHitClass::StaysIn01: return "StaysIn01";
    case JacobiHitClass::HitsZero: return "HitsZero";
    case JacobiHitClass::HitsOne: return "HitsOne";
    case JacobiHitClass::HitsBoth: return "HitsBoth";
  }
  return "unknown";
}

std::string_view to_string(Side side) noexcept { return side == Side::Zero ? "zero" : "one"; }

CIRHitClass cir_hit_class(const CIRParams& params) {
  params.validate();
  if (params.a >= params.sigma * params.sigma / 2.0) return CIRHitClass::NeverHitsZero;
  if (params.b >= 0.0) return CIRHitClass::HitsZeroAS;
  return CIRHitClass::HitsZeroWithProbIn01;
}

double cir_mean(const CIRParams& params, double r0, double dt) {
  if (std::abs(params.b) < 1e-12) return r0 + params.a * dt;
  const double decay = std::exp(-params.b * dt);
  return r0 * decay + (params.a / params.b) * (1.0 - decay);
}

JacobiHitClass jacobi_hit_class(const JacobiParams& params) {
  params.validate();
  const bool zero = params.d < 2.0;
  const bool one = params.d_prime < 2.0;
  if (zero && one) return JacobiHitClass::HitsBoth;
  if (zero) return JacobiHitClass::HitsZero;
  if (one) return JacobiHitClass::HitsOne;
  return JacobiHitClass::StaysIn01;
}

ThresholdResult collision_threshold(int k, Side side, const ModelParams& params,
                                    ThresholdForm form) {
  params.validate();
  if (k < 1 || k > params.n) {
    throw Error(ErrorKind::InvalidParams,
                "collision_threshold: k = " + std::to_string(k) + " outside 1.." +
                    std::to_string(params.n));
  }
  const double edge = side == Side::Zero ? params.p : params.q;
  const double shift = form == ThresholdForm::Final ? k : 2.0;
  ThresholdResult out;
  out.value = k * params.beta * (edge - params.n + shift);
  out.no_collision = out.value >= 2.0;
  return out;
}

}  // namespace bjacobi

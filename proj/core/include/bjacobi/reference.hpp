#pragma once

// One-dimensional comparison processes and the collision-threshold calculator.

#include <string_view>

#include "bjacobi/model.hpp"

namespace bjacobi {

/// dX = (a - bX) dt + sigma sqrt(X) dW
struct CIRParams {
  double a = 0.0;
  double b = 0.0;
  double sigma = 2.0;

  void validate() const;
};

/// dJ = 2 sqrt(J(1-J)) dB + (d - (d + d')J) dt
struct JacobiParams {
  double d = 2.0;
  double d_prime = 2.0;

  void validate() const;
};

enum class CIRHitClass { NeverHitsZero, HitsZeroAS, HitsZeroWithProbIn01 };
enum class JacobiHitClass { StaysIn01, HitsZero, HitsOne, HitsBoth };
enum class Side { Zero, One };

std::string_view to_string(CIRHitClass c) noexcept;
std::string_view to_string(JacobiHitClass c) noexcept;
std::string_view to_string(Side side) noexcept;

CIRHitClass cir_hit_class(const CIRParams& params);

/// E[X_{t+dt} | X_t = r0].
double cir_mean(const CIRParams& params, double r0, double dt);

JacobiHitClass jacobi_hit_class(const JacobiParams& params);

enum class ThresholdForm {
  /// k beta (p - n + k)
  Final,
  /// k beta (p - n + 2), the earlier index shift
  Draft,
};

struct ThresholdResult {
  double value = 0.0;
  bool no_collision = false;
};

ThresholdResult collision_threshold(int k, Side side, const ModelParams& params,
                                    ThresholdForm form = ThresholdForm::Final);

}  // namespace bjacobi

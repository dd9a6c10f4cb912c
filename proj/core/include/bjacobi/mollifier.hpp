#pragma once

// C^2 glue between arcsin^2(sqrt x) near 0 and the affine map x/10 + 9/10 near 1.

namespace bjacobi {

struct MollifierParams {
  double s = 0.5;
  double eps_s = 1.0 / 16.0;

  /// Throws InvalidParams unless 0 < s < s + eps_s < 1.
  void validate() const;
};

struct MapValue {
  double f = 0.0;
  double df = 0.0;
  double d2f = 0.0;
};

class Mollifier {
 public:
  explicit Mollifier(MollifierParams params = {});

  const MollifierParams& params() const noexcept { return params_; }

  /// Total mass of F; computed once at construction.
  double normalizer() const noexcept { return mass_; }

  /// E(x - s) E(s + eps_s - x).
  double bump(double x) const noexcept;

  /// 1 on [0, s], 0 on [s + eps_s, 1].
  double blend(double x) const;

  /// f, f' and f''. Throws OutOfRange outside [0, 1].
  MapValue operator()(double x) const;

 private:
  MollifierParams params_;
  double mass_ = 0.0;
};

MapValue mollified_map(const MollifierParams& params, double x);

/// arcsin^2(sqrt x) with its first two derivatives; series near 0.
MapValue arcsin_squared(double x);

}  // namespace bjacobi

#pragma once

#include <functional>
#include <vector>

namespace bjacobi {

/// Nodes and weights of an interpolatory rule.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
};

/// m-point Gauss rule on [-1, 1] for the weight (1-t)^alpha (1+t)^beta_w.
/// Built by Golub-Welsch; alpha, beta_w > -1.
QuadratureRule gauss_jacobi(int m, double alpha, double beta_w);

/// m-point Gauss-Legendre on [-1, 1].
QuadratureRule gauss_legendre(int m);

/// m-point rule on [0, 1] for the weight x^a (1-x)^b, so that
/// sum w_k g(x_k) approximates the integral of x^a (1-x)^b g(x) over [0, 1].
QuadratureRule gauss_jacobi_unit(int m, double a, double b);

struct AdaptiveResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = false;
};

/// Adaptive bisection with a 15-point Gauss-Legendre panel against its two halves.
/// Stops once the panel error is below max(rel_tol * |estimate|, abs_tol).
AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double lo, double hi,
                                  double rel_tol = 1e-12, int max_depth = 40, double abs_tol = 0.0);

}  // namespace bjacobi

#include "bjacobi/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "bjacobi/errors.hpp"

namespace bjacobi {

QuadratureRule gauss_jacobi(int m, double alpha, double beta_w) {
  if (m < 1) throw Error(ErrorKind::InvalidParams, "quadrature needs at least one node");
  if (!(alpha > -1.0) || !(beta_w > -1.0)) {
    throw Error(ErrorKind::InvalidParams, "Jacobi weight exponents must exceed -1");
  }
  const double ab = alpha + beta_w;
  Eigen::VectorXd diag(m);
  Eigen::VectorXd off(std::max(m - 1, 0));
  diag(0) = (beta_w - alpha) / (ab + 2.0);
  for (int k = 1; k < m; ++k) {
    const double s = 2.0 * k + ab;
    diag(k) = (beta_w * beta_w - alpha * alpha) / (s * (s + 2.0));
    double b2;
    if (k == 1) {
      b2 = 4.0 * (1.0 + alpha) * (1.0 + beta_w) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      b2 = 4.0 * k * (k + alpha) * (k + beta_w) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
    }
    off(k - 1) = std::sqrt(b2);
  }

  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(m, m);
  for (int k = 0; k < m; ++k) jacobi(k, k) = diag(k);
  for (int k = 0; k + 1 < m; ++k) {
    jacobi(k, k + 1) = off(k);
    jacobi(k + 1, k) = off(k);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::Singular, "Golub-Welsch eigensolve failed for m = " + std::to_string(m));
  }

  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) +
                              std::lgamma(beta_w + 1.0) - std::lgamma(ab + 2.0));
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(m));
  rule.weights.resize(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    const double v0 = solver.eigenvectors()(0, k);
    rule.nodes[static_cast<std::size_t>(k)] = solver.eigenvalues()(k);
    rule.weights[static_cast<std::size_t>(k)] = mu0 * v0 * v0;
  }
  return rule;
}

QuadratureRule gauss_legendre(int m) { return gauss_jacobi(m, 0.0, 0.0); }

QuadratureRule gauss_jacobi_unit(int m, double a, double b) {
  // t = 2x - 1: (1-t)^b (1+t)^a = 2^(a+b) (1-x)^b x^a, dt = 2 dx.
  QuadratureRule rule = gauss_jacobi(m, b, a);
  const double scale = std::exp(-(a + b + 1.0) * std::log(2.0));
  for (std::size_t k = 0; k < rule.size(); ++k) {
    rule.nodes[k] = 0.5 * (rule.nodes[k] + 1.0);
    rule.weights[k] *= scale;
  }
  return rule;
}

namespace {

const QuadratureRule& panel_rule() {
  static const QuadratureRule rule = gauss_legendre(15);
  return rule;
}

double panel(const std::function<double(double)>& f, double lo, double hi) {
  const auto& rule = panel_rule();
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  double sum = 0.0;
  for (std::size_t k = 0; k < rule.size(); ++k) sum += rule.weights[k] * f(mid + half * rule.nodes[k]);
  return sum * half;
}

void refine(const std::function<double(double)>& f, double lo, double hi, double whole,
            double abs_tol, int depth, AdaptiveResult& out) {
  const double mid = 0.5 * (lo + hi);
  const double left = panel(f, lo, mid);
  const double right = panel(f, mid, hi);
  const double diff = std::abs(left + right - whole);
  if (diff <= abs_tol || depth <= 0) {
    out.value += left + right;
    out.error += diff;
    if (depth <= 0 && diff > abs_tol) out.converged = false;
    return;
  }
  refine(f, lo, mid, left, 0.5 * abs_tol, depth - 1, out);
  refine(f, mid, hi, right, 0.5 * abs_tol, depth - 1, out);
}

}  // namespace

AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double lo, double hi,
                                  double rel_tol, int max_depth, double abs_tol) {
  AdaptiveResult out;
  out.converged = true;
  if (hi == lo) return out;
  const double whole = panel(f, lo, hi);
  // A coarse magnitude estimate anchors the absolute tolerance.
  const double scale = std::max(std::abs(whole), std::numeric_limits<double>::min());
  refine(f, lo, hi, whole, std::max(rel_tol * scale, abs_tol), max_depth, out);
  return out;
}

}  // namespace bjacobi

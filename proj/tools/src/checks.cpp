#include "bjacobi/cli/checks.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

#include "bjacobi/model.hpp"
#include "bjacobi/regularized.hpp"
#include "bjacobi/rng.hpp"

namespace bjacobi::cli {

namespace {

constexpr std::array<int, 4> kDims{1, 2, 3, 5};

class Uniforms {
 public:
  Uniforms(std::uint64_t seed, std::uint64_t stream) : key_{seed, stream} {}

  double next() {
    if (used_ == 4) {
      block_ = philox4x64({counter_++, 0, 0, 0}, key_);
      used_ = 0;
    }
    return uniform_closed_open(block_[used_++]);
  }
  double next(double lo, double hi) { return lo + (hi - lo) * next(); }

 private:
  PhiloxKey key_;
  std::uint64_t counter_ = 0;
  PhiloxCounter block_{};
  int used_ = 4;
};

ModelParams random_params(Uniforms& u, int n) {
  ModelParams m;
  m.n = n;
  m.p = n - 1 + u.next(0.5, 6.0);
  m.q = n - 1 + u.next(0.5, 6.0);
  m.beta = u.next(0.25, 4.0);
  return m;
}

bool separated(const std::vector<double>& x, double lo, double hi, double margin) {
  if (x.front() - lo < margin || hi - x.back() < margin) return false;
  for (std::size_t i = 1; i < x.size(); ++i)
    if (x[i] - x[i - 1] < margin) return false;
  return true;
}

/// Sorted uniforms on (lo, hi) with every gap, edges included, at least margin.
std::vector<double> random_sorted(Uniforms& u, int n, double lo, double hi, double margin) {
  std::vector<double> x(static_cast<std::size_t>(n));
  do {
    for (auto& v : x) v = u.next(lo, hi);
    std::sort(x.begin(), x.end());
  } while (!separated(x, lo, hi, margin));
  return x;
}

struct Tracker {
  IdentityCheck check;

  Tracker(std::string name, double tolerance) {
    check.name = std::move(name);
    check.tolerance = tolerance;
  }
  /// Scaled by the larger of 1 and the biggest reference entry.
  void compare(const std::vector<double>& got, const std::vector<double>& want) {
    double scale = 1.0;
    for (double w : want) scale = std::max(scale, std::abs(w));
    double err = 0.0;
    for (std::size_t i = 0; i < want.size(); ++i) {
      const double e = std::abs(got[i] - want[i]) / scale;
      err = std::isnan(e) ? INFINITY : std::max(err, e);
    }
    check.max_error = std::max(check.max_error, err);
    ++check.cases;
  }
  IdentityCheck done() {
    check.pass = check.cases > 0 && check.max_error <= check.tolerance;
    return check;
  }
};

constexpr double kMargin = 1e-3;

}  // namespace

std::vector<IdentityCheck> drift_identities(std::size_t samples, std::uint64_t seed) {
  Tracker dual("drift_lambda_dual", 1e-12);
  Tracker gradient("drift_phi_gradient", 1e-12);
  Tracker phi_chain("drift_phi_chain_rule", 1e-10);
  Tracker psi_chain("drift_psi_chain_rule", 1e-10);
  std::array<Tracker, 4> regularized{Tracker("coincidence_hat", 1e-12),
                                     Tracker("coincidence_tilde", 1e-12),
                                     Tracker("coincidence_check", 1e-12),
                                     Tracker("coincidence_bar", 1e-12)};
  Tracker swap("pq_swap_antisymmetry", 0.0);

  Uniforms u(seed, 1);
  for (std::size_t s = 0; s < samples; ++s) {
    const int n = kDims[s % kDims.size()];
    const ModelParams params = random_params(u, n);
    const StateVector lam{Coord::Lambda, random_sorted(u, n, 0.0, 1.0, kMargin)};

    const auto b = drift_lambda(params, lam);
    dual.compare(drift_lambda_dual(params, lam), b);

    const StateVector phi = lambda_to_phi(lam);
    const auto dphi = drift_phi(params, phi);
    auto neg_grad = grad_potential(params, phi);
    for (auto& g : neg_grad) g = -g;
    gradient.compare(dphi, neg_grad);

    const auto sigma = diffusion_lambda(lam);
    std::vector<double> phi_want(b.size()), psi_want(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
      const double l = lam[i];
      const double v = l * (1.0 - l);
      const double f1 = 1.0 / (2.0 * std::sqrt(v));
      const double f2 = (2.0 * l - 1.0) / (4.0 * v * std::sqrt(v));
      const double s2 = sigma[i] * sigma[i];
      phi_want[i] = f1 * b[i] + 0.5 * f2 * s2;
      const double g1 = 2.0 * phi[i] * f1;
      const double g2 = 2.0 * f1 * f1 + 2.0 * phi[i] * f2;
      psi_want[i] = g1 * b[i] + 0.5 * g2 * s2;
    }
    phi_chain.compare(dphi, phi_want);
    psi_chain.compare(drift_psi(params, phi_to_psi(phi)), psi_want);

    for (std::size_t v = 0; v < regularized.size(); ++v) {
      const auto variant = static_cast<Regularization>(v);
      const double eps = u.next(0.05, 0.2);
      for (int attempt = 0; attempt < 1000; ++attempt) {
        std::vector<double> x(static_cast<std::size_t>(n));
        for (auto& xi : x) xi = u.next(kMargin, 1.0 - kMargin);
        if (u.next() < 0.5) x.front() = u.next(kMargin, eps);
        if (u.next() < 0.5) x.back() = 1.0 - u.next(kMargin, eps);
        std::sort(x.begin(), x.end());
        const StateVector st{Coord::Lambda, x};
        if (!separated(x, 0.0, 1.0, kMargin) || !coincidence_domain(variant, eps, st)) continue;
        regularized[v].compare(drift_regularized(variant, params, eps, st),
                               drift_lambda_dual(params, st));
        break;
      }
    }

    ModelParams dyadic;
    dyadic.n = n;
    dyadic.p = std::floor(u.next(4.0 * n, 32.0 + 4.0 * n)) / 4.0;
    dyadic.q = std::floor(u.next(4.0 * n, 32.0 + 4.0 * n)) / 4.0;
    dyadic.beta = std::floor(u.next(2.0, 32.0)) / 8.0;
    std::vector<double> x(static_cast<std::size_t>(n));
    do {
      for (auto& xi : x) xi = std::floor(u.next(1.0, 1048575.0)) / 1048576.0;
      std::sort(x.begin(), x.end());
    } while (!separated(x, 0.0, 1.0, kMargin));
    std::vector<double> mirrored(x.rbegin(), x.rend());
    for (auto& m : mirrored) m = 1.0 - m;
    ModelParams swapped = dyadic;
    std::swap(swapped.p, swapped.q);
    const auto a = drift_lambda(dyadic, {Coord::Lambda, x});
    const auto c = drift_lambda(swapped, {Coord::Lambda, mirrored});
    std::vector<double> want(a.rbegin(), a.rend());
    for (auto& w : want) w = -w;
    swap.compare(c, want);
  }

  std::vector<IdentityCheck> out{dual.done(), gradient.done(), phi_chain.done(), psi_chain.done()};
  for (auto& r : regularized) out.push_back(r.done());
  out.push_back(swap.done());
  return out;
}

std::vector<IdentityCheck> gradient_identities(std::size_t samples, std::uint64_t seed, double h) {
  Tracker fd("grad_potential_finite_difference", 1e-6);
  Uniforms u(seed, 2);
  for (std::size_t s = 0; s < samples; ++s) {
    const int n = kDims[s % kDims.size()];
    const ModelParams params = random_params(u, n);
    const StateVector phi{Coord::Phi, random_sorted(u, n, 0.0, kHalfPi, 0.05)};
    const auto grad = grad_potential(params, phi);
    std::vector<double> diff(grad.size());
    for (std::size_t i = 0; i < grad.size(); ++i) {
      StateVector up = phi, down = phi;
      up.values[i] += h;
      down.values[i] -= h;
      diff[i] = (potential(params, up) - potential(params, down)) / (2.0 * h);
    }
    fd.compare(grad, diff);
  }
  return {fd.done()};
}

}  // namespace bjacobi::cli

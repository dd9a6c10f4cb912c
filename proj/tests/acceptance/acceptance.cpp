// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "bjacobi/cli/cli.hpp"
#include "bjacobi/experiments.hpp"
#include "bjacobi/mollifier.hpp"
#include "bjacobi/parallel.hpp"
#include "bjacobi/regularized.hpp"
#include "oracle.hpp"

using namespace bjacobi;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

StateVector lam(std::vector<double> v) { return {Coord::Lambda, std::move(v)}; }

ExperimentConfig experiment(ModelParams m, double T, double dt, std::size_t paths, std::uint64_t seed) {
  ExperimentConfig c;
  c.params = m;
  c.integrator.horizon_T = T;
  c.integrator.dt = dt;
  c.n_paths = paths;
  c.seed = seed;
  return c;
}

// ---- 1 -------------------------------------------------------------------

void formula_identities(Outcome& out) {
  constexpr int kDims[] = {1, 2, 3, 5};
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double dual = 0, grad = 0, fd = 0, phi_chain = 0, psi_chain = 0, coincide = 0;
  std::size_t coincide_cases = 0, swap_failures = 0;
  const double h = 1e-6;
  for (int s = 0; s < 1000; ++s) {
    const int n = kDims[s % 4];
    const auto m = oracle::random_params(rng, n);
    const auto x = oracle::sorted_state(rng, n, 0.0, 1.0, 1e-3);
    const auto b = oracle::lambda_drift(m.p, m.q, m.beta, x);
    dual = std::max(dual, oracle::rel_diff(drift_lambda_dual(m, lam(x)), drift_lambda(m, lam(x))));

    const auto f = lambda_to_phi(lam(x));
    const auto dphi = drift_phi(m, f);
    auto g = grad_potential(m, f);
    for (auto& v : g) v = -v;
    grad = std::max(grad, oracle::rel_diff(dphi, g));

    std::vector<double> want_phi(n), want_psi(n);
    for (int i = 0; i < n; ++i) {
      want_phi[i] = oracle::phi_ito(x[i], b[i]);
      want_psi[i] = 2 * f[i] * want_phi[i] + 1.0;
    }
    phi_chain = std::max(phi_chain, oracle::rel_diff(dphi, want_phi));
    psi_chain = std::max(psi_chain, oracle::rel_diff(drift_psi(m, phi_to_psi(f)), want_psi));

    const StateVector fw{Coord::Phi, oracle::sorted_state(rng, n, 0.0, kHalfPi, 0.05)};
    const auto gw = grad_potential(m, fw);
    std::vector<double> diff(n);
    for (int i = 0; i < n; ++i) {
      auto up = fw, down = fw;
      up.values[i] += h;
      down.values[i] -= h;
      diff[i] = (potential(m, up) - potential(m, down)) / (2 * h);
    }
    fd = std::max(fd, oracle::rel_diff(gw, diff));

    const double eps = 0.05 + 0.15 * u(rng);
    auto y = x;
    if (u(rng) < 0.5) y.front() = 1e-3 + (eps - 1e-3) * u(rng);
    if (u(rng) < 0.5) y.back() = 1 - 1e-3 - (eps - 1e-3) * u(rng);
    std::sort(y.begin(), y.end());
    bool separated = true;
    for (int i = 1; i < n; ++i) separated = separated && y[i] - y[i - 1] > 1e-3;
    for (auto v : {Regularization::Hat, Regularization::Tilde, Regularization::Check,
                   Regularization::Bar}) {
      if (!separated || !coincidence_domain(v, eps, lam(y))) continue;
      ++coincide_cases;
      coincide = std::max(coincide, oracle::rel_diff(drift_regularized(v, m, eps, lam(y)),
                                                     drift_lambda_dual(m, lam(y))));
    }

    ModelParams d{n, n + std::floor(33 * u(rng)) / 4, n + std::floor(33 * u(rng)) / 4,
                  (2 + std::floor(31 * u(rng))) / 8};
    std::vector<double> z;
    do {
      z.clear();
      for (int i = 0; i < n; ++i) z.push_back(std::floor(1 + u(rng) * 1048574) / 1048576);
      std::sort(z.begin(), z.end());
    } while (std::adjacent_find(z.begin(), z.end()) != z.end());
    std::vector<double> mu(z.rbegin(), z.rend());
    for (auto& v : mu) v = 1 - v;
    ModelParams sw = d;
    std::swap(sw.p, sw.q);
    const auto a = drift_lambda(d, lam(z)), c = drift_lambda(sw, lam(mu));
    for (int i = 0; i < n; ++i) swap_failures += a[i] != -c[n - 1 - i];
  }
  out.require(dual <= 1e-12, "dual form");
  out.require(grad <= 1e-12, "gradient");
  out.require(fd <= 1e-6, "finite differences");
  out.require(phi_chain <= 1e-10, "phi chain rule");
  out.require(psi_chain <= 1e-10, "psi chain rule");
  out.require(coincide <= 1e-12 && coincide_cases > 0, "coincidence domains");
  out.require(swap_failures == 0, "swap antisymmetry");
  out.detail << "dual=" << fmt(dual) << " grad=" << fmt(grad) << " fd=" << fmt(fd)
             << " phi=" << fmt(phi_chain) << " psi=" << fmt(psi_chain) << " coincide=" << fmt(coincide)
             << " (" << coincide_cases << " cases) swap_mismatches=" << swap_failures;
}

// ---- 2 -------------------------------------------------------------------

void mollifier_suite(Outcome& out) {
  const Mollifier f;
  const double s = f.params().s, e = f.params().s + f.params().eps_s;
  bool increasing = true, exact_low = true, exact_high = true;
  double prev = -1.0;
  for (int i = 0; i <= 10000; ++i) {
    const double x = i * 1e-4;
    const double v = f(x).f;
    increasing = increasing && v > prev;
    prev = v;
    if (x <= 0.5) {
      const double a = std::asin(std::sqrt(x));
      exact_low = exact_low && v == a * a;
    }
    if (x >= 0.5 + 1.0 / 16) exact_high = exact_high && v == x / 10 + 9.0 / 10;
  }
  double jump = 0.0;
  for (double glue : {s, e}) jump = std::max(jump, std::abs(f(glue - 1e-8).d2f - f(glue + 1e-8).d2f));
  out.require(increasing, "strictly increasing");
  out.require(exact_low, "arcsine branch");
  out.require(exact_high, "affine branch");
  out.require(jump <= 1e-6, "second derivative continuity");
  out.detail << "max f'' jump at glue points=" << fmt(jump);
}

// ---- 3 -------------------------------------------------------------------

void cir_weak_error(Outcome& out) {
  const CIRParams cir{2.0, 1.0, 2.0};
  IntegratorConfig cfg;
  cfg.dt = 1e-3;
  cfg.horizon_T = 1.0;
  cfg.record_stride = static_cast<int>(cfg.steps());
  const std::size_t paths = 100000;
  std::vector<double> finals(paths);
  parallel_for(paths, 0, [&](std::size_t i) {
    finals[i] = simulate_cir(cir, cfg, 1.0, NoiseSource(3, i)).states.back()[0];
  });
  const auto s = summarize(finals);
  const double target = 2.0 - std::exp(-1.0);
  const double tol = std::max(3 * s.std_error(), 0.02);
  out.require(std::abs(s.mean - target) <= tol, "mean");
  out.detail << "mean=" << fmt(s.mean) << " target=" << fmt(target) << " se=" << fmt(s.std_error())
             << " tol=" << fmt(tol);
}

// ---- 4 -------------------------------------------------------------------

// Mean time for the one-particle diffusion started at x0 to reach delta, from its
// scale density y^(-bp/2) (1-y)^(-bq/2) and speed density z^(bp/2-1) (1-z)^(bq/2-1) / 2.
double mean_time_to_reach(const ModelParams& m, double delta, double x0) {
  using boost::math::quadrature::gauss_kronrod;
  const double a = m.beta * m.p / 2, b = m.beta * m.q / 2;
  const auto speed = [&](double z) { return std::pow(z, a - 1) * std::pow(1 - z, b - 1) / 2; };
  const auto outer = [&](double y) {
    const double tail = gauss_kronrod<double, 61>::integrate(speed, y, 1.0, 15, 1e-12);
    return std::pow(y, -a) * std::pow(1 - y, -b) * tail;
  };
  return gauss_kronrod<double, 61>::integrate(outer, delta, x0, 15, 1e-10);
}

void hitting_dichotomy(Outcome& out) {
  for (double p : {1.0, 4.0}) {
    auto c = experiment({1, p, 3.0, 1.0}, 50.0, 1e-4, 1000, 4);
    c.delta = 1e-3;
    c.x0 = lam({0.5});
    const auto r = hitting_probability(c);
    const bool below = p * 1.0 < 2.0;
    out.require(below ? r.estimate.value >= 0.95 : r.estimate.value <= 0.05,
                "p=" + fmt(p));
    out.require(r.run.errored == 0, "errored paths");
    out.detail << "p=" << fmt(p) << ": hit=" << fmt(r.estimate.value);
    if (!below) {
      const double mean = mean_time_to_reach(c.params, 1e-3, 0.5);
      out.detail << " (diffusion reaches delta after " << fmt(mean)
                 << " on average, exponential estimate " << fmt(1 - std::exp(-50.0 / mean)) << ")";
    }
    out.detail << " ";
  }
}

// ---- 5 -------------------------------------------------------------------

void multiple_collision(Outcome& out) {
  auto c = experiment({2, 3.0, 3.0, 1.0}, 20.0, 1e-4, 1000, 5);
  c.k = 2;
  c.delta = 1e-4;
  const auto r = no_collision_check(c);
  out.require(r.threshold.no_collision && r.flagged == 0, "k=2 flagged paths");
  out.require(r.run.errored == 0, "errored paths");
  out.detail << "k=2 threshold=" << fmt(r.threshold.value) << " flagged=" << r.flagged
             << " min=" << fmt(r.min) << "; ";

  auto neg = experiment({2, 3.0, 3.0, 0.25}, 20.0, 1e-4, 1000, 5);
  neg.k = 1;
  neg.delta = 1e-4;
  neg.stop_at_event = true;
  const auto n = no_collision_check(neg);
  out.require(n.flagged_fraction.value >= 0.5, "negative control");
  out.detail << "control beta=0.25 k=1 flagged=" << fmt(n.flagged_fraction.value);
}

// ---- 6 -------------------------------------------------------------------

void comparison(Outcome& out) {
  const auto c = experiment({1, 3.0, 3.0, 1.0}, 5.0, 1e-3, 1000, 6);
  const auto ok = comparison_experiment(c, cir_pair({3.0, 0.0, 2.0}, {2.0, 0.0, 2.0}, 1.0), 1e-12);
  const auto rev = comparison_experiment(c, cir_pair({2.0, 0.0, 2.0}, {3.0, 0.0, 2.0}, 1.0), 1e-12);
  out.require(ok.total_violations == 0, "ordered pair");
  out.require(rev.violating_fraction.value >= 0.99, "reversed pair");
  out.detail << "violations=" << ok.total_violations
             << " reversed violating fraction=" << fmt(rev.violating_fraction.value);
}

// ---- 7 -------------------------------------------------------------------

void contraction(Outcome& out) {
  const auto c = experiment({1, 3.0, 3.0, 1.0}, 3.0, 1e-3, 1000, 7);
  const auto r = contraction_experiment(c, lam({0.3}), lam({0.7}), {0.5, 1.0, 2.0, 3.0});
  out.require(r.monotone, "monotone");
  out.require(r.fit.slope_upper() < 0.0, "slope interval");
  out.detail << "fitted rate=" << fmt(r.fitted_rate) << " CI=[" << fmt(-r.fit.slope_upper()) << ", "
             << fmt(-r.fit.slope_lower()) << "] tested=" << fmt(r.rate_tested)
             << " stated=" << fmt(r.rate_stated) << " below_bound=" << r.below_bound;
}

// ---- 8 -------------------------------------------------------------------

void stationarity(Outcome& out) {
  const ModelParams one{1, 3.0, 3.0, 1.0};
  const auto r = stationary_experiment(experiment(one, 200.0, 1e-4, 22, 8), 20.0);
  const auto& rep = r.report;
  const bool ks = rep.ks_distance && *rep.ks_distance < 1.5 * *rep.ks_critical;
  const auto& mean = rep.moments.front();
  out.require(ks, "KS distance");
  out.require(std::abs(mean.sample_mean - 0.5) <= 3 * mean.std_error, "mean");
  out.detail << "n=1 samples=" << rep.n_samples << " KS=" << fmt(rep.ks_distance.value_or(NAN))
             << " limit=" << fmt(1.5 * rep.ks_critical.value_or(NAN)) << " mean=" << fmt(mean.sample_mean)
             << " se=" << fmt(mean.std_error) << "; ";

  const ModelParams two{2, 3.0, 3.0, 1.0};
  const auto r2 = stationary_experiment(experiment(two, 200.0, 1e-4, 22, 8), 20.0);
  for (const auto& m : r2.report.moments) {
    out.require(std::abs(m.z) < 4.0, "n=2 " + m.name);
    out.detail << "n=2 " << m.name << " z=" << fmt(m.z) << " ";
  }
}

// ---- 9 -------------------------------------------------------------------

std::map<std::string, std::string> read_tree(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::ifstream f(e.path(), std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    files[fs::relative(e.path(), dir).string()] = ss.str();
  }
  return files;
}

void reproducibility(Outcome& out) {
  const fs::path root = fs::temp_directory_path() / "bjacobi_acceptance_repro";
  fs::remove_all(root);
  const std::vector<std::vector<std::string>> runs{
      {"simulate", "--n", "3", "--p", "4", "--q", "5", "--beta", "0.5", "--T", "1", "--paths", "6"},
      {"hitting", "--n", "1", "--p", "1", "--q", "3", "--T", "5", "--paths", "64"},
      {"nocollision", "--n", "2", "--k", "1", "--beta", "0.25", "--T", "5", "--paths", "64"},
      {"contraction", "--n", "2", "--T", "2", "--paths", "64"},
      {"compare", "--pair", "cir", "--paths", "64"},
      {"compare", "--pair", "psi", "--n", "2", "--T", "2", "--paths", "16"},
      {"stationary", "--n", "1", "--T", "60", "--paths", "8"},
      {"consistency", "--n", "2", "--T", "0.5", "--paths", "256"},
      {"driftcheck", "--samples", "200"},
  };
  std::size_t compared = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    std::map<std::string, std::string> trees[3];
    const char* workers[3] = {"1", "4", "1"};
    for (int w = 0; w < 3; ++w) {
      auto args = runs[i];
      const fs::path dir = root / (std::to_string(i) + "_" + std::to_string(w));
      args.insert(args.end(), {"--seed", "99", "--threads", workers[w], "--out", dir.string()});
      std::ostringstream log, err;
      const int code = cli::run(args, log, err);
      out.require(code == cli::kExitOk || code == cli::kExitFailed, runs[i][0] + " ran");
      trees[w] = read_tree(dir);
    }
    const bool same = trees[0] == trees[1] && trees[0] == trees[2] && !trees[0].empty();
    out.require(same, runs[i][0] + " identical outputs");
    compared += trees[0].size();
  }
  out.detail << runs.size() << " commands, " << compared << " files compared across 1 and 4 workers";
  fs::remove_all(root);
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"formula identities", formula_identities},
      {"mollifier", mollifier_suite},
      {"CIR weak error", cir_weak_error},
      {"boundary hitting dichotomy", hitting_dichotomy},
      {"multiple-collision threshold", multiple_collision},
      {"comparison", comparison},
      {"contraction", contraction},
      {"stationarity", stationarity},
      {"reproducibility", reproducibility},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(out);
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail << "exception: " << e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failures += !out.pass;
    std::printf("C%zu %s %s (%.1fs): %s\n", i + 1, out.pass ? "PASS" : "FAIL",
                criteria[i].first.c_str(), secs, out.detail.str().c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}

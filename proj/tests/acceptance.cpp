// Copyright 2026 The specrad Authors.
// SPDX-License-Identifier: Apache-2.0

// End-to-end acceptance checks. Prints one PASS, FAIL or SKIP line per
// criterion and exits non-zero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "specrad/eigen_engine.hpp"
#include "specrad/impact.hpp"
#include "specrad/perturbation.hpp"
#include "specrad/sis.hpp"
#include "specrad/toeplitz.hpp"
#include "support.hpp"

using namespace specrad;
using namespace specrad::testing;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// Collects the failures of one criterion.
class Criterion {
 public:
  explicit Criterion(int id) : id_(id) {}

  void expect(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }

  void near(double got, double want, double tol, const std::string& what) {
    if (!(std::abs(got - want) <= tol)) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "%s = %.9g, want %.9g +- %.1e", what.c_str(), got, want,
                    tol);
      failures_.push_back(buf);
    }
  }

  void rel(double got, double want, double tol, const std::string& what) {
    if (std::isinf(got) && std::isinf(want)) return;
    near(got / want, 1.0, tol, what + " (relative)");
  }

  /// Prints the verdict line; returns true on PASS.
  bool report(const std::string& summary) const {
    if (failures_.empty()) {
      std::printf("PASS criterion %d: %s\n", id_, summary.c_str());
      return true;
    }
    std::printf("FAIL criterion %d: %s", id_, summary.c_str());
    const std::size_t shown = std::min<std::size_t>(failures_.size(), 3);
    for (std::size_t i = 0; i < shown; ++i) std::printf(" | %s", failures_[i].c_str());
    if (failures_.size() > shown) std::printf(" | (%zu more)", failures_.size() - shown);
    std::printf("\n");
    return false;
  }

 private:
  int id_;
  std::vector<std::string> failures_;
};

double round6(double x) { return std::round(x * 1e6) / 1e6; }

bool symmetric_chain_example() {
  Criterion c(1);
  const auto t0 = Clock::now();
  const auto a = path_toeplitz(25, 1.0, 1.0);
  const auto p = perron_pair(a);
  const auto imp = edge_impacts_first_order(a, p, 0.1, true);
  const auto mid = exact_impact(a, p.rho, {12, 13, 1.0}, 0.1, true);
  const auto end = exact_impact(a, p.rho, {0, 1, 1.0}, 0.1, true);
  double fo_mid = 0.0, fo_end = 0.0;
  for (const auto& e : imp) {
    if (e.edge.h == 12 && e.edge.k == 13) fo_mid = e.first_order_impact;
    if (e.edge.h == 0 && e.edge.k == 1) fo_end = e.first_order_impact;
  }
  const double elapsed = seconds_since(t0);

  c.near(round6(p.rho), 1.985418, 5e-7, "rho");
  c.near(round6(mid.rho_perturbed), 1.973080, 5e-7, "rho~(13,14)");
  c.near(round6(mid.impact), 0.006241, 5e-7, "exact impact (13,14)");
  c.near(round6(fo_mid), 0.007692, 5e-7, "first-order (13,14)");
  c.near(round6(end.rho_perturbed), 1.985055, 5e-7, "rho~(1,2)");
  c.near(round6(end.impact), 0.000182, 5e-7, "exact impact (1,2)");
  c.near(round6(fo_end), 0.000224, 5e-7, "first-order (1,2)");
  c.expect(elapsed < 1.0, "runtime " + std::to_string(elapsed) + " s");
  return c.report("symmetric chain n=25 impacts");
}

bool nonsymmetric_chain_example() {
  Criterion c(2);
  const auto t0 = Clock::now();
  const auto a = path_toeplitz(25, 1.5, 0.5);
  const auto p = perron_pair(a);
  const auto imp = edge_impacts_first_order(a, p, 0.1, false);
  const auto top = imp.front();
  const auto ex = exact_impact(a, p.rho, top.edge, 0.1, false);
  const double elapsed = seconds_since(t0);

  c.near(round6(p.rho), 1.719422, 5e-7, "rho");
  c.expect(top.edge.h == 11 && top.edge.k == 12,
           "top edge (" + std::to_string(top.edge.h + 1) + "," + std::to_string(top.edge.k + 1) +
               ")");
  c.near(round6(ex.rho_perturbed), 1.713348, 5e-7, "rho~");
  c.near(round6(ex.impact), 0.003532, 5e-7, "exact impact");
  c.near(round6(top.first_order_impact), 0.003846, 5e-7, "first-order");
  c.expect(elapsed < 1.0, "runtime " + std::to_string(elapsed) + " s");
  return c.report("nonsymmetric chain n=25 top edge and impacts");
}

bool nonnormal_toeplitz_example() {
  Criterion c(3);
  const TridiagToeplitz t{10, 0.1, 1.0};
  const double closed = 2.0 * std::sqrt(0.1) * std::cos(std::numbers::pi / 11.0);
  SolverOptions iterative;
  iterative.allow_tridiagonal = false;
  c.near(toeplitz_perron(t).rho, closed, 1e-8, "closed form");
  c.near(perron_pair(t.to_sparse(), iterative).rho, closed, 1e-8, "iterative solver");
  c.near(perron_pair(t.to_sparse()).rho, closed, 1e-8, "tridiagonal solver");
  c.near(perron_pair(make_circulant(t)).rho, 1.1, 1e-8, "circulant");

  const auto p = toeplitz_perron(t);
  const auto e = wilkinson_matrix(p.u, p.v);
  Index bi = 0, bj = 0;
  for (Index i = 0; i < 10; ++i)
    for (Index j = 0; j < 10; ++j)
      if (e.entry(i, j) > e.entry(bi, bj)) bi = i, bj = j;
  c.expect(bi == 9 && bj == 0, "Wilkinson argmax at (" + std::to_string(bi + 1) + "," +
                                   std::to_string(bj + 1) + ")");
  return c.report("Toeplitz n=10 closed form, circulant, Wilkinson corner");
}

bool closed_form_vs_solver() {
  Criterion c(4);
  std::mt19937_64 rng(20260401);
  std::uniform_real_distribution<double> coef(0.0, 2.0);
  std::uniform_int_distribution<Index> size(2, 500);
  for (int trial = 0; trial < 100; ++trial) {
    double sub = 0.0, super = 0.0;
    while (sub == 0.0) sub = 2.0 - coef(rng);  // (0, 2]
    while (super == 0.0) super = 2.0 - coef(rng);
    const TridiagToeplitz t{size(rng), sub, super};
    const auto closed = toeplitz_perron(t);
    const auto solved = perron_pair(t.to_sparse());
    const std::string tag = "trial " + std::to_string(trial);
    c.rel(solved.rho, closed.rho, 1e-8, tag + " rho");
    c.expect(rel_vec_error(solved.u, closed.u) <= 1e-8, tag + " u");
    c.expect(rel_vec_error(solved.v, closed.v) <= 1e-8, tag + " v");
    c.rel(solved.kappa, closed.kappa, 1e-8, tag + " kappa");
  }
  return c.report("100 random Toeplitz matrices, closed form vs solver");
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += std::log(x[i]), my += std::log(y[i]);
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxy / sxx;
}

bool first_order_law() {
  Criterion c(5);
  constexpr PerturbationKind kinds[] = {
      PerturbationKind::wilkinson, PerturbationKind::sparsity_structured,
      PerturbationKind::toeplitz_structured, PerturbationKind::ones,
      PerturbationKind::ones_sparsity_structured};
  SolverOptions opts;
  opts.tol = 1e-13;
  std::mt19937_64 rng(20260402);
  std::uniform_int_distribution<Index> size(5, 200);
  double worst_slope_gap = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = size(rng);
    const auto a = random_irreducible(rng, n, 3 * n);
    const auto base = perron_pair(a, opts);
    for (auto kind : kinds) {
      const std::string tag = "graph " + std::to_string(trial) + " " + to_string(kind);
      std::vector<double> eps, err;
      for (double e : {1e-1, 1e-2, 1e-3, 1e-4}) {
        const auto r = perturbed_perron(a, base, {kind, e}, opts).report;
        eps.push_back(e);
        err.push_back(std::abs(r.measured_increase - r.predicted_increase));
        if (e == 1e-3)
          c.expect(std::abs(r.measured_increase - r.predicted_increase) <
                       0.01 * r.predicted_increase,
                   tag + " relative error at 1e-3");
      }
      const double s = loglog_slope(eps, err);
      worst_slope_gap = std::max(worst_slope_gap, std::abs(s - 2.0));
      c.near(s, 2.0, 0.3, tag + " slope");
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "first-order law, 20 graphs x 5 kinds (max |slope-2| %.3f)",
                worst_slope_gap);
  return c.report(buf);
}

bool downweight_monotonicity() {
  Criterion c(6);
  std::mt19937_64 rng(20260403);
  std::uniform_int_distribution<Index> size(5, 120);
  std::uniform_real_distribution<double> frac(0.0, 1.0);
  double worst = -std::numeric_limits<double>::infinity();
  for (int g = 0; g < 20; ++g) {
    const Index n = size(rng);
    const auto a = random_irreducible(rng, n, 2 * n);
    const double rho = perron_pair(a).rho;
    const auto& edges = a.edges();
    std::uniform_int_distribution<std::size_t> pick(0, edges.size() - 1);
    for (int t = 0; t < 50; ++t) {
      const auto& e = edges[pick(rng)];
      const double eps = 1.0 - frac(rng);  // (0, 1]
      const double reduced = spectral_radius(reduce_edge(a, e, eps, false));
      worst = std::max(worst, reduced - rho);
      c.expect(reduced <= rho + 1e-9, "rho increased on graph " + std::to_string(g));
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "1000 downweightings, max rho change %+.2e", worst);
  return c.report(buf);
}

bool bhatia_bound() {
  Criterion c(7);
  std::mt19937_64 rng(20260404);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  constexpr std::size_t n = 100;
  double sum_lhs = 0.0, sum_rhs = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    SymTridiagonal m{std::vector<double>(n), std::vector<double>(n - 1)};
    for (auto& x : m.diag) x = u(rng);
    for (auto& x : m.offdiag) x = u(rng);
    double dmean = 0.0, omean = 0.0;
    for (double x : m.diag) dmean += x;
    for (double x : m.offdiag) omean += x;
    const SymTridiagonal t{std::vector<double>(n, dmean / n),
                           std::vector<double>(n - 1, omean / (n - 1))};
    const auto d = bhatia_spectral_distance(m, t);
    c.expect(d.lhs <= d.rhs, "bound violated in trial " + std::to_string(trial));
    sum_lhs += d.lhs;
    sum_rhs += d.rhs;
  }
  const double lhs = sum_lhs / 100.0, rhs = sum_rhs / 100.0;
  c.expect(lhs >= 0.14 && lhs <= 0.24, "mean spectral distance " + std::to_string(lhs));
  c.expect(rhs >= 0.44 && rhs <= 0.54, "mean Frobenius distance " + std::to_string(rhs));
  char buf[96];
  std::snprintf(buf, sizeof buf, "spectral vs Frobenius distance, means %.3f and %.3f", lhs, rhs);
  return c.report(buf);
}

bool sis_threshold() {
  Criterion c(8);
  const auto t0 = Clock::now();
  const auto a = path_toeplitz(25, 1.0, 1.0);
  auto params = [](double beta, double t_end, double dt) {
    SisParams p;
    p.beta = beta;
    p.delta = 1.0;
    p.t_end = t_end;
    p.dt = dt;
    p.s0.assign(25, 0.1);
    return p;
  };
  const auto below = simulate_sis(a, params(0.4, 100.0, 0.0));
  const auto above = simulate_sis(a, params(0.8, 100.0, 0.0));
  c.expect(below.died_out && below.max_final < 1e-6, "beta=0.4 did not die out");
  c.expect(!above.died_out && above.max_final > 1e-3, "beta=0.8 did not plateau");

  auto final_state = [&](double dt) {
    return simulate_sis(a, params(0.8, 10.0, dt)).states.back();
  };
  auto diff = [](const std::vector<double>& x, const std::vector<double>& y) {
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::abs(x[i] - y[i]));
    return d;
  };
  const auto s1 = final_state(0.1), s2 = final_state(0.05), s3 = final_state(0.025);
  const double ratio = diff(s1, s2) / diff(s2, s3);
  c.near(ratio, 16.0, 4.0, "RK4 ratio");
  const double elapsed = seconds_since(t0);
  c.expect(elapsed < 5.0, "runtime " + std::to_string(elapsed) + " s");
  char buf[96];
  std::snprintf(buf, sizeof buf, "SIS on path n=25, RK4 ratio %.2f", ratio);
  return c.report(buf);
}

// Dataset checks -------------------------------------------------------------

struct GraphExpectations {
  std::string file;
  double rho, rho_tol;
  double kappa;  // NaN to skip
  double rho_wilkinson;
  double increase;  // ρ(A+0.5E) - ρ(A), NaN to skip
  Index top_h, top_k;
  double rho_removed;
  double ones_increase;  // NaN to skip
  double time_limit;
};

void check_graph(Criterion& c, const fs::path& dir, const GraphExpectations& x) {
  const auto path = dir / x.file;
  const auto a = load_edge_file(path.string(), format_from_path(path.string()), 1).matrix;
  const auto t0 = Clock::now();
  const auto p = perron_pair(a);
  const double solve = seconds_since(t0);
  const std::string tag = x.file + " ";
  c.near(p.rho, x.rho, x.rho_tol, tag + "rho");
  if (!std::isnan(x.kappa)) c.near(p.kappa, x.kappa, 1e-5, tag + "kappa");
  const auto w = perturbed_perron(a, p, {PerturbationKind::wilkinson, 0.5}).report;
  if (!std::isnan(x.rho_wilkinson)) c.near(w.rho_perturbed, x.rho_wilkinson, x.rho_tol, tag + "rho(A+0.5E)");
  if (!std::isnan(x.increase)) c.near(w.measured_increase, x.increase, 1e-4, tag + "increase");

  RecommendOptions rec;
  rec.top_k = 1;
  rec.exact_rescore = true;
  rec.force = true;
  const auto plan = recommend_interventions(a, p, rec);
  const auto& top = plan.ranked.front();
  c.expect(top.edge.h + 1 == x.top_h && top.edge.k + 1 == x.top_k,
           tag + "top edge (" + std::to_string(top.edge.h + 1) + "," +
               std::to_string(top.edge.k + 1) + ")");
  c.near(top.rho_perturbed.value_or(0.0), x.rho_removed, x.rho_tol, tag + "rho after removal");
  if (!std::isnan(x.ones_increase)) {
    const auto o = perturbed_perron(a, p, {PerturbationKind::ones, 0.5}).report;
    c.near(o.measured_increase, x.ones_increase, 1e-4, tag + "all-ones increase");
  }
  c.expect(solve < x.time_limit, tag + "Perron solve " + std::to_string(solve) + " s");
}

void check_tridiagonal_air500(Criterion& c, const fs::path& dir) {
  const auto path = dir / "air500.tsv";
  const auto full = load_edge_file(path.string(), format_from_path(path.string()), 1).matrix;
  const auto a = tridiagonal_part(full);
  const auto p = perron_pair(a);
  c.near(p.rho, 1.801938, 1e-5, "tridiagonal rho");
  c.near(structured_condition_number(p.u, p.v, a), 0.613714, 1e-5, "tridiagonal kappa_S");
  c.near(perturbed_perron(a, p, {PerturbationKind::sparsity_structured, 0.9}).pair.rho,
         2.362116, 1e-5, "tridiagonal rho(A+0.9E)");
  c.near(perturbed_perron(a, p, {PerturbationKind::ones_sparsity_structured, 0.9})
             .report.measured_increase,
         0.052606, 1e-5, "tridiagonal all-ones increase");

  const auto t = project_to_toeplitz_cone(a);
  const auto ts = t.to_sparse();
  const auto tp = toeplitz_perron(t);
  c.near(tp.rho, 0.288460, 1e-5, "Toeplitz rho");
  c.near(toeplitz_condition_number(tp.u, tp.v), 0.063357, 1e-5, "Toeplitz kappa_T");
  c.near(perturbed_perron(ts, tp, {PerturbationKind::toeplitz_structured, 0.9}).pair.rho,
         0.345466, 1e-5, "Toeplitz rho(T+0.9E)");
  c.near(perturbed_perron(ts, tp, {PerturbationKind::ones_sparsity_structured, 0.9})
             .report.measured_increase,
         0.056995, 1e-5, "Toeplitz all-ones increase");
}

bool datasets() {
  Criterion c(9);
  const char* env = std::getenv("SPECRAD_DATA_DIR");
  const fs::path dir = env ? fs::path(env) : fs::path(SPECRAD_SOURCE_DIR) / "data";
  for (const char* f : {"air500.tsv", "airlines.tsv", "enron.tsv"}) {
    if (!fs::exists(dir / f)) {
      std::printf("SKIP criterion 9: real-network experiments (%s not found in %s)\n", f,
                  dir.string().c_str());
      return true;
    }
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  try {
    check_graph(c, dir, {"air500.tsv", 82.610276, 1e-4, 1.001668, 83.111096, nan, 224, 24,
                         82.590199, 0.255450, 1e9});
    check_graph(c, dir, {"airlines.tsv", 26.545430, 1e-4, nan, 27.047941, nan, 51, 137,
                         26.452922, 0.223135, 1e9});
    check_graph(c, dir, {"enron.tsv", 118.417715, 1e-3, nan, nan, 0.5, 137, 196, 118.398705,
                         nan, 10.0});
    check_tridiagonal_air500(c, dir);
  } catch (const std::exception& e) {
    c.expect(false, e.what());
  }
  return c.report("real-network experiments");
}

bool condition_ordering() {
  Criterion c(10);
  std::mt19937_64 rng(20260405);
  std::uniform_int_distribution<Index> size(2, 200);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_tridiagonal(rng, size(rng), 0.05, 1.0);
    const auto p = perron_pair(a);
    const double k = structured_condition_number(p.u, p.v);
    const double ks = structured_condition_number(p.u, p.v, a);
    const double kt = toeplitz_condition_number(p.u, p.v);
    const std::string tag = "trial " + std::to_string(trial);
    c.expect(kt <= ks + 1e-10, tag + " kappa_T > kappa_S");
    c.expect(ks <= k + 1e-10, tag + " kappa_S > kappa");
  }
  return c.report("kappa_T <= kappa_S <= kappa on 50 tridiagonal matrices");
}

}  // namespace

int main() {
  using Check = bool (*)();
  const Check checks[] = {symmetric_chain_example, nonsymmetric_chain_example,
                          nonnormal_toeplitz_example, closed_form_vs_solver,
                          first_order_law, downweight_monotonicity,
                          bhatia_bound, sis_threshold,
                          datasets, condition_ordering};
  int failed = 0;
  for (auto check : checks) {
    try {
      if (!check()) ++failed;
    } catch (const std::exception& e) {
      std::printf("FAIL (exception): %s\n", e.what());
      ++failed;
    }
    std::fflush(stdout);
  }
  std::printf("%d of 10 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}

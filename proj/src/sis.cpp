// Copyright 2026 The specrad Authors.
// SPDX-License-Identifier: Apache-2.0

#include "specrad/sis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "specrad/error.hpp"
#include "specrad/parallel.hpp"

namespace specrad {

namespace {

void rhs(const SparseAdjacency& a, double beta, double delta, const std::vector<double>& s,
         std::vector<double>& as, std::vector<double>& out) {
  a.multiply(s, as);
  for (std::size_t i = 0; i < s.size(); ++i)
    out[i] = -delta * s[i] + beta * (1.0 - s[i]) * as[i];
}

}  // namespace

void SisParams::validate(Index n) const {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ValidationError("beta must be positive");
  if (!(delta > 0.0) || !std::isfinite(delta)) throw ValidationError("delta must be positive");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ValidationError("t_end must be positive");
  if (dt < 0.0 || !std::isfinite(dt)) throw ValidationError("dt must be positive");
  if (dt > t_end) throw ValidationError("dt must not exceed t_end");
  if (s0.size() != static_cast<std::size_t>(n))
    throw ValidationError("initial state length does not match the graph");
  for (double x : s0)
    if (!(x >= 0.0 && x <= 1.0)) throw ValidationError("initial state entries must lie in [0, 1]");
  if (max_snapshots < 2) throw ValidationError("max_snapshots must be at least 2");
}

double default_sis_step(const SparseAdjacency& a, double beta, double delta) {
  return 0.01 / std::max(beta * a.norm_inf(), delta);
}

SisTrajectory simulate_sis(const SparseAdjacency& a, const SisParams& p) {
  p.validate(a.n());
  const double step = p.dt > 0.0 ? p.dt : default_sis_step(a, p.beta, p.delta);
  const auto steps = static_cast<std::size_t>(std::ceil(p.t_end / step - 1e-9));
  const double h = p.t_end / static_cast<double>(steps);
  const std::size_t stride = std::max<std::size_t>(1, (steps + p.max_snapshots - 2) /
                                                          (p.max_snapshots - 1));

  const std::size_t n = p.s0.size();
  std::vector<double> s = p.s0, tmp(n), as(n), k1(n), k2(n), k3(n), k4(n);
  SisTrajectory traj;
  traj.dt = h;
  traj.steps = steps;
  traj.times.push_back(0.0);
  traj.states.push_back(s);

  for (std::size_t step_no = 1; step_no <= steps; ++step_no) {
    rhs(a, p.beta, p.delta, s, as, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = s[i] + 0.5 * h * k1[i];
    rhs(a, p.beta, p.delta, tmp, as, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = s[i] + 0.5 * h * k2[i];
    rhs(a, p.beta, p.delta, tmp, as, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = s[i] + h * k3[i];
    rhs(a, p.beta, p.delta, tmp, as, k4);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      if (!(s[i] >= -1e-6 && s[i] <= 1.0 + 1e-6))
        throw NumericalError("SIS integration unstable at t = " +
                             std::to_string(static_cast<double>(step_no) * h) +
                             "; retry with a smaller dt");
    }
    if (step_no % stride == 0 || step_no == steps) {
      traj.times.push_back(step_no == steps ? p.t_end : static_cast<double>(step_no) * h);
      traj.states.push_back(s);
    }
  }
  traj.max_final = 0.0;
  for (double x : s) traj.max_final = std::max(traj.max_final, std::abs(x));
  traj.died_out = traj.max_final < kDiedOutLevel;
  return traj;
}

double epidemic_threshold(const PerronPair& pair) {
  if (pair.rho < 0.0 || !std::isfinite(pair.rho)) throw ValidationError("invalid spectral radius");
  if (pair.rho == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / pair.rho;
}

std::vector<SweepPoint> sis_sweep(const SparseAdjacency& a, const SisParams& base,
                                  const std::vector<double>& betas, unsigned threads) {
  std::vector<SweepPoint> out(betas.size());
  parallel_for(betas.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      SisParams p = base;
      p.beta = betas[i];
      p.max_snapshots = 2;
      const auto traj = simulate_sis(a, p);
      out[i] = {betas[i], betas[i] / p.delta, traj.max_final, traj.died_out};
    }
  });
  return out;
}

std::vector<double> sweep_range(double lo, double hi, double step) {
  if (!(step > 0.0)) throw ValidationError("sweep step must be positive");
  if (!(lo > 0.0) || !(hi >= lo)) throw ValidationError("sweep range must satisfy 0 < B1 <= B2");
  std::vector<double> out;
  for (std::size_t i = 0;; ++i) {
    const double b = lo + static_cast<double>(i) * step;
    if (b > hi * (1.0 + 1e-9)) break;
    out.push_back(b);
    if (out.size() > 1000000) throw ValidationError("sweep has too many points");
  }
  return out;
}

void write_trajectory_csv(std::ostream& out, const SisTrajectory& traj, int precision) {
  char buf[48];
  auto fmt = [&](double x) {
    if (precision < 0)
      std::snprintf(buf, sizeof buf, "%.17g", x);
    else
      std::snprintf(buf, sizeof buf, "%.*f", precision, x);
    return buf;
  };
  out << 't';
  const std::size_t n = traj.states.empty() ? 0 : traj.states.front().size();
  for (std::size_t i = 1; i <= n; ++i) out << ",s_" << i;
  out << '\n';
  for (std::size_t r = 0; r < traj.times.size(); ++r) {
    out << fmt(traj.times[r]);
    for (double x : traj.states[r]) out << ',' << fmt(x);
    out << '\n';
  }
}

}  // namespace specrad

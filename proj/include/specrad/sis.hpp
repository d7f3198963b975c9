// Copyright 2026 The specrad Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <vector>

#include "specrad/eigen_engine.hpp"
#include "specrad/graph.hpp"

namespace specrad {

struct SisParams {
  double beta = 0.0;   // infection rate along each edge
  double delta = 0.0;  // recovery rate
  std::vector<double> s0;
  double t_end = 0.0;
  /// Zero selects 0.01 / max(beta ||A||_inf, delta).
  double dt = 0.0;
  /// Keep at most this many states (evenly strided; first and last always kept).
  std::size_t max_snapshots = 1001;

  void validate(Index n) const;
};

struct SisTrajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  double dt = 0.0;
  std::size_t steps = 0;
  double max_final = 0.0;  // ||s(t_end)||_inf
  bool died_out = true;    // max_final < kDiedOutLevel
};

inline constexpr double kDiedOutLevel = 1e-6;

double default_sis_step(const SparseAdjacency& a, double beta, double delta);

/// Fixed-step RK4 on ds/dt = -delta s + beta diag(1 - s) A s. Throws
/// NumericalError if the state leaves [-1e-6, 1 + 1e-6].
SisTrajectory simulate_sis(const SparseAdjacency& a, const SisParams& p);

/// 1 / rho, or +inf when rho == 0.
double epidemic_threshold(const PerronPair& pair);

struct SweepPoint {
  double beta = 0.0;
  double ratio = 0.0;  // beta / delta
  double max_final = 0.0;
  bool died_out = true;
};

/// One simulation per beta, run in parallel; output order follows `betas`.
std::vector<SweepPoint> sis_sweep(const SparseAdjacency& a, const SisParams& base,
                                  const std::vector<double>& betas, unsigned threads);

/// Inclusive range lo, lo + step, ... up to hi (with 1e-9 relative slack).
std::vector<double> sweep_range(double lo, double hi, double step);

/// CSV rows t,s_1,...,s_n.
void write_trajectory_csv(std::ostream& out, const SisTrajectory& traj, int precision);

}  // namespace specrad

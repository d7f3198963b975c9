// Copyright 2026 The specrad Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "specrad/eigen_engine.hpp"
#include "specrad/graph.hpp"

namespace specrad {

/// Spectral impact of reducing one edge weight (or one undirected pair).
struct EdgeImpact {
  EdgeRef edge;
  /// a_hk v_h u_k, or 2 a_hk u_h u_k in symmetric mode.
  double alpha = 0.0;
  /// First-order estimate of (rho(A) - rho(A~)) / rho(A).
  double first_order_impact = 0.0;
  std::optional<double> exact_impact;
  std::optional<double> rho_perturbed;
  std::optional<bool> preserves_irreducibility;
};

enum class InterventionMode { remove, downweight };

struct InterventionPlan {
  std::vector<EdgeImpact> ranked;
  InterventionMode mode = InterventionMode::remove;
  /// Fraction of the weight taken away: a~_hk = (1 - epsilon) a_hk.
  double epsilon = 1.0;
  bool symmetric = false;
};

/// Alphas within this relative distance of each other count as ties and are
/// ordered by (h, k). Closed-form ties (e.g. Toeplitz chains) otherwise fall
/// out in rounding-noise order.
inline constexpr double kAlphaTieTolerance = 1e-9;

/// First-order impacts for every stored edge, or every unordered pair h < k
/// in symmetric mode (which requires symmetric A). The result is sorted by
/// alpha descending with ties broken by (h asc, k asc).
std::vector<EdgeImpact> edge_impacts_first_order(const SparseAdjacency& a,
                                                 const PerronPair& pair, double epsilon,
                                                 bool symmetric_mode);

/// Sorts in place: alpha descending, near-ties (kAlphaTieTolerance) by (h, k).
void rank_impacts(std::vector<EdgeImpact>& impacts);

/// A with a_hk (and a_kh in symmetric mode) scaled by (1 - epsilon).
SparseAdjacency reduce_edge(const SparseAdjacency& a, const EdgeRef& edge, double epsilon,
                            bool symmetric_mode);

struct ExactImpact {
  double impact = 0.0;         // (rho(A) - rho(A~)) / rho(A)
  double rho_perturbed = 0.0;  // rho(A~)
};

/// Recomputes rho(A~). epsilon must lie in (0, 1]; epsilon == 1 removes the
/// edge. The two-argument-rho overload reuses a known rho(A).
ExactImpact exact_impact(const SparseAdjacency& a, const EdgeRef& edge, double epsilon,
                         bool symmetric_mode, const SolverOptions& opts = {});
ExactImpact exact_impact(const SparseAdjacency& a, double rho, const EdgeRef& edge,
                         double epsilon, bool symmetric_mode, const SolverOptions& opts = {});

struct RecommendOptions {
  std::size_t top_k = 10;
  InterventionMode mode = InterventionMode::remove;
  double epsilon = 1.0;
  bool symmetric = false;
  bool require_irreducible = true;
  bool exact_rescore = false;
  /// Run on reducible input anyway.
  bool force = false;
};

/// Top-k edges by alpha. With require_irreducible in remove mode, edges
/// whose removal makes A reducible are flagged and moved below every edge
/// that keeps it irreducible. exact_rescore fills exact impacts (evaluated in
/// parallel over opts.threads workers; results do not depend on the order).
InterventionPlan recommend_interventions(const SparseAdjacency& a, const PerronPair& pair,
                                         const RecommendOptions& rec,
                                         const SolverOptions& opts = {});

/// CSV with header h,k,weight,alpha,first_order_impact,exact_impact,
/// preserves_irreducibility; nodes written with `index_base`.
void write_plan_csv(std::ostream& out, const InterventionPlan& plan, int index_base,
                    int precision);

}  // namespace specrad

// Copyright 2026 The specrad Authors.
// SPDX-License-Identifier: Apache-2.0

#include "specrad/impact.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "specrad/error.hpp"
#include "specrad/parallel.hpp"

namespace specrad {

namespace {

bool edge_order(const EdgeImpact& a, const EdgeImpact& b) {
  return a.edge.h != b.edge.h ? a.edge.h < b.edge.h : a.edge.k < b.edge.k;
}

std::string format_number(double x, int precision) {
  char buf[48];
  if (precision < 0)
    std::snprintf(buf, sizeof buf, "%.17g", x);
  else
    std::snprintf(buf, sizeof buf, "%.*f", precision, x);
  return buf;
}

}  // namespace

void rank_impacts(std::vector<EdgeImpact>& impacts) {
  std::sort(impacts.begin(), impacts.end(), [](const EdgeImpact& a, const EdgeImpact& b) {
    if (a.alpha != b.alpha) return a.alpha > b.alpha;
    return edge_order(a, b);
  });
  // Regroup runs of near-equal alphas: each run starts at its largest alpha
  // and collects every following alpha within the relative tolerance.
  std::size_t start = 0;
  while (start < impacts.size()) {
    const double head = impacts[start].alpha;
    std::size_t end = start + 1;
    while (end < impacts.size() &&
           head - impacts[end].alpha <= kAlphaTieTolerance * std::abs(head))
      ++end;
    std::sort(impacts.begin() + start, impacts.begin() + end, edge_order);
    start = end;
  }
}

std::vector<EdgeImpact> edge_impacts_first_order(const SparseAdjacency& a,
                                                 const PerronPair& pair, double epsilon,
                                                 bool symmetric_mode) {
  if (pair.u.size() != static_cast<std::size_t>(a.n()) || pair.v.size() != pair.u.size())
    throw ValidationError("Perron pair does not match the matrix");
  if (!(pair.rho > 0.0)) throw NumericalError("first-order impacts need rho(A) > 0");
  if (!(epsilon > 0.0)) throw ValidationError("epsilon must be positive");
  if (symmetric_mode && !a.is_symmetric())
    throw ValidationError("symmetric mode requires a symmetric adjacency matrix");

  std::vector<EdgeImpact> out;
  out.reserve(static_cast<std::size_t>(symmetric_mode ? a.m() / 2 : a.m()));
  const auto& u = pair.u;
  const auto& v = pair.v;
  for (const auto& e : a.edges()) {
    EdgeImpact imp;
    imp.edge = e;
    if (symmetric_mode) {
      if (e.h > e.k) continue;
      // Right and left Perron vectors coincide for symmetric A.
      imp.alpha = 2.0 * e.weight * u[e.h] * u[e.k];
      imp.first_order_impact = imp.alpha * epsilon / pair.rho;
    } else {
      imp.alpha = e.weight * v[e.h] * u[e.k];
      imp.first_order_impact = imp.alpha * epsilon * pair.kappa / pair.rho;
    }
    out.push_back(imp);
  }
  rank_impacts(out);
  return out;
}

SparseAdjacency reduce_edge(const SparseAdjacency& a, const EdgeRef& edge, double epsilon,
                            bool symmetric_mode) {
  if (!(epsilon > 0.0)) throw ValidationError("epsilon must be positive");
  if (epsilon > 1.0) throw ValidationError("perturbation would create negative weight");
  const auto w = a.weight(edge.h, edge.k);
  if (!w) throw ValidationError("edge does not exist");
  SparseAdjacency out = a.with_weight(edge.h, edge.k, epsilon == 1.0 ? 0.0 : (1.0 - epsilon) * *w);
  if (symmetric_mode) {
    const auto back = a.weight(edge.k, edge.h);
    if (!back) throw ValidationError("reverse edge required in symmetric mode does not exist");
    out = out.with_weight(edge.k, edge.h, epsilon == 1.0 ? 0.0 : (1.0 - epsilon) * *back);
  }
  return out;
}

ExactImpact exact_impact(const SparseAdjacency& a, double rho, const EdgeRef& edge,
                         double epsilon, bool symmetric_mode, const SolverOptions& opts) {
  if (!(rho > 0.0)) throw NumericalError("exact impact needs rho(A) > 0");
  const SparseAdjacency reduced = reduce_edge(a, edge, epsilon, symmetric_mode);
  ExactImpact out;
  out.rho_perturbed = spectral_radius(reduced, opts);
  out.impact = (rho - out.rho_perturbed) / rho;
  return out;
}

ExactImpact exact_impact(const SparseAdjacency& a, const EdgeRef& edge, double epsilon,
                         bool symmetric_mode, const SolverOptions& opts) {
  if (epsilon > 1.0) throw ValidationError("perturbation would create negative weight");
  return exact_impact(a, spectral_radius(a, opts), edge, epsilon, symmetric_mode, opts);
}

InterventionPlan recommend_interventions(const SparseAdjacency& a, const PerronPair& pair,
                                         const RecommendOptions& rec,
                                         const SolverOptions& opts) {
  if (rec.top_k < 1) throw ValidationError("top_k must be at least 1");
  if (!(rec.epsilon > 0.0) || rec.epsilon > 1.0)
    throw ValidationError("epsilon must lie in (0, 1]");
  if (!rec.force && !is_irreducible(a))
    throw ValidationError("adjacency matrix is reducible; Perron vectors are not unique "
                          "(pass force to rank anyway)");

  InterventionPlan plan;
  plan.mode = rec.mode;
  plan.epsilon = rec.mode == InterventionMode::remove ? 1.0 : rec.epsilon;
  plan.symmetric = rec.symmetric;

  auto impacts = edge_impacts_first_order(a, pair, plan.epsilon, rec.symmetric);
  if (impacts.size() > rec.top_k) impacts.resize(rec.top_k);

  const bool removes = plan.epsilon == 1.0;
  for (auto& imp : impacts) {
    if (removes && rec.require_irreducible)
      imp.preserves_irreducibility =
          is_irreducible(reduce_edge(a, imp.edge, 1.0, rec.symmetric));
    else if (!removes)
      imp.preserves_irreducibility = true;
  }
  if (removes && rec.require_irreducible)
    std::stable_partition(impacts.begin(), impacts.end(),
                          [](const EdgeImpact& e) { return *e.preserves_irreducibility; });

  if (rec.exact_rescore) {
    parallel_for(impacts.size(), opts.threads, [&](std::size_t begin, std::size_t end) {
      SolverOptions local = opts;
      local.threads = 1;
      for (std::size_t i = begin; i < end; ++i) {
        const auto r = exact_impact(a, pair.rho, impacts[i].edge, plan.epsilon, rec.symmetric,
                                    local);
        impacts[i].exact_impact = r.impact;
        impacts[i].rho_perturbed = r.rho_perturbed;
      }
    });
  }
  plan.ranked = std::move(impacts);
  return plan;
}

void write_plan_csv(std::ostream& out, const InterventionPlan& plan, int index_base,
                    int precision) {
  out << "h,k,weight,alpha,first_order_impact,exact_impact,preserves_irreducibility\n";
  for (const auto& imp : plan.ranked) {
    out << imp.edge.h + index_base << ',' << imp.edge.k + index_base << ','
        << format_number(imp.edge.weight, precision) << ','
        << format_number(imp.alpha, precision) << ','
        << format_number(imp.first_order_impact, precision) << ','
        << (imp.exact_impact ? format_number(*imp.exact_impact, precision) : "") << ','
        << (imp.preserves_irreducibility ? (*imp.preserves_irreducibility ? "true" : "false")
                                         : "")
        << '\n';
  }
}

}  // namespace specrad

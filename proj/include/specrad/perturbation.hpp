// Copyright 2026 The specrad Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "specrad/eigen_engine.hpp"
#include "specrad/graph.hpp"
#include "specrad/toeplitz.hpp"

namespace specrad {

enum class PerturbationKind {
  wilkinson,                 // E = v u^T
  sparsity_structured,       // v u^T restricted to A's pattern, unit Frobenius norm
  toeplitz_structured,       // v u^T averaged onto the tridiagonal Toeplitz band
  ones,                      // e e^T with e = n^{-1/2} (1, ..., 1)
  ones_sparsity_structured,  // e e^T restricted to A's pattern, unit Frobenius norm
};

std::string to_string(PerturbationKind kind);
/// Accepts the names printed by to_string and the short forms "sparsity",
/// "toeplitz" and "ones-sparsity"; throws ValidationError otherwise.
PerturbationKind parse_perturbation_kind(const std::string& name);

struct PerturbationSpec {
  PerturbationKind kind = PerturbationKind::wilkinson;
  double epsilon = 0.0;

  void validate() const;
};

/// left * right^T, never formed densely.
class RankOnePerturbation {
 public:
  RankOnePerturbation(std::vector<double> left, std::vector<double> right);

  std::size_t size() const noexcept { return left_.size(); }
  double entry(Index i, Index j) const { return left_[i] * right_[j]; }
  const std::vector<double>& left() const noexcept { return left_; }
  const std::vector<double>& right() const noexcept { return right_; }

  /// y = left (right^T x), and the transpose product.
  void apply(std::span<const double> x, std::span<double> y) const;
  void apply_transpose(std::span<const double> x, std::span<double> y) const;

  /// Spectral norm, which equals the Frobenius norm for rank one.
  double norm() const;

 private:
  std::vector<double> left_;
  std::vector<double> right_;
};

/// Any of the perturbation shapes produced by this module.
using Perturbation = std::variant<RankOnePerturbation, SparseAdjacency, TridiagToeplitz>;

/// E = v u^T. Throws ValidationError when u or v is not unit norm (to 1e-8)
/// or has negative entries.
RankOnePerturbation wilkinson_matrix(std::span<const double> u, std::span<const double> v);

/// E restricted to the support of `pattern`, scaled to unit Frobenius norm.
SparseAdjacency project_to_sparsity(const RankOnePerturbation& e, const SparseAdjacency& pattern);

/// Sub- and super-diagonal of E replaced by their means, the rest dropped,
/// scaled to unit Frobenius norm.
TridiagToeplitz project_to_toeplitz(const RankOnePerturbation& e);
TridiagToeplitz project_to_toeplitz(const SparseAdjacency& m);

/// Unit-norm all-ones substitute, either plain or restricted to a pattern.
RankOnePerturbation ones_substitute(Index n);
SparseAdjacency ones_substitute(const SparseAdjacency& pattern);

/// kappa = 1 / (v^T u).
double structured_condition_number(std::span<const double> u, std::span<const double> v);
/// kappa_S = ||v u^T|_S||_F / (v^T u) for the support S of `pattern`.
double structured_condition_number(std::span<const double> u, std::span<const double> v,
                                   const SparseAdjacency& pattern);
/// kappa_T = ||v u^T|_T||_F / (v^T u) for the tridiagonal Toeplitz band.
double toeplitz_condition_number(std::span<const double> u, std::span<const double> v);

/// Worst-case perturbation of the requested kind for A with Perron pair `base`.
Perturbation build_perturbation(const SparseAdjacency& a, const PerronPair& base,
                                PerturbationKind kind);

/// v^T E u / (v^T u): first-order growth rate of rho along E.
double directional_sensitivity(const Perturbation& e, const PerronPair& base);

struct StructuredConditionReport {
  PerturbationKind kind = PerturbationKind::wilkinson;
  double epsilon = 0.0;
  double rho = 0.0;            // rho(A)
  double rho_perturbed = 0.0;  // rho(A + eps E)
  double kappa_plain = 1.0;
  /// kappa, kappa_S or kappa_T, matching the kind's structure class.
  double kappa_structured = 1.0;
  /// v^T E u / (v^T u) for the E actually applied; equals kappa_structured
  /// for the Wilkinson-type kinds.
  double sensitivity = 1.0;
  double predicted_increase = 0.0;  // eps * sensitivity
  double measured_increase = 0.0;   // rho_perturbed - rho
};

struct PerturbedPerron {
  PerronPair pair;
  StructuredConditionReport report;
};

/// Perron pair of A + eps E. Rank-one kinds use a matrix-free operator;
/// structured kinds are formed sparsely. eps == 0 returns the base pair.
PerturbedPerron perturbed_perron(const SparseAdjacency& a, const PerronPair& base,
                                 const PerturbationSpec& spec, const SolverOptions& opts = {});
PerturbedPerron perturbed_perron(const SparseAdjacency& a, const PerturbationSpec& spec,
                                 const SolverOptions& opts = {});

/// Dense row-major CSV of log10 |e_ij| (zeros written as -inf). n <= 2000.
void write_log10_heatmap(std::ostream& out, const Perturbation& e, Index n);

/// Entry (i, j) of any perturbation shape.
double perturbation_entry(const Perturbation& e, Index i, Index j);

}  // namespace specrad

// Copyright 2026 The specrad Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "specrad/error.hpp"
#include "specrad/graph.hpp"

namespace specrad {

/// How a PerronPair was obtained.
enum class SolverPath {
  trivial,      // zero matrix
  tridiagonal,  // diagonal similarity to a symmetric tridiagonal + bisection
  power,        // shifted power iteration only
  arnoldi,      // power iteration followed by restarted Arnoldi
  closed_form,  // analytic tridiagonal Toeplitz formulas
};

std::string to_string(SolverPath path);

/// Perron root with unit-norm right (u) and left (v) Perron vectors.
struct PerronPair {
  double rho = 0.0;
  std::vector<double> u;
  std::vector<double> v;
  /// 1 / (v^T u). +inf when the product underflows or vanishes (acyclic input).
  double kappa = 1.0;
  double residual_right = 0.0;  // ||A u - rho u||
  double residual_left = 0.0;   // ||A^T v - rho v||
  std::size_t iterations = 0;   // operator applications, both sides
  bool converged = false;
  /// Set when the input was known to be reducible: u, v need not be unique.
  bool reducible_warning = false;
  SolverPath path = SolverPath::power;
};

struct SolverOptions {
  double tol = 1e-10;
  std::size_t max_iterations = 100000;
  /// Power-iteration shift c in (A + cI); nullopt selects ||A||_inf / 2.
  std::optional<double> shift;
  /// Arnoldi restart dimension.
  std::size_t subspace_dim = 20;
  /// Use the tridiagonal route for irreducible tridiagonal input.
  bool allow_tridiagonal = true;
  /// Threads for matrix-vector products; 0 means hardware concurrency.
  unsigned threads = 1;

  void validate() const;
};

/// Raised when the iteration budget is exhausted; carries the best iterate.
class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, PerronPair best)
      : NumericalError(what), best_(std::move(best)) {}
  const PerronPair& best() const noexcept { return best_; }

 private:
  PerronPair best_;
};

/// Matrix-free nonnegative operator, used for rank-one updated matrices that
/// must never be formed densely.
struct LinearOperator {
  std::size_t n = 0;
  std::function<void(std::span<const double>, std::span<double>)> apply;
  std::function<void(std::span<const double>, std::span<double>)> apply_transpose;
  /// Any upper bound for the maximum absolute row sum; drives the shift.
  double norm_inf = 0.0;
};

/// Wraps a sparse matrix; products are row-partitioned over `threads`
/// workers for large matrices, which keeps results independent of the
/// thread count.
LinearOperator make_operator(const SparseAdjacency& a, unsigned threads = 1);

/// Perron root and vectors of a nonnegative matrix.
///
/// Irreducible tridiagonal input is symmetrized by a diagonal similarity and
/// solved by Sturm bisection plus inverse iteration, which stays accurate for
/// strongly nonnormal cases. Everything else goes through shifted power
/// iteration on A + cI and A^T + cI, switching to restarted Arnoldi when the
/// residual stalls. Throws ConvergenceError when max_iterations is exhausted.
PerronPair perron_pair(const SparseAdjacency& a, const SolverOptions& opts = {});
PerronPair perron_pair(const LinearOperator& op, const SolverOptions& opts = {});

/// Perron root alone. Reducible input is split into strongly connected
/// blocks and the largest block root returned, which avoids the slow
/// convergence of iterating across equal-radius blocks.
double spectral_radius(const SparseAdjacency& a, const SolverOptions& opts = {});

/// Fills residuals and kappa of `pair` for matrix `a`.
void finalize_pair(PerronPair& pair, const LinearOperator& op);

/// Spectral norm of A^k, by power iteration on (A^k)^T A^k applied
/// implicitly. Throws NumericalError on overflow.
double power_spectral_norm(const SparseAdjacency& a, int k);

/// rho^k <= ||A^k||_2 (1 + 1e-8).
bool spectral_norm_lower_bound_check(const SparseAdjacency& a, double rho, int k);

/// Symmetric tridiagonal matrix given by its diagonal and one off-diagonal.
struct SymTridiagonal {
  std::vector<double> diag;
  std::vector<double> offdiag;  // length diag.size() - 1

  std::size_t size() const noexcept { return diag.size(); }
  double frobenius_norm() const;
  void validate() const;
};

/// Number of eigenvalues strictly less than x (Sturm sequence count).
std::size_t sturm_count(const SymTridiagonal& t, double x);

/// All eigenvalues by bisection, sorted descending.
std::vector<double> sturm_tridiag_eigenvalues(std::span<const double> diag,
                                              std::span<const double> offdiag);

/// Largest eigenvalue only, by bisection.
double largest_tridiag_eigenvalue(const SymTridiagonal& t);

struct SpectralDistance {
  double lhs = 0.0;  // relative spectral distance, spectra sorted non-increasing
  double rhs = 0.0;  // relative Frobenius distance ||M1 - M2||_F / ||M1||_F
};

/// Both sides of the eigenvalue perturbation bound for symmetric matrices.
SpectralDistance bhatia_spectral_distance(const SymTridiagonal& m1,
                                          const SymTridiagonal& m2);

}  // namespace specrad

// Copyright 2026 The specrad Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "specrad/eigen_engine.hpp"
#include "specrad/graph.hpp"

namespace specrad {

/// Zero-diagonal tridiagonal Toeplitz matrix: t_sub on the sub-diagonal,
/// t_super on the super-diagonal. Both are positive, so the matrix is
/// irreducible.
struct TridiagToeplitz {
  Index n = 2;
  double t_sub = 1.0;
  double t_super = 1.0;

  void validate() const;
  SparseAdjacency to_sparse() const;
  double frobenius_norm() const;
};

/// Tridiagonal "mask chain": the edge i -> i+1 carries w_in[i] * w_out[i+1]
/// and the edge i+1 -> i carries w_in[i+1] * w_out[i]. A person without a
/// mask has w_in = w_out = 1.
struct MaskChain {
  std::vector<double> w_in;
  std::vector<double> w_out;

  void validate() const;
};

/// Closed-form Perron root and vectors:
///   rho = 2 sqrt(t_sub t_super) cos(pi / (n + 1)),
///   u_k ~ (t_sub / t_super)^(k/2) sin(k pi / (n + 1)),
///   v_k ~ (t_super / t_sub)^(k/2) sin(k pi / (n + 1)).
/// The geometric factors are formed in log space and kappa likewise, so
/// extreme ratios underflow gracefully instead of overflowing.
PerronPair toeplitz_perron(const TridiagToeplitz& t);

/// Perron root of (T + T^T) / 2: (t_sub + t_super) cos(pi / (n + 1)).
double symmetrized_toeplitz_perron(const TridiagToeplitz& t);

SparseAdjacency build_mask_chain(const MaskChain& chain);

/// Frobenius-nearest zero-diagonal tridiagonal Toeplitz matrix: the means of
/// the super- and sub-diagonals (absent entries count as zero). Entries of
/// `a` off the tridiagonal band are ignored.
TridiagToeplitz project_to_toeplitz_cone(const SparseAdjacency& a);

/// Adds t_super at (n, 1) and t_sub at (1, n); requires n >= 3.
SparseAdjacency make_circulant(const TridiagToeplitz& t);

/// Drops every entry with |h - k| != 1.
SparseAdjacency tridiagonal_part(const SparseAdjacency& a);

}  // namespace specrad

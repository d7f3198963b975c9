// Copyright 2026 The specrad Authors.
// SPDX-License-Identifier: Apache-2.0

// Dense reference computations and random generators shared by the tests.
// Everything here goes through Eigen's dense solvers so that it is
// independent of the sparse code under test.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "specrad/graph.hpp"

namespace specrad::testing {

inline Eigen::MatrixXd dense(const SparseAdjacency& a) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(a.n(), a.n());
  for (const auto& e : a.edges()) m(e.h, e.k) = e.weight;
  return m;
}

struct DensePerron {
  double rho = 0.0;
  Eigen::VectorXd u;
  Eigen::VectorXd v;
  double kappa = 1.0;
};

inline Eigen::VectorXd dominant_vector(const Eigen::MatrixXd& m, double* value) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(m);
  const auto& vals = es.eigenvalues();
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < vals.size(); ++i)
    if (vals[i].real() > vals[best].real()) best = i;
  *value = vals[best].real();
  Eigen::VectorXd x = es.eigenvectors().col(best).real();
  if (x.sum() < 0) x = -x;
  x = x.cwiseMax(0.0);
  return x / x.norm();
}

/// Perron pair from a full dense eigendecomposition of A and A^T.
inline DensePerron dense_perron(const SparseAdjacency& a) {
  const Eigen::MatrixXd m = dense(a);
  DensePerron p;
  double left_rho = 0.0;
  p.u = dominant_vector(m, &p.rho);
  p.v = dominant_vector(m.transpose(), &left_rho);
  p.kappa = 1.0 / p.v.dot(p.u);
  return p;
}

inline double rel_vec_error(const std::vector<double>& got, const Eigen::VectorXd& want) {
  double d = 0.0;
  for (Eigen::Index i = 0; i < want.size(); ++i)
    d += (got[i] - want[i]) * (got[i] - want[i]);
  return std::sqrt(d) / want.norm();
}

inline double rel_vec_error(const std::vector<double>& got, const std::vector<double>& want) {
  return rel_vec_error(got, Eigen::Map<const Eigen::VectorXd>(want.data(), want.size()));
}

/// Directed graph on n nodes: a random Hamiltonian cycle (so the result is
/// irreducible) plus about `extra` random edges, weights uniform in [lo, hi].
inline SparseAdjacency random_irreducible(std::mt19937_64& rng, Index n, Index extra,
                                          double lo = 0.1, double hi = 1.0) {
  std::uniform_real_distribution<double> w(lo, hi);
  std::uniform_int_distribution<Index> node(0, n - 1);
  std::vector<Index> perm(n);
  std::iota(perm.begin(), perm.end(), Index{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<EdgeRef> edges;
  std::set<std::pair<Index, Index>> keys;
  for (Index i = 0; i < n; ++i) {
    edges.push_back({perm[i], perm[(i + 1) % n], w(rng)});
    keys.insert({perm[i], perm[(i + 1) % n]});
  }
  for (Index t = 0; t < extra; ++t) {
    const Index h = node(rng), k = node(rng);
    if (h == k || !keys.insert({h, k}).second) continue;
    edges.push_back({h, k, w(rng)});
  }
  return SparseAdjacency::from_edges(n, std::move(edges));
}

/// Symmetric version of random_irreducible (connected undirected graph).
inline SparseAdjacency random_symmetric(std::mt19937_64& rng, Index n, Index extra) {
  return symmetrize(random_irreducible(rng, n, extra));
}

/// Tridiagonal with zero diagonal and off-diagonals uniform in [lo, hi].
inline SparseAdjacency random_tridiagonal(std::mt19937_64& rng, Index n, double lo,
                                          double hi) {
  std::uniform_real_distribution<double> w(lo, hi);
  std::vector<EdgeRef> edges;
  for (Index i = 0; i + 1 < n; ++i) {
    edges.push_back({i, i + 1, w(rng)});
    edges.push_back({i + 1, i, w(rng)});
  }
  return SparseAdjacency::from_edges(n, std::move(edges));
}

inline SparseAdjacency path_toeplitz(Index n, double sub, double super) {
  std::vector<EdgeRef> edges;
  for (Index i = 0; i + 1 < n; ++i) {
    edges.push_back({i, i + 1, super});
    edges.push_back({i + 1, i, sub});
  }
  return SparseAdjacency::from_edges(n, std::move(edges));
}

}  // namespace specrad::testing

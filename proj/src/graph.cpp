// Copyright 2026 The specrad Authors.
// SPDX-License-Identifier: Apache-2.0

#include "specrad/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "specrad/error.hpp"

namespace specrad {

namespace {

std::string edge_name(Index h, Index k) {
  return "(" + std::to_string(h) + ", " + std::to_string(k) + ")";
}

}  // namespace

SparseAdjacency SparseAdjacency::from_edges(Index n, std::vector<EdgeRef> edges) {
  if (n < 1) throw ValidationError("matrix order must be at least 1");
  for (const auto& e : edges) {
    if (e.h < 0 || e.h >= n || e.k < 0 || e.k >= n)
      throw ValidationError("index out of range in edge " + edge_name(e.h, e.k));
    if (e.h == e.k) throw ValidationError("self-loop at node " + std::to_string(e.h));
    if (!std::isfinite(e.weight))
      throw ValidationError("non-finite weight on edge " + edge_name(e.h, e.k));
    if (e.weight < 0.0)
      throw ValidationError("negative weight on edge " + edge_name(e.h, e.k));
    if (e.weight == 0.0)
      throw ValidationError("zero weight on edge " + edge_name(e.h, e.k));
  }
  std::sort(edges.begin(), edges.end(), [](const EdgeRef& a, const EdgeRef& b) {
    return a.h != b.h ? a.h < b.h : a.k < b.k;
  });
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (edges[i].h == edges[i - 1].h && edges[i].k == edges[i - 1].k)
      throw ValidationError("duplicate edge " + edge_name(edges[i].h, edges[i].k));
  }

  SparseAdjacency a;
  a.n_ = n;
  a.offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  a.cols_.reserve(edges.size());
  a.weights_.reserve(edges.size());
  for (const auto& e : edges) {
    ++a.offsets_[e.h + 1];
    a.cols_.push_back(e.k);
    a.weights_.push_back(e.weight);
  }
  std::partial_sum(a.offsets_.begin(), a.offsets_.end(), a.offsets_.begin());
  return a;
}

SparseAdjacency SparseAdjacency::from_csr(Index n, std::vector<Index> row_offsets,
                                          std::vector<Index> col_indices,
                                          std::vector<double> weights) {
  SparseAdjacency a;
  a.n_ = n;
  a.offsets_ = std::move(row_offsets);
  a.cols_ = std::move(col_indices);
  a.weights_ = std::move(weights);
  a.validate();
  return a;
}

SparseAdjacency SparseAdjacency::zeros(Index n) {
  if (n < 1) throw ValidationError("matrix order must be at least 1");
  SparseAdjacency a;
  a.n_ = n;
  a.offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  return a;
}

void SparseAdjacency::validate() const {
  if (n_ < 1) throw ValidationError("matrix order must be at least 1");
  if (offsets_.size() != static_cast<std::size_t>(n_) + 1 || offsets_.front() != 0 ||
      offsets_.back() != static_cast<Index>(cols_.size()) ||
      cols_.size() != weights_.size())
    throw ValidationError("inconsistent CSR array lengths");
  for (Index i = 0; i < n_; ++i) {
    if (offsets_[i + 1] < offsets_[i]) throw ValidationError("row offsets not monotone");
    for (Index j = offsets_[i]; j < offsets_[i + 1]; ++j) {
      const Index c = cols_[j];
      if (c < 0 || c >= n_) throw ValidationError("column index out of range");
      if (c == i) throw ValidationError("self-loop at node " + std::to_string(i));
      if (j > offsets_[i] && cols_[j - 1] >= c)
        throw ValidationError("columns unsorted or duplicated in row " + std::to_string(i));
      if (!(weights_[j] > 0.0) || !std::isfinite(weights_[j]))
        throw ValidationError("non-positive weight on edge " + edge_name(i, c));
    }
  }
}

std::optional<double> SparseAdjacency::weight(Index h, Index k) const {
  if (h < 0 || h >= n_ || k < 0 || k >= n_) return std::nullopt;
  const auto cols = row_cols(h);
  const auto it = std::lower_bound(cols.begin(), cols.end(), k);
  if (it == cols.end() || *it != k) return std::nullopt;
  return weights_[offsets_[h] + (it - cols.begin())];
}

std::vector<EdgeRef> SparseAdjacency::edges() const {
  std::vector<EdgeRef> out;
  out.reserve(cols_.size());
  for (Index i = 0; i < n_; ++i)
    for (Index j = offsets_[i]; j < offsets_[i + 1]; ++j)
      out.push_back({i, cols_[j], weights_[j]});
  return out;
}

SparseAdjacency SparseAdjacency::transpose() const {
  SparseAdjacency t;
  t.n_ = n_;
  t.offsets_.assign(static_cast<std::size_t>(n_) + 1, 0);
  for (Index c : cols_) ++t.offsets_[c + 1];
  std::partial_sum(t.offsets_.begin(), t.offsets_.end(), t.offsets_.begin());
  t.cols_.resize(cols_.size());
  t.weights_.resize(cols_.size());
  std::vector<Index> next(t.offsets_.begin(), t.offsets_.end() - 1);
  // Rows are visited in ascending order, so columns of the transpose come
  // out sorted.
  for (Index i = 0; i < n_; ++i) {
    for (Index j = offsets_[i]; j < offsets_[i + 1]; ++j) {
      const Index slot = next[cols_[j]]++;
      t.cols_[slot] = i;
      t.weights_[slot] = weights_[j];
    }
  }
  return t;
}

SparseAdjacency SparseAdjacency::with_weight(Index h, Index k, double w) const {
  if (!(w >= 0.0) || !std::isfinite(w))
    throw ValidationError("replacement weight must be finite and nonnegative");
  if (h < 0 || h >= n_) throw ValidationError("edge " + edge_name(h, k) + " does not exist");
  const auto cols = row_cols(h);
  const auto it = std::lower_bound(cols.begin(), cols.end(), k);
  if (it == cols.end() || *it != k)
    throw ValidationError("edge " + edge_name(h, k) + " does not exist");
  const Index pos = offsets_[h] + (it - cols.begin());

  SparseAdjacency out = *this;
  if (w > 0.0) {
    out.weights_[pos] = w;
    return out;
  }
  out.cols_.erase(out.cols_.begin() + pos);
  out.weights_.erase(out.weights_.begin() + pos);
  for (Index i = h + 1; i <= n_; ++i) --out.offsets_[i];
  return out;
}

void SparseAdjacency::multiply(std::span<const double> x, std::span<double> y) const {
  for (Index i = 0; i < n_; ++i) {
    double acc = 0.0;
    for (Index j = offsets_[i]; j < offsets_[i + 1]; ++j) acc += weights_[j] * x[cols_[j]];
    y[i] = acc;
  }
}

void SparseAdjacency::multiply_transpose(std::span<const double> x,
                                         std::span<double> y) const {
  std::fill(y.begin(), y.end(), 0.0);
  for (Index i = 0; i < n_; ++i) {
    const double xi = x[i];
    for (Index j = offsets_[i]; j < offsets_[i + 1]; ++j) y[cols_[j]] += weights_[j] * xi;
  }
}

double SparseAdjacency::frobenius_norm() const {
  double s = 0.0;
  for (double w : weights_) s += w * w;
  return std::sqrt(s);
}

double SparseAdjacency::norm_inf() const {
  double best = 0.0;
  for (Index i = 0; i < n_; ++i) {
    double s = 0.0;
    for (Index j = offsets_[i]; j < offsets_[i + 1]; ++j) s += weights_[j];
    best = std::max(best, s);
  }
  return best;
}

double SparseAdjacency::norm_one() const {
  std::vector<double> col(static_cast<std::size_t>(n_), 0.0);
  for (std::size_t j = 0; j < cols_.size(); ++j) col[cols_[j]] += weights_[j];
  return col.empty() ? 0.0 : *std::max_element(col.begin(), col.end());
}

bool SparseAdjacency::is_symmetric() const { return *this == transpose(); }

bool SparseAdjacency::is_tridiagonal() const {
  for (Index i = 0; i < n_; ++i)
    for (Index j = offsets_[i]; j < offsets_[i + 1]; ++j)
      if (cols_[j] != i - 1 && cols_[j] != i + 1) return false;
  return true;
}

SparseAdjacency add_scaled(const SparseAdjacency& a, double alpha,
                           const SparseAdjacency& b, double beta) {
  if (a.n() != b.n()) throw ValidationError("matrix dimensions differ");
  std::vector<EdgeRef> out;
  out.reserve(static_cast<std::size_t>(a.m() + b.m()));
  for (Index i = 0; i < a.n(); ++i) {
    const auto ac = a.row_cols(i), bc = b.row_cols(i);
    const auto aw = a.row_weights(i), bw = b.row_weights(i);
    std::size_t p = 0, q = 0;
    while (p < ac.size() || q < bc.size()) {
      Index col;
      double v = 0.0;
      if (q == bc.size() || (p < ac.size() && ac[p] < bc[q])) {
        col = ac[p];
        v = alpha * aw[p++];
      } else if (p == ac.size() || bc[q] < ac[p]) {
        col = bc[q];
        v = beta * bw[q++];
      } else {
        col = ac[p];
        v = alpha * aw[p++] + beta * bw[q++];
      }
      if (v < 0.0) throw ValidationError("linear combination produced a negative entry");
      if (v > 0.0) out.push_back({i, col, v});
    }
  }
  return SparseAdjacency::from_edges(a.n(), std::move(out));
}

SparseAdjacency scaled(const SparseAdjacency& a, double c) {
  if (!(c > 0.0)) throw ValidationError("scale factor must be positive");
  std::vector<double> w(a.weights().begin(), a.weights().end());
  for (double& x : w) x *= c;
  return SparseAdjacency::from_csr(
      a.n(), {a.row_offsets().begin(), a.row_offsets().end()},
      {a.col_indices().begin(), a.col_indices().end()}, std::move(w));
}

SparseAdjacency symmetrize(const SparseAdjacency& a) {
  return add_scaled(a, 0.5, a.transpose(), 0.5);
}

double relative_frobenius_distance(const SparseAdjacency& m1, const SparseAdjacency& m2) {
  if (m1.n() != m2.n()) throw ValidationError("matrix dimensions differ");
  const double denom = m1.frobenius_norm();
  if (denom == 0.0)
    throw NumericalError("relative distance undefined: reference matrix is zero");
  double s = 0.0;
  for (Index i = 0; i < m1.n(); ++i) {
    const auto ac = m1.row_cols(i), bc = m2.row_cols(i);
    const auto aw = m1.row_weights(i), bw = m2.row_weights(i);
    std::size_t p = 0, q = 0;
    while (p < ac.size() || q < bc.size()) {
      double d;
      if (q == bc.size() || (p < ac.size() && ac[p] < bc[q])) {
        d = aw[p++];
      } else if (p == ac.size() || bc[q] < ac[p]) {
        d = bw[q++];
      } else {
        d = aw[p++] - bw[q++];
      }
      s += d * d;
    }
  }
  return std::sqrt(s) / denom;
}

}  // namespace specrad

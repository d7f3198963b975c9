// Copyright 2026 The specrad Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace specrad {

using Index = std::int64_t;

/// A directed edge h -> k carrying the stored weight a_hk.
struct EdgeRef {
  Index h = 0;
  Index k = 0;
  double weight = 0.0;

  friend bool operator==(const EdgeRef&, const EdgeRef&) = default;
};

/// Nonnegative weighted adjacency matrix in compressed sparse row form.
///
/// Invariants, enforced by every constructor:
///   - n >= 1;
///   - every stored weight is finite and strictly positive;
///   - no self-loops, no duplicate (row, col) pairs;
///   - rows ascending, columns ascending within each row.
///
/// Instances are immutable; modifications return new matrices.
class SparseAdjacency {
 public:
  /// Builds a matrix from an arbitrary edge list. Throws ValidationError on
  /// any invariant violation (including duplicates and self-loops).
  static SparseAdjacency from_edges(Index n, std::vector<EdgeRef> edges);

  /// Builds directly from CSR arrays; the arrays are validated.
  static SparseAdjacency from_csr(Index n, std::vector<Index> row_offsets,
                                  std::vector<Index> col_indices,
                                  std::vector<double> weights);

  /// Empty (all-zero) matrix of order n.
  static SparseAdjacency zeros(Index n);

  Index n() const noexcept { return n_; }
  Index m() const noexcept { return static_cast<Index>(cols_.size()); }

  std::span<const Index> row_offsets() const noexcept { return offsets_; }
  std::span<const Index> col_indices() const noexcept { return cols_; }
  std::span<const double> weights() const noexcept { return weights_; }

  std::span<const Index> row_cols(Index row) const noexcept {
    return {cols_.data() + offsets_[row],
            static_cast<std::size_t>(offsets_[row + 1] - offsets_[row])};
  }
  std::span<const double> row_weights(Index row) const noexcept {
    return {weights_.data() + offsets_[row],
            static_cast<std::size_t>(offsets_[row + 1] - offsets_[row])};
  }

  /// a_hk, or nullopt when the edge is absent.
  std::optional<double> weight(Index h, Index k) const;
  bool has_edge(Index h, Index k) const { return weight(h, k).has_value(); }

  /// All edges in canonical (row, col) order.
  std::vector<EdgeRef> edges() const;

  SparseAdjacency transpose() const;

  /// Returns a copy with a_hk replaced by `w`; `w == 0` removes the edge.
  /// The edge must exist.
  SparseAdjacency with_weight(Index h, Index k, double w) const;
  SparseAdjacency without_edge(Index h, Index k) const {
    return with_weight(h, k, 0.0);
  }

  /// y = A x and y = A^T x.
  void multiply(std::span<const double> x, std::span<double> y) const;
  void multiply_transpose(std::span<const double> x, std::span<double> y) const;

  double frobenius_norm() const;
  /// Maximum absolute row sum.
  double norm_inf() const;
  /// Maximum absolute column sum.
  double norm_one() const;
  bool is_symmetric() const;
  /// True when every edge joins consecutive nodes (|h - k| == 1).
  bool is_tridiagonal() const;

  friend bool operator==(const SparseAdjacency&, const SparseAdjacency&) = default;

 private:
  SparseAdjacency() = default;
  void validate() const;

  Index n_ = 1;
  std::vector<Index> offsets_{0, 0};
  std::vector<Index> cols_;
  std::vector<double> weights_;
};

/// Result of a strongly-connected-component decomposition.
struct SccReport {
  Index component_count = 0;
  std::vector<Index> component_of;  // node -> component id, ids contiguous from 0
  bool is_irreducible = false;
};

/// Tarjan's algorithm (iterative). A 1x1 matrix is reported reducible.
SccReport strongly_connected_components(const SparseAdjacency& a);

/// Convenience wrapper: one component and n > 1.
bool is_irreducible(const SparseAdjacency& a);

/// (A + A^T) / 2.
SparseAdjacency symmetrize(const SparseAdjacency& a);

/// ||M1 - M2||_F / ||M1||_F. Throws ValidationError on dimension mismatch
/// and NumericalError when ||M1||_F == 0.
double relative_frobenius_distance(const SparseAdjacency& m1,
                                   const SparseAdjacency& m2);

/// Entrywise linear combination alpha*A + beta*B on the union pattern.
/// Entries that cancel to zero are dropped; negative results are an error.
SparseAdjacency add_scaled(const SparseAdjacency& a, double alpha,
                           const SparseAdjacency& b, double beta);

/// Same pattern, every weight multiplied by c > 0.
SparseAdjacency scaled(const SparseAdjacency& a, double c);

// ---------------------------------------------------------------------------
// File ingestion

enum class EdgeFormat { tsv, matrix_market };

struct LoadResult {
  SparseAdjacency matrix = SparseAdjacency::zeros(1);
  Index self_loops_dropped = 0;
};

/// Parses a whitespace separated "src dst [weight]" list ('#' and '%'
/// comments allowed) or a MatrixMarket coordinate file. Node count for TSV
/// input is the largest index seen plus one (after rebasing).
LoadResult load_edge_list(std::istream& in, EdgeFormat format, int index_base);

/// Opens `path` and dispatches to load_edge_list. Throws Error("file not
/// found: ...") when the file cannot be opened.
LoadResult load_edge_file(const std::string& path, EdgeFormat format,
                          int index_base);

/// Guesses the format from the extension (".mtx" -> MatrixMarket).
EdgeFormat format_from_path(const std::string& path);

/// Canonical writers. TSV always writes the weight column with 17
/// significant digits so that load(write(A)) == A.
void write_edge_list(std::ostream& out, const SparseAdjacency& a, int index_base);
void write_matrix_market(std::ostream& out, const SparseAdjacency& a);

}  // namespace specrad

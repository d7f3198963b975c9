// Copyright 2026 The specrad Authors.
// SPDX-License-Identifier: Apache-2.0

#include "specrad/perturbation.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "specrad/error.hpp"

namespace specrad {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

void check_unit_nonnegative(std::span<const double> x, const char* name) {
  const double nrm = std::sqrt(dot(x, x));
  if (std::abs(nrm - 1.0) > 1e-8)
    throw ValidationError(std::string(name) + " must have unit norm (got " +
                          std::to_string(nrm) + ")");
  for (double xi : x)
    if (xi < 0.0) throw ValidationError(std::string(name) + " has negative entries");
}

double checked_vu(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw ValidationError("Perron vectors differ in length");
  const double vu = dot(v, u);
  if (!(vu > 1e-14)) throw NumericalError("numerically defective Perron root: v^T u <= 1e-14");
  return vu;
}

// Super- and sub-diagonal means of an implicit matrix.
template <class Entry>
TridiagToeplitz band_means(Index n, Entry entry) {
  if (n < 2) throw ValidationError("Toeplitz projection needs n >= 2");
  double super = 0.0, sub = 0.0;
  for (Index i = 0; i + 1 < n; ++i) {
    super += entry(i, i + 1);
    sub += entry(i + 1, i);
  }
  const double count = static_cast<double>(n - 1);
  return {n, sub / count, super / count};
}

TridiagToeplitz normalized_band(TridiagToeplitz t) {
  const double f = t.frobenius_norm();
  if (!(f > 0.0)) throw NumericalError("Toeplitz projection is zero");
  t.t_sub /= f;
  t.t_super /= f;
  if (!(t.t_sub > 0.0) || !(t.t_super > 0.0))
    throw NumericalError("Toeplitz projection has a zero diagonal; it leaves the cone");
  return t;
}

}  // namespace

std::string to_string(PerturbationKind kind) {
  switch (kind) {
    case PerturbationKind::wilkinson: return "wilkinson";
    case PerturbationKind::sparsity_structured: return "sparsity_structured";
    case PerturbationKind::toeplitz_structured: return "toeplitz_structured";
    case PerturbationKind::ones: return "ones";
    case PerturbationKind::ones_sparsity_structured: return "ones_sparsity_structured";
  }
  return "unknown";
}

PerturbationKind parse_perturbation_kind(const std::string& name) {
  for (auto k : {PerturbationKind::wilkinson, PerturbationKind::sparsity_structured,
                 PerturbationKind::toeplitz_structured, PerturbationKind::ones,
                 PerturbationKind::ones_sparsity_structured})
    if (to_string(k) == name) return k;
  if (name == "sparsity") return PerturbationKind::sparsity_structured;
  if (name == "toeplitz") return PerturbationKind::toeplitz_structured;
  if (name == "ones-sparsity") return PerturbationKind::ones_sparsity_structured;
  throw ValidationError("unknown perturbation kind '" + name + "'");
}

void PerturbationSpec::validate() const {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
    throw ValidationError("perturbation size epsilon must be finite and nonnegative");
}

RankOnePerturbation::RankOnePerturbation(std::vector<double> left, std::vector<double> right)
    : left_(std::move(left)), right_(std::move(right)) {
  if (left_.size() != right_.size() || left_.empty())
    throw ValidationError("rank-one factors must be nonempty and equally long");
}

void RankOnePerturbation::apply(std::span<const double> x, std::span<double> y) const {
  const double s = dot(right_, x);
  for (std::size_t i = 0; i < left_.size(); ++i) y[i] = left_[i] * s;
}

void RankOnePerturbation::apply_transpose(std::span<const double> x, std::span<double> y) const {
  const double s = dot(left_, x);
  for (std::size_t i = 0; i < right_.size(); ++i) y[i] = right_[i] * s;
}

double RankOnePerturbation::norm() const {
  return std::sqrt(dot(left_, left_)) * std::sqrt(dot(right_, right_));
}

RankOnePerturbation wilkinson_matrix(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw ValidationError("Perron vectors differ in length");
  check_unit_nonnegative(u, "u");
  check_unit_nonnegative(v, "v");
  return {{v.begin(), v.end()}, {u.begin(), u.end()}};
}

SparseAdjacency project_to_sparsity(const RankOnePerturbation& e, const SparseAdjacency& pattern) {
  if (static_cast<Index>(e.size()) != pattern.n())
    throw ValidationError("perturbation and pattern dimensions differ");
  if (pattern.m() == 0) throw ValidationError("sparsity pattern is empty");
  std::vector<double> w(static_cast<std::size_t>(pattern.m()));
  double sq = 0.0;
  for (Index i = 0; i < pattern.n(); ++i) {
    for (Index j = pattern.row_offsets()[i]; j < pattern.row_offsets()[i + 1]; ++j) {
      w[j] = e.entry(i, pattern.col_indices()[j]);
      sq += w[j] * w[j];
    }
  }
  if (!(sq > 0.0)) throw NumericalError("projection onto the sparsity pattern is zero");
  const double f = std::sqrt(sq);
  for (double& x : w) x /= f;
  for (double x : w)
    if (!(x > 0.0))
      throw NumericalError("projected perturbation has zero entries on the pattern");
  return SparseAdjacency::from_csr(
      pattern.n(), {pattern.row_offsets().begin(), pattern.row_offsets().end()},
      {pattern.col_indices().begin(), pattern.col_indices().end()}, std::move(w));
}

TridiagToeplitz project_to_toeplitz(const RankOnePerturbation& e) {
  return normalized_band(
      band_means(static_cast<Index>(e.size()), [&](Index i, Index j) { return e.entry(i, j); }));
}

TridiagToeplitz project_to_toeplitz(const SparseAdjacency& m) {
  return normalized_band(
      band_means(m.n(), [&](Index i, Index j) { return m.weight(i, j).value_or(0.0); }));
}

RankOnePerturbation ones_substitute(Index n) {
  if (n < 1) throw ValidationError("order must be at least 1");
  std::vector<double> e(static_cast<std::size_t>(n), 1.0 / std::sqrt(static_cast<double>(n)));
  return {e, e};
}

SparseAdjacency ones_substitute(const SparseAdjacency& pattern) {
  if (pattern.m() == 0) throw ValidationError("sparsity pattern is empty");
  std::vector<double> w(static_cast<std::size_t>(pattern.m()),
                        1.0 / std::sqrt(static_cast<double>(pattern.m())));
  return SparseAdjacency::from_csr(
      pattern.n(), {pattern.row_offsets().begin(), pattern.row_offsets().end()},
      {pattern.col_indices().begin(), pattern.col_indices().end()}, std::move(w));
}

double structured_condition_number(std::span<const double> u, std::span<const double> v) {
  return 1.0 / checked_vu(u, v);
}

double structured_condition_number(std::span<const double> u, std::span<const double> v,
                                   const SparseAdjacency& pattern) {
  const double vu = checked_vu(u, v);
  if (static_cast<Index>(u.size()) != pattern.n())
    throw ValidationError("pattern and vector dimensions differ");
  double sq = 0.0;
  for (Index i = 0; i < pattern.n(); ++i)
    for (Index k : pattern.row_cols(i)) sq += (v[i] * u[k]) * (v[i] * u[k]);
  return std::sqrt(sq) / vu;
}

double toeplitz_condition_number(std::span<const double> u, std::span<const double> v) {
  const double vu = checked_vu(u, v);
  const Index n = static_cast<Index>(u.size());
  const auto t = band_means(n, [&](Index i, Index j) { return v[i] * u[j]; });
  return t.frobenius_norm() / vu;
}

Perturbation build_perturbation(const SparseAdjacency& a, const PerronPair& base,
                                PerturbationKind kind) {
  switch (kind) {
    case PerturbationKind::wilkinson: return wilkinson_matrix(base.u, base.v);
    case PerturbationKind::sparsity_structured:
      return project_to_sparsity(wilkinson_matrix(base.u, base.v), a);
    case PerturbationKind::toeplitz_structured:
      return project_to_toeplitz(wilkinson_matrix(base.u, base.v));
    case PerturbationKind::ones: return ones_substitute(a.n());
    case PerturbationKind::ones_sparsity_structured: return ones_substitute(a);
  }
  throw ValidationError("unknown perturbation kind");
}

double perturbation_entry(const Perturbation& e, Index i, Index j) {
  return std::visit(overloaded{
                        [&](const RankOnePerturbation& r) { return r.entry(i, j); },
                        [&](const SparseAdjacency& s) { return s.weight(i, j).value_or(0.0); },
                        [&](const TridiagToeplitz& t) {
                          if (j == i + 1) return t.t_super;
                          if (j + 1 == i) return t.t_sub;
                          return 0.0;
                        },
                    },
                    e);
}

double directional_sensitivity(const Perturbation& e, const PerronPair& base) {
  const double vu = checked_vu(base.u, base.v);
  const auto& u = base.u;
  const auto& v = base.v;
  const double vEu = std::visit(
      overloaded{
          [&](const RankOnePerturbation& r) { return dot(v, r.left()) * dot(r.right(), u); },
          [&](const SparseAdjacency& s) {
            double acc = 0.0;
            for (Index i = 0; i < s.n(); ++i) {
              const auto cols = s.row_cols(i);
              const auto w = s.row_weights(i);
              for (std::size_t p = 0; p < cols.size(); ++p) acc += v[i] * w[p] * u[cols[p]];
            }
            return acc;
          },
          [&](const TridiagToeplitz& t) {
            double acc = 0.0;
            for (Index i = 0; i + 1 < t.n; ++i)
              acc += t.t_super * v[i] * u[i + 1] + t.t_sub * v[i + 1] * u[i];
            return acc;
          },
      },
      e);
  return vEu / vu;
}

PerturbedPerron perturbed_perron(const SparseAdjacency& a, const PerronPair& base,
                                 const PerturbationSpec& spec, const SolverOptions& opts) {
  spec.validate();
  if (base.u.size() != static_cast<std::size_t>(a.n()))
    throw ValidationError("base Perron pair does not match the matrix");

  PerturbedPerron out;
  auto& r = out.report;
  r.kind = spec.kind;
  r.epsilon = spec.epsilon;
  r.rho = base.rho;
  r.kappa_plain = structured_condition_number(base.u, base.v);
  switch (spec.kind) {
    case PerturbationKind::wilkinson:
    case PerturbationKind::ones: r.kappa_structured = r.kappa_plain; break;
    case PerturbationKind::sparsity_structured:
    case PerturbationKind::ones_sparsity_structured:
      r.kappa_structured = structured_condition_number(base.u, base.v, a);
      break;
    case PerturbationKind::toeplitz_structured:
      r.kappa_structured = toeplitz_condition_number(base.u, base.v);
      break;
  }

  const Perturbation e = build_perturbation(a, base, spec.kind);
  r.sensitivity = directional_sensitivity(e, base);
  r.predicted_increase = spec.epsilon * r.sensitivity;

  if (spec.epsilon == 0.0) {
    out.pair = base;
    r.rho_perturbed = base.rho;
    r.measured_increase = 0.0;
    return out;
  }

  const double eps = spec.epsilon;
  if (const auto* rank1 = std::get_if<RankOnePerturbation>(&e)) {
    auto op = make_operator(a, opts.threads);
    LinearOperator sum;
    sum.n = op.n;
    double max_left = 0.0, right_sum = 0.0;
    for (double x : rank1->left()) max_left = std::max(max_left, std::abs(x));
    for (double x : rank1->right()) right_sum += std::abs(x);
    sum.norm_inf = op.norm_inf + eps * max_left * right_sum;
    // Products are A x + eps * left (right^T x).
    sum.apply = [op, rank1 = *rank1, eps](std::span<const double> x, std::span<double> y) {
      op.apply(x, y);
      const double s = dot(rank1.right(), x);
      for (std::size_t i = 0; i < y.size(); ++i) y[i] += eps * s * rank1.left()[i];
    };
    sum.apply_transpose = [op, rank1 = *rank1, eps](std::span<const double> x,
                                                    std::span<double> y) {
      op.apply_transpose(x, y);
      const double s = dot(rank1.left(), x);
      for (std::size_t i = 0; i < y.size(); ++i) y[i] += eps * s * rank1.right()[i];
    };
    out.pair = perron_pair(sum, opts);
  } else if (const auto* sparse = std::get_if<SparseAdjacency>(&e)) {
    out.pair = perron_pair(add_scaled(a, 1.0, *sparse, eps), opts);
  } else {
    const auto& band = std::get<TridiagToeplitz>(e);
    SparseAdjacency band_matrix = band.to_sparse();
    if (band.n != a.n()) throw ValidationError("Toeplitz perturbation dimension mismatch");
    out.pair = perron_pair(add_scaled(a, 1.0, band_matrix, eps), opts);
  }
  r.rho_perturbed = out.pair.rho;
  r.measured_increase = out.pair.rho - base.rho;
  return out;
}

PerturbedPerron perturbed_perron(const SparseAdjacency& a, const PerturbationSpec& spec,
                                 const SolverOptions& opts) {
  return perturbed_perron(a, perron_pair(a, opts), spec, opts);
}

void write_log10_heatmap(std::ostream& out, const Perturbation& e, Index n) {
  if (n < 1 || n > 2000) throw ValidationError("heatmap export supports 1 <= n <= 2000");
  char buf[40];
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const double x = std::abs(perturbation_entry(e, i, j));
      if (j) out << ',';
      if (x == 0.0) {
        out << "-inf";
      } else {
        std::snprintf(buf, sizeof buf, "%.10g", std::log10(x));
        out << buf;
      }
    }
    out << '\n';
  }
}

}  // namespace specrad

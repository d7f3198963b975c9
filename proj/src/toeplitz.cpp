// Copyright 2026 The specrad Authors.
// SPDX-License-Identifier: Apache-2.0

#include "specrad/toeplitz.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "specrad/error.hpp"

namespace specrad {

namespace {

double log_sum_exp2(const std::vector<double>& logs) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : logs) m = std::max(m, 2.0 * x);
  double s = 0.0;
  for (double x : logs) s += std::exp(2.0 * x - m);
  return 0.5 * (m + std::log(s));
}

}  // namespace

void TridiagToeplitz::validate() const {
  if (n < 2) throw ValidationError("tridiagonal Toeplitz order must be at least 2");
  if (!(t_sub > 0.0) || !(t_super > 0.0) || !std::isfinite(t_sub) || !std::isfinite(t_super))
    throw ValidationError("Toeplitz off-diagonal values must be positive and finite");
}

SparseAdjacency TridiagToeplitz::to_sparse() const {
  validate();
  std::vector<EdgeRef> edges;
  edges.reserve(static_cast<std::size_t>(2 * (n - 1)));
  for (Index i = 0; i + 1 < n; ++i) {
    edges.push_back({i, i + 1, t_super});
    edges.push_back({i + 1, i, t_sub});
  }
  return SparseAdjacency::from_edges(n, std::move(edges));
}

double TridiagToeplitz::frobenius_norm() const {
  return std::sqrt(static_cast<double>(n - 1) * (t_sub * t_sub + t_super * t_super));
}

void MaskChain::validate() const {
  if (w_in.size() != w_out.size()) throw ValidationError("w_in and w_out lengths differ");
  if (w_in.size() < 2) throw ValidationError("mask chain needs at least 2 people");
  for (std::size_t i = 0; i < w_in.size(); ++i) {
    for (double w : {w_in[i], w_out[i]})
      if (!(w > 0.0 && w <= 1.0))
        throw ValidationError("mask penetration fractions must lie in (0, 1] (person " +
                              std::to_string(i + 1) + ")");
  }
}

PerronPair toeplitz_perron(const TridiagToeplitz& t) {
  t.validate();
  const Index n = t.n;
  const double theta = std::numbers::pi / static_cast<double>(n + 1);
  const double half_log_ratio = 0.5 * (std::log(t.t_sub) - std::log(t.t_super));

  std::vector<double> log_u(n), log_v(n), log_s(n);
  for (Index k = 1; k <= n; ++k) {
    const double ls = std::log(std::sin(static_cast<double>(k) * theta));
    log_s[k - 1] = ls;
    log_u[k - 1] = static_cast<double>(k) * half_log_ratio + ls;
    log_v[k - 1] = -static_cast<double>(k) * half_log_ratio + ls;
  }
  const double log_nu = log_sum_exp2(log_u);
  const double log_nv = log_sum_exp2(log_v);
  const double log_ns = log_sum_exp2(log_s);

  PerronPair p;
  p.rho = 2.0 * std::sqrt(t.t_sub) * std::sqrt(t.t_super) * std::cos(theta);
  p.u.resize(n);
  p.v.resize(n);
  for (Index i = 0; i < n; ++i) {
    p.u[i] = std::exp(log_u[i] - log_nu);
    p.v[i] = std::exp(log_v[i] - log_nv);
  }
  // Unnormalized v^T u = sum sin^2 = ||s||^2.
  p.kappa = std::exp(log_nu + log_nv - 2.0 * log_ns);
  p.converged = true;
  p.iterations = 0;
  p.path = SolverPath::closed_form;

  double rr = 0.0, rl = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double left_u = i > 0 ? p.u[i - 1] : 0.0, right_u = i + 1 < n ? p.u[i + 1] : 0.0;
    const double left_v = i > 0 ? p.v[i - 1] : 0.0, right_v = i + 1 < n ? p.v[i + 1] : 0.0;
    const double au = t.t_sub * left_u + t.t_super * right_u;
    const double atv = t.t_super * left_v + t.t_sub * right_v;
    rr += (au - p.rho * p.u[i]) * (au - p.rho * p.u[i]);
    rl += (atv - p.rho * p.v[i]) * (atv - p.rho * p.v[i]);
  }
  p.residual_right = std::sqrt(rr);
  p.residual_left = std::sqrt(rl);
  return p;
}

double symmetrized_toeplitz_perron(const TridiagToeplitz& t) {
  t.validate();
  return (t.t_sub + t.t_super) * std::cos(std::numbers::pi / static_cast<double>(t.n + 1));
}

SparseAdjacency build_mask_chain(const MaskChain& chain) {
  chain.validate();
  const Index n = static_cast<Index>(chain.w_in.size());
  std::vector<EdgeRef> edges;
  edges.reserve(static_cast<std::size_t>(2 * (n - 1)));
  for (Index i = 0; i + 1 < n; ++i) {
    edges.push_back({i, i + 1, chain.w_in[i] * chain.w_out[i + 1]});
    edges.push_back({i + 1, i, chain.w_in[i + 1] * chain.w_out[i]});
  }
  return SparseAdjacency::from_edges(n, std::move(edges));
}

TridiagToeplitz project_to_toeplitz_cone(const SparseAdjacency& a) {
  if (a.n() < 2) throw ValidationError("projection needs order >= 2");
  double super_sum = 0.0, sub_sum = 0.0;
  for (Index i = 0; i + 1 < a.n(); ++i) {
    super_sum += a.weight(i, i + 1).value_or(0.0);
    sub_sum += a.weight(i + 1, i).value_or(0.0);
  }
  const double count = static_cast<double>(a.n() - 1);
  TridiagToeplitz t{a.n(), sub_sum / count, super_sum / count};
  if (!(t.t_sub > 0.0) || !(t.t_super > 0.0))
    throw NumericalError("projection leaves the cone: a diagonal averages to zero");
  return t;
}

SparseAdjacency make_circulant(const TridiagToeplitz& t) {
  t.validate();
  if (t.n < 3) throw ValidationError("circulant completion needs n >= 3");
  auto edges = t.to_sparse().edges();
  edges.push_back({t.n - 1, 0, t.t_super});
  edges.push_back({0, t.n - 1, t.t_sub});
  return SparseAdjacency::from_edges(t.n, std::move(edges));
}

SparseAdjacency tridiagonal_part(const SparseAdjacency& a) {
  std::vector<EdgeRef> kept;
  for (const auto& e : a.edges())
    if (e.k == e.h + 1 || e.k + 1 == e.h) kept.push_back(e);
  return SparseAdjacency::from_edges(a.n(), std::move(kept));
}

}  // namespace specrad

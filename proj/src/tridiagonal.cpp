// Copyright 2026 The specrad Authors.
// SPDX-License-Identifier: Apache-2.0

// Symmetric tridiagonal kernels: Sturm bisection, inverse iteration, and the
// diagonal-similarity route for irreducible nonnegative tridiagonal matrices.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "specrad/eigen_engine.hpp"

namespace specrad {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Bounds {
  double lo;
  double hi;
};

Bounds gershgorin(const SymTridiagonal& t) {
  const std::size_t n = t.size();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(t.offdiag[i - 1]);
    if (i + 1 < n) r += std::abs(t.offdiag[i]);
    lo = std::min(lo, t.diag[i] - r);
    hi = std::max(hi, t.diag[i] + r);
  }
  return {lo, hi};
}

double pivot_floor(const SymTridiagonal& t) {
  double m = 1.0;
  for (double e : t.offdiag) m = std::max(m, e * e);
  return std::numeric_limits<double>::min() * m;
}

std::size_t count_below(const SymTridiagonal& t, double x, double pivmin) {
  std::size_t count = 0;
  double q = t.diag[0] - x;
  if (std::abs(q) < pivmin) q = -pivmin;
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < t.size(); ++i) {
    const double e = t.offdiag[i - 1];
    q = t.diag[i] - x - e * e / q;
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0.0) ++count;
  }
  return count;
}

// k-th smallest eigenvalue (0-based) by bisection down to adjacent doubles.
double bisect(const SymTridiagonal& t, std::size_t k, Bounds b, double pivmin) {
  const double pad = kEps * std::max({1.0, std::abs(b.lo), std::abs(b.hi)}) * 4.0;
  double lo = b.lo - pad, hi = b.hi + pad;
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (count_below(t, mid, pivmin) > k)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

// Solves (T - shift I) x = b for symmetric tridiagonal T using Gaussian
// elimination with partial pivoting; exact zero pivots are nudged.
std::vector<double> shifted_solve(const SymTridiagonal& t, double shift,
                                  std::vector<double> b) {
  const std::size_t n = t.size();
  std::vector<double> d(n), du(n, 0.0), du2(n, 0.0), dl(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) d[i] = t.diag[i] - shift;
  for (std::size_t i = 0; i + 1 < n; ++i) du[i] = dl[i] = t.offdiag[i];
  const double tiny = kEps * std::max(1.0, gershgorin(t).hi - gershgorin(t).lo);

  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      if (d[i] == 0.0) d[i] = tiny;
      const double f = dl[i] / d[i];
      d[i + 1] -= f * du[i];
      b[i + 1] -= f * b[i];
      dl[i] = 0.0;
    } else {
      const double f = d[i] / dl[i];
      d[i] = dl[i];
      const double tmp = d[i + 1];
      d[i + 1] = du[i] - f * tmp;
      du[i] = tmp;
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -f * du2[i];
      }
      std::swap(b[i], b[i + 1]);
      b[i + 1] -= f * b[i];
    }
  }
  if (d[n - 1] == 0.0) d[n - 1] = tiny;
  b[n - 1] /= d[n - 1];
  if (n > 1) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
  for (std::size_t i = n; i-- > 2;) {
    const std::size_t r = i - 2;
    b[r] = (b[r] - du[r] * b[r + 1] - du2[r] * b[r + 2]) / d[r];
  }
  return b;
}

// log(sum(exp(x_i))) over finite x_i; -inf when all are -inf.
double log_sum_exp(const std::vector<double>& x) {
  double m = -std::numeric_limits<double>::infinity();
  for (double xi : x) m = std::max(m, xi);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double xi : x) s += std::exp(xi - m);
  return m + std::log(s);
}

// Unit vector with entries exp(log_entries), computed without overflow.
// Returns log of the unnormalized 2-norm.
double unit_from_logs(const std::vector<double>& log_entries, std::vector<double>& out) {
  std::vector<double> twice(log_entries.size());
  for (std::size_t i = 0; i < log_entries.size(); ++i) twice[i] = 2.0 * log_entries[i];
  const double log_norm = 0.5 * log_sum_exp(twice);
  out.resize(log_entries.size());
  for (std::size_t i = 0; i < log_entries.size(); ++i)
    out[i] = std::exp(log_entries[i] - log_norm);
  return log_norm;
}

}  // namespace

double SymTridiagonal::frobenius_norm() const {
  double s = 0.0;
  for (double d : diag) s += d * d;
  for (double e : offdiag) s += 2.0 * e * e;
  return std::sqrt(s);
}

void SymTridiagonal::validate() const {
  if (diag.empty()) throw ValidationError("tridiagonal matrix must have order >= 1");
  if (offdiag.size() + 1 != diag.size())
    throw ValidationError("off-diagonal must have length n - 1");
  for (double x : diag)
    if (!std::isfinite(x)) throw ValidationError("non-finite diagonal entry");
  for (double x : offdiag)
    if (!std::isfinite(x)) throw ValidationError("non-finite off-diagonal entry");
}

std::size_t sturm_count(const SymTridiagonal& t, double x) {
  t.validate();
  return count_below(t, x, pivot_floor(t));
}

std::vector<double> sturm_tridiag_eigenvalues(std::span<const double> diag,
                                              std::span<const double> offdiag) {
  SymTridiagonal t{{diag.begin(), diag.end()}, {offdiag.begin(), offdiag.end()}};
  t.validate();
  const Bounds b = gershgorin(t);
  const double pivmin = pivot_floor(t);
  std::vector<double> out(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) out[k] = bisect(t, k, b, pivmin);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

double largest_tridiag_eigenvalue(const SymTridiagonal& t) {
  t.validate();
  return bisect(t, t.size() - 1, gershgorin(t), pivot_floor(t));
}

SpectralDistance bhatia_spectral_distance(const SymTridiagonal& m1, const SymTridiagonal& m2) {
  m1.validate();
  m2.validate();
  if (m1.size() != m2.size()) throw ValidationError("matrix dimensions differ");
  const double ref = m1.frobenius_norm();
  if (ref == 0.0) throw NumericalError("relative distance undefined: reference matrix is zero");

  const auto l1 = sturm_tridiag_eigenvalues(m1.diag, m1.offdiag);
  const auto l2 = sturm_tridiag_eigenvalues(m2.diag, m2.offdiag);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < l1.size(); ++i) {
    num += (l1[i] - l2[i]) * (l1[i] - l2[i]);
    den += l1[i] * l1[i];
  }
  double diff = 0.0;
  for (std::size_t i = 0; i < m1.size(); ++i)
    diff += (m1.diag[i] - m2.diag[i]) * (m1.diag[i] - m2.diag[i]);
  for (std::size_t i = 0; i + 1 < m1.size(); ++i)
    diff += 2.0 * (m1.offdiag[i] - m2.offdiag[i]) * (m1.offdiag[i] - m2.offdiag[i]);
  return {std::sqrt(num) / std::sqrt(den), std::sqrt(diff) / ref};
}

namespace detail {

// A = D S D^{-1} with S symmetric tridiagonal, s_i = sqrt(a_{i,i+1} a_{i+1,i})
// and d_{i+1} / d_i = sqrt(a_{i+1,i} / a_{i,i+1}). Then u = D w and
// v = D^{-1} w for the Perron vector w of S. The scaling is carried in log
// space, so ratios far from one do not overflow.
std::optional<PerronPair> tridiagonal_perron(const SparseAdjacency& a,
                                             const SolverOptions& opts) {
  const Index n = a.n();
  if (n < 2 || a.m() != 2 * (n - 1) || !a.is_tridiagonal()) return std::nullopt;

  SymTridiagonal s{std::vector<double>(n, 0.0), std::vector<double>(n - 1)};
  std::vector<double> log_d(n, 0.0);
  for (Index i = 0; i + 1 < n; ++i) {
    const double up = *a.weight(i, i + 1);
    const double down = *a.weight(i + 1, i);
    s.offdiag[i] = std::sqrt(up) * std::sqrt(down);
    log_d[i + 1] = log_d[i] + 0.5 * (std::log(down) - std::log(up));
  }

  const double rho = largest_tridiag_eigenvalue(s);
  std::vector<double> w(n, 1.0);
  std::size_t steps = 0;
  for (; steps < 4; ++steps) {
    w = shifted_solve(s, rho, std::move(w));
    double nrm = 0.0;
    for (double x : w) nrm += x * x;
    nrm = std::sqrt(nrm);
    if (!(nrm > 0.0) || !std::isfinite(nrm)) return std::nullopt;
    double sign = 0.0;
    for (double x : w) sign += x;
    for (double& x : w) x = (sign < 0.0 ? -x : x) / nrm;
  }

  std::vector<double> log_u(n), log_v(n), log_w(n);
  for (Index i = 0; i < n; ++i) {
    const double lw = w[i] > 0.0 ? std::log(w[i]) : -std::numeric_limits<double>::infinity();
    log_w[i] = lw;
    log_u[i] = log_d[i] + lw;
    log_v[i] = lw - log_d[i];
  }

  PerronPair pair;
  pair.rho = rho;
  const double log_norm_u = unit_from_logs(log_u, pair.u);
  const double log_norm_v = unit_from_logs(log_v, pair.v);
  std::vector<double> tmp;
  const double log_norm_w = unit_from_logs(log_w, tmp);
  // v^T u = ||w||^2 / (||Dw|| ||D^{-1}w||).
  pair.kappa = std::exp(log_norm_u + log_norm_v - 2.0 * log_norm_w);
  pair.iterations = steps;
  pair.path = SolverPath::tridiagonal;

  std::vector<double> au(n), atv(n);
  a.multiply(pair.u, au);
  a.multiply_transpose(pair.v, atv);
  double rr = 0.0, rl = 0.0;
  for (Index i = 0; i < n; ++i) {
    rr += (au[i] - rho * pair.u[i]) * (au[i] - rho * pair.u[i]);
    rl += (atv[i] - rho * pair.v[i]) * (atv[i] - rho * pair.v[i]);
  }
  pair.residual_right = std::sqrt(rr);
  pair.residual_left = std::sqrt(rl);
  const double bound = opts.tol * std::max(1.0, rho);
  pair.converged = pair.residual_right <= bound && pair.residual_left <= bound;
  if (!pair.converged) return std::nullopt;
  return pair;
}

}  // namespace detail

}  // namespace specrad

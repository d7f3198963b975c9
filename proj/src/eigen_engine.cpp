// Copyright 2026 The specrad Authors.
// SPDX-License-Identifier: Apache-2.0

#include "specrad/eigen_engine.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>

#include "specrad/parallel.hpp"

namespace specrad {

namespace detail {
// Defined in tridiagonal.cpp; nullopt when the route does not apply.
std::optional<PerronPair> tridiagonal_perron(const SparseAdjacency& a,
                                             const SolverOptions& opts);
}  // namespace detail

namespace {

using Vec = std::vector<double>;
using Apply = std::function<void(std::span<const double>, std::span<double>)>;

constexpr std::size_t kStallWindow = 50;
constexpr double kStallImprovement = 0.99;

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double residual(std::span<const double> ax, std::span<const double> x, double theta) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = ax[i] - theta * x[i];
    s += r * r;
  }
  return std::sqrt(s);
}

// Largest-magnitude entry positive, then tiny negatives clamped to zero.
void normalize_sign(Vec& x) {
  std::size_t arg = 0;
  for (std::size_t i = 1; i < x.size(); ++i)
    if (std::abs(x[i]) > std::abs(x[arg])) arg = i;
  if (!x.empty() && x[arg] < 0.0)
    for (double& xi : x) xi = -xi;
  for (double& xi : x)
    if (xi < 0.0 && xi >= -1e-13) xi = 0.0;
  const double nrm = norm2(x);
  if (nrm > 0.0)
    for (double& xi : x) xi /= nrm;
}

struct SideResult {
  Vec x;
  double theta = 0.0;
  double residual = std::numeric_limits<double>::infinity();
  std::size_t iterations = 0;
  bool converged = false;
  bool used_arnoldi = false;
};

class SideSolver {
 public:
  SideSolver(const Apply& apply, std::size_t n, double shift, const SolverOptions& opts)
      : apply_(apply), n_(n), shift_(shift), opts_(opts) {}

  SideResult run() {
    Vec x(n_, 1.0 / std::sqrt(static_cast<double>(n_)));
    if (power_phase(x)) return best_;
    best_.used_arnoldi = true;
    arnoldi_phase(x);
    return best_;
  }

 private:
  double target(double theta) const { return 0.5 * opts_.tol * std::max(1.0, std::abs(theta)); }

  // Evaluates x (unit norm) and records it when it improves the best residual.
  bool record(const Vec& x, const Vec& ax) {
    const double theta = dot(x, ax);
    const double res = residual(ax, x, theta);
    if (!std::isfinite(theta) || !std::isfinite(res))
      throw NumericalError("non-finite value during Perron iteration");
    last_residual_ = res;
    if (res < best_.residual) {
      best_.x = x;
      best_.theta = theta;
      best_.residual = res;
    }
    if (res <= target(theta)) {
      best_.x = x;
      best_.theta = theta;
      best_.residual = res;
      best_.converged = true;
    }
    return best_.converged;
  }

  bool power_phase(Vec& x) {
    Vec y(n_);
    double checkpoint = std::numeric_limits<double>::infinity();
    while (best_.iterations < opts_.max_iterations) {
      apply_(x, y);
      ++best_.iterations;
      if (record(x, y)) return true;
      if (best_.iterations % kStallWindow == 0) {
        if (last_residual_ > kStallImprovement * checkpoint) return false;
        checkpoint = last_residual_;
      }
      for (std::size_t i = 0; i < n_; ++i) y[i] += shift_ * x[i];
      const double nrm = norm2(y);
      if (nrm == 0.0) return false;
      for (std::size_t i = 0; i < n_; ++i) x[i] = y[i] / nrm;
    }
    return false;
  }

  void arnoldi_phase(Vec x) {
    std::size_t m = std::min<std::size_t>(opts_.subspace_dim, n_);
    const std::size_t m_cap = std::min<std::size_t>(n_, 8 * opts_.subspace_dim);
    double previous = std::numeric_limits<double>::infinity();
    int slow_cycles = 0;
    Vec ax(n_);

    while (best_.iterations < opts_.max_iterations) {
      // Arnoldi factorization A V_j = V_{j+1} H_j with twice-applied
      // modified Gram-Schmidt.
      Eigen::MatrixXd basis(n_, m + 1);
      Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(m + 1, m);
      basis.col(0) = Eigen::Map<const Eigen::VectorXd>(x.data(), n_).normalized();
      std::size_t steps = m;
      Vec w(n_);
      for (std::size_t j = 0; j < m; ++j) {
        if (best_.iterations >= opts_.max_iterations) {
          steps = j;
          break;
        }
        apply_({basis.col(j).data(), n_}, w);
        ++best_.iterations;
        Eigen::Map<Eigen::VectorXd> wv(w.data(), n_);
        const double wnorm0 = wv.norm();
        for (int pass = 0; pass < 2; ++pass) {
          for (std::size_t i = 0; i <= j; ++i) {
            const double h = basis.col(i).dot(wv);
            hess(i, j) += h;
            wv -= h * basis.col(i);
          }
        }
        const double h_next = wv.norm();
        hess(j + 1, j) = h_next;
        if (h_next <= 1e-14 * std::max(wnorm0, 1e-300)) {
          steps = j + 1;  // invariant subspace found
          break;
        }
        basis.col(j + 1) = wv / h_next;
      }
      if (steps == 0) break;

      Eigen::EigenSolver<Eigen::MatrixXd> es(hess.topLeftCorner(steps, steps));
      if (es.info() != Eigen::Success) throw NumericalError("Hessenberg eigensolve failed");
      Eigen::Index pick = 0;
      for (Eigen::Index i = 1; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()[i].real() > es.eigenvalues()[pick].real()) pick = i;
      Eigen::VectorXd s = es.eigenvectors().col(pick).real();
      if (s.norm() == 0.0) s = es.eigenvectors().col(pick).imag();
      Eigen::VectorXd y = basis.leftCols(steps) * s;
      if (y.sum() < 0.0) y = -y;
      const double ynorm = y.norm();
      if (!(ynorm > 0.0)) throw NumericalError("Arnoldi produced a zero Ritz vector");
      y /= ynorm;
      x.assign(y.data(), y.data() + n_);

      if (best_.iterations >= opts_.max_iterations) break;
      apply_(x, ax);
      ++best_.iterations;
      if (record(x, ax)) return;

      if (last_residual_ > kStallImprovement * previous) {
        if (++slow_cycles >= 5 && m < m_cap) {
          m = std::min(m_cap, 2 * m);
          slow_cycles = 0;
        }
      } else {
        slow_cycles = 0;
      }
      previous = last_residual_;
    }
  }

  const Apply& apply_;
  std::size_t n_;
  double shift_;
  const SolverOptions& opts_;
  SideResult best_;
  double last_residual_ = std::numeric_limits<double>::infinity();
};

PerronPair trivial_pair(std::size_t n) {
  PerronPair p;
  p.rho = 0.0;
  p.u.assign(n, 1.0 / std::sqrt(static_cast<double>(n)));
  p.v = p.u;
  p.kappa = 1.0;
  p.converged = true;
  p.path = SolverPath::trivial;
  return p;
}

// Acyclic graphs are nilpotent. A source node spans a right null vector and
// a sink node a left one; iterating would only crawl through a Jordan block.
PerronPair nilpotent_pair(const SparseAdjacency& a) {
  const std::size_t n = static_cast<std::size_t>(a.n());
  std::vector<bool> has_in(n, false);
  for (Index c : a.col_indices()) has_in[static_cast<std::size_t>(c)] = true;
  std::size_t source = 0, sink = 0;
  while (has_in[source]) ++source;
  while (!a.row_cols(static_cast<Index>(sink)).empty()) ++sink;
  PerronPair p;
  p.u.assign(n, 0.0);
  p.v.assign(n, 0.0);
  p.u[source] = 1.0;
  p.v[sink] = 1.0;
  p.kappa = source == sink ? 1.0 : std::numeric_limits<double>::infinity();
  p.converged = true;
  p.reducible_warning = true;
  p.path = SolverPath::trivial;
  return p;
}

}  // namespace

std::string to_string(SolverPath path) {
  switch (path) {
    case SolverPath::trivial: return "trivial";
    case SolverPath::tridiagonal: return "tridiagonal";
    case SolverPath::power: return "power";
    case SolverPath::arnoldi: return "arnoldi";
    case SolverPath::closed_form: return "closed_form";
  }
  return "unknown";
}

void SolverOptions::validate() const {
  if (!(tol > 0.0)) throw ValidationError("solver tolerance must be positive");
  if (max_iterations < 1) throw ValidationError("max_iterations must be at least 1");
  if (shift && !(*shift >= 0.0)) throw ValidationError("shift must be nonnegative");
  if (subspace_dim < 2) throw ValidationError("subspace_dim must be at least 2");
}

LinearOperator make_operator(const SparseAdjacency& a, unsigned threads) {
  LinearOperator op;
  op.n = static_cast<std::size_t>(a.n());
  op.norm_inf = a.norm_inf();
  const unsigned workers = a.m() >= 200000 ? resolve_threads(threads) : 1u;
  auto at = std::make_shared<SparseAdjacency>(a.transpose());
  auto ap = std::make_shared<SparseAdjacency>(a);
  // Row-partitioned products: every output entry is summed by one worker in
  // a fixed order, so the thread count does not change the result.
  auto row_product = [workers](std::shared_ptr<SparseAdjacency> m) {
    return [m, workers](std::span<const double> x, std::span<double> y) {
      const auto offsets = m->row_offsets();
      const auto cols = m->col_indices();
      const auto w = m->weights();
      parallel_for(static_cast<std::size_t>(m->n()), workers,
                   [&](std::size_t begin, std::size_t end) {
                     for (std::size_t i = begin; i < end; ++i) {
                       double acc = 0.0;
                       for (Index j = offsets[i]; j < offsets[i + 1]; ++j)
                         acc += w[j] * x[cols[j]];
                       y[i] = acc;
                     }
                   });
    };
  };
  op.apply = row_product(ap);
  op.apply_transpose = row_product(at);
  return op;
}

void finalize_pair(PerronPair& pair, const LinearOperator& op) {
  Vec au(op.n), atv(op.n);
  op.apply(pair.u, au);
  op.apply_transpose(pair.v, atv);
  pair.residual_right = residual(au, pair.u, pair.rho);
  pair.residual_left = residual(atv, pair.v, pair.rho);
  const double vu = dot(pair.v, pair.u);
  pair.kappa = vu > 0.0 ? 1.0 / vu : std::numeric_limits<double>::infinity();
}

PerronPair perron_pair(const LinearOperator& op, const SolverOptions& opts) {
  opts.validate();
  if (op.n == 0) throw ValidationError("operator has zero dimension");
  if (op.norm_inf == 0.0) return trivial_pair(op.n);
  const double shift = opts.shift.value_or(0.5 * op.norm_inf);

  SideResult right = SideSolver(op.apply, op.n, shift, opts).run();
  SideResult left = SideSolver(op.apply_transpose, op.n, shift, opts).run();

  PerronPair pair;
  pair.u = std::move(right.x);
  pair.v = std::move(left.x);
  normalize_sign(pair.u);
  normalize_sign(pair.v);
  pair.iterations = right.iterations + left.iterations;
  pair.path = right.used_arnoldi || left.used_arnoldi ? SolverPath::arnoldi : SolverPath::power;

  // Choose among the one-sided Rayleigh quotients and the two-sided one the
  // value that balances both residuals best.
  Vec au(op.n), atv(op.n);
  op.apply(pair.u, au);
  op.apply_transpose(pair.v, atv);
  const double vu = dot(pair.v, pair.u);
  std::vector<double> candidates{dot(pair.u, au), dot(pair.v, atv)};
  if (vu > 0.0) candidates.push_back(dot(pair.v, au) / vu);
  double best_score = std::numeric_limits<double>::infinity();
  for (double c : candidates) {
    if (!std::isfinite(c)) continue;
    const double score = std::max(residual(au, pair.u, c), residual(atv, pair.v, c));
    if (score < best_score) {
      best_score = score;
      pair.rho = c;
    }
  }
  pair.rho = std::max(pair.rho, 0.0);
  pair.residual_right = residual(au, pair.u, pair.rho);
  pair.residual_left = residual(atv, pair.v, pair.rho);
  pair.kappa = vu > 0.0 ? 1.0 / vu : std::numeric_limits<double>::infinity();
  const double bound = opts.tol * std::max(1.0, pair.rho);
  pair.converged = pair.residual_right <= bound && pair.residual_left <= bound;
  if (!pair.converged)
    throw ConvergenceError("Perron iteration did not converge within " +
                               std::to_string(opts.max_iterations) + " iterations",
                           std::move(pair));
  return pair;
}

PerronPair perron_pair(const SparseAdjacency& a, const SolverOptions& opts) {
  opts.validate();
  const auto scc = strongly_connected_components(a);
  const bool reducible = !scc.is_irreducible;
  if (a.m() == 0) {
    PerronPair p = trivial_pair(static_cast<std::size_t>(a.n()));
    p.reducible_warning = reducible;
    return p;
  }
  if (scc.component_count == a.n()) return nilpotent_pair(a);
  if (opts.allow_tridiagonal && !reducible) {
    if (auto pair = detail::tridiagonal_perron(a, opts)) return *pair;
  }
  try {
    PerronPair p = perron_pair(make_operator(a, opts.threads), opts);
    p.reducible_warning = reducible;
    return p;
  } catch (ConvergenceError& e) {
    PerronPair best = e.best();
    best.reducible_warning = reducible;
    throw ConvergenceError(e.what(), std::move(best));
  }
}

double spectral_radius(const SparseAdjacency& a, const SolverOptions& opts) {
  const auto scc = strongly_connected_components(a);
  if (scc.is_irreducible) return perron_pair(a, opts).rho;
  const auto count = static_cast<std::size_t>(scc.component_count);
  std::vector<Index> size(count, 0), local(static_cast<std::size_t>(a.n()));
  for (Index i = 0; i < a.n(); ++i) local[i] = size[scc.component_of[i]]++;
  std::vector<std::vector<EdgeRef>> inner(count);
  for (const auto& e : a.edges())
    if (scc.component_of[e.h] == scc.component_of[e.k])
      inner[scc.component_of[e.h]].push_back({local[e.h], local[e.k], e.weight});
  double rho = 0.0;
  for (std::size_t c = 0; c < count; ++c) {
    if (size[c] < 2) continue;
    const auto block = SparseAdjacency::from_edges(size[c], std::move(inner[c]));
    rho = std::max(rho, perron_pair(block, opts).rho);
  }
  return rho;
}

double power_spectral_norm(const SparseAdjacency& a, int k) {
  if (k < 1) throw ValidationError("power k must be at least 1");
  const std::size_t n = static_cast<std::size_t>(a.n());
  const double growth = a.norm_inf();
  if (growth > 0.0 && 2.0 * k * std::log(growth) > 700.0)
    throw NumericalError("A^k would overflow; use a smaller k");
  if (a.m() == 0) return 0.0;

  Vec x(n, 1.0 / std::sqrt(static_cast<double>(n))), y(n), z(n);
  double lambda = 0.0;
  for (int it = 0; it < 100000; ++it) {
    std::copy(x.begin(), x.end(), y.begin());
    for (int p = 0; p < k; ++p) {
      a.multiply(y, z);
      std::swap(y, z);
    }
    for (int p = 0; p < k; ++p) {
      a.multiply_transpose(y, z);
      std::swap(y, z);
    }
    const double next = dot(x, y);  // Rayleigh quotient of (A^k)^T A^k
    if (!std::isfinite(next)) throw NumericalError("A^k overflowed; use a smaller k");
    const double nrm = norm2(y);
    if (nrm == 0.0) return 0.0;
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / nrm;
    const bool done = std::abs(next - lambda) <= 1e-15 * next;
    lambda = next;
    if (done) break;
  }
  return std::sqrt(lambda);
}

bool spectral_norm_lower_bound_check(const SparseAdjacency& a, double rho, int k) {
  const double norm = power_spectral_norm(a, k);
  const double lhs = std::pow(rho, k);
  if (!std::isfinite(lhs)) throw NumericalError("rho^k overflowed; use a smaller k");
  return lhs <= norm * (1.0 + 1e-8);
}

}  // namespace specrad

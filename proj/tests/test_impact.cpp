// Copyright 2026 The specrad Authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <sstream>

#include "specrad/eigen_engine.hpp"
#include "specrad/error.hpp"
#include "specrad/impact.hpp"
#include "support.hpp"

using namespace specrad;
using namespace specrad::testing;

namespace {

double round6(double x) { return std::round(x * 1e6) / 1e6; }

const EdgeImpact& find(const std::vector<EdgeImpact>& v, Index h, Index k) {
  for (const auto& e : v)
    if (e.edge.h == h && e.edge.k == k) return e;
  throw std::runtime_error("edge not ranked");
}

double dense_rho(const Eigen::MatrixXd& m) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  double r = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    r = std::max(r, es.eigenvalues()[i].real());
  return r;
}

}  // namespace

TEST_CASE("symmetric chain: first-order and exact impacts") {
  const auto a = path_toeplitz(25, 1.0, 1.0);
  const auto p = perron_pair(a);
  const auto imp = edge_impacts_first_order(a, p, 0.1, true);
  CHECK(imp.size() == 24);
  CHECK(round6(find(imp, 12, 13).first_order_impact) == 0.007692);
  CHECK(round6(find(imp, 0, 1).first_order_impact) == 0.000224);
  CHECK(imp.front().edge.h == 11);  // middle pairs tie; (12,13) and (13,14) 1-based
  CHECK(imp.front().edge.k == 12);

  // Dense recomputation of the reduced matrices.
  Eigen::MatrixXd d = dense(a);
  const double rho = dense_rho(d);
  Eigen::MatrixXd mid = d;
  mid(12, 13) *= 0.9;
  mid(13, 12) *= 0.9;
  Eigen::MatrixXd end = d;
  end(0, 1) *= 0.9;
  end(1, 0) *= 0.9;

  const auto m = exact_impact(a, EdgeRef{12, 13, 1.0}, 0.1, true);
  CHECK(m.rho_perturbed == doctest::Approx(dense_rho(mid)).epsilon(1e-12));
  CHECK(m.impact == doctest::Approx((rho - dense_rho(mid)) / rho).epsilon(1e-9));
  CHECK(round6(m.rho_perturbed) == 1.973080);
  CHECK(round6(m.impact) == 0.006214);

  const auto e = exact_impact(a, EdgeRef{0, 1, 1.0}, 0.1, true);
  CHECK(e.rho_perturbed == doctest::Approx(dense_rho(end)).epsilon(1e-12));
  CHECK(round6(e.rho_perturbed) == 1.985055);
  CHECK(round6(e.impact) == 0.000182);
}

TEST_CASE("nonsymmetric chain: the middle edges tie and (12,13) leads") {
  const auto a = path_toeplitz(25, 1.5, 0.5);
  const auto p = perron_pair(a);
  const auto imp = edge_impacts_first_order(a, p, 0.1, false);
  REQUIRE(imp.size() == 48);
  CHECK(imp[0].edge.h == 11);
  CHECK(imp[0].edge.k == 12);
  for (int i = 1; i < 4; ++i)
    CHECK(imp[i].alpha == doctest::Approx(imp[0].alpha).epsilon(1e-9));
  CHECK(imp[4].alpha < imp[0].alpha * (1.0 - 1e-6));
  CHECK(round6(imp[0].first_order_impact) == 0.003846);
  const auto ex = exact_impact(a, imp[0].edge, 0.1, false);
  CHECK(round6(ex.rho_perturbed) == 1.713348);
  CHECK(round6(ex.impact) == 0.003532);
}

TEST_CASE("symmetric three-node path") {
  const auto a = path_toeplitz(3, 1.0, 1.0);
  const auto p = perron_pair(a);
  RecommendOptions rec;
  rec.top_k = 1;
  rec.symmetric = true;
  const auto plan = recommend_interventions(a, p, rec);
  REQUIRE(plan.ranked.size() == 1);
  CHECK(plan.ranked[0].edge.h == 0);
  CHECK(plan.ranked[0].edge.k == 1);
  CHECK(plan.ranked[0].alpha == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
}

TEST_CASE("symmetric alpha is the sum of the two directed alphas") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = random_symmetric(rng, 10 + trial * 5, 40);
    const auto p = perron_pair(a);
    const auto sym = edge_impacts_first_order(a, p, 0.1, true);
    const auto dir = edge_impacts_first_order(a, p, 0.1, false);
    for (const auto& s : sym) {
      const double hk = find(dir, s.edge.h, s.edge.k).alpha;
      const double kh = find(dir, s.edge.k, s.edge.h).alpha;
      CHECK(hk == doctest::Approx(kh).epsilon(1e-6));
      CHECK(std::abs(s.alpha - (hk + kh)) <= 1e-12);
    }
  }
  CHECK_THROWS_AS(edge_impacts_first_order(path_toeplitz(4, 1.0, 2.0),
                                           perron_pair(path_toeplitz(4, 1.0, 2.0)), 0.1, true),
                  ValidationError);
}

TEST_CASE("ranking order and tie-breaking") {
  std::vector<EdgeImpact> v(5);
  v[0].edge = {3, 1, 1};
  v[0].alpha = 1.0;
  v[1].edge = {0, 2, 1};
  v[1].alpha = 1.0 + 1e-13;
  v[2].edge = {2, 0, 1};
  v[2].alpha = 2.0;
  v[3].edge = {1, 0, 1};
  v[3].alpha = 0.5;
  v[4].edge = {0, 1, 1};
  v[4].alpha = 0.5 * (1.0 - 1e-12);
  rank_impacts(v);
  CHECK(v[0].edge == EdgeRef{2, 0, 1});
  CHECK(v[1].edge == EdgeRef{0, 2, 1});
  CHECK(v[2].edge == EdgeRef{3, 1, 1});
  CHECK(v[3].edge == EdgeRef{0, 1, 1});
  CHECK(v[4].edge == EdgeRef{1, 0, 1});
}

TEST_CASE("exact impacts are nonnegative and the top edge beats the bottom edge") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = 8 + static_cast<Index>(rng() % 40);
    const auto a = random_irreducible(rng, n, 3 * n);
    const auto p = perron_pair(a);
    const auto imp = edge_impacts_first_order(a, p, 1.0, false);
    for (std::size_t i = 0; i < imp.size(); i += 3)
      CHECK(exact_impact(a, p.rho, imp[i].edge, 0.5, false).impact >= -1e-9);
    if (imp.front().alpha > 10.0 * imp.back().alpha) {
      CHECK(exact_impact(a, p.rho, imp.front().edge, 1.0, false).impact >=
            exact_impact(a, p.rho, imp.back().edge, 1.0, false).impact);
    }
    // Largest alpha carries the largest first-order impact.
    for (const auto& e : imp) CHECK(e.first_order_impact <= imp.front().first_order_impact);
  }
}

TEST_CASE("first-order and exact impacts agree for small epsilon") {
  for (auto [sub, super] : {std::pair{1.0, 1.0}, std::pair{1.5, 0.5}}) {
    const auto a = path_toeplitz(25, sub, super);
    const auto p = perron_pair(a);
    const bool sym = sub == super;
    for (const auto& e : edge_impacts_first_order(a, p, 0.1, sym)) {
      const double ex = exact_impact(a, p.rho, e.edge, 0.1, sym).impact;
      CHECK(std::abs(ex - e.first_order_impact) <= 0.5 * e.first_order_impact);
    }
  }
}

TEST_CASE("edge reduction validation") {
  const auto a = path_toeplitz(4, 1.0, 1.0);
  CHECK_THROWS_WITH_AS(exact_impact(a, EdgeRef{0, 1, 1.0}, 1.5, false),
                       "perturbation would create negative weight", ValidationError);
  CHECK_THROWS_AS(exact_impact(a, EdgeRef{0, 2, 1.0}, 0.5, false), ValidationError);
  CHECK_THROWS_AS(exact_impact(a, EdgeRef{0, 1, 1.0}, 0.0, false), ValidationError);
  const auto removed = reduce_edge(a, EdgeRef{0, 1, 1.0}, 1.0, true);
  CHECK_FALSE(removed.has_edge(0, 1));
  CHECK_FALSE(removed.has_edge(1, 0));
  CHECK(reduce_edge(a, EdgeRef{0, 1, 1.0}, 0.25, false).weight(0, 1) == 0.75);
}

TEST_CASE("recommendations flag and demote disconnecting removals") {
  // Two triangles joined by a single two-way bridge 2 <-> 3 of large weight.
  const auto a = SparseAdjacency::from_edges(
      6, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 0, 1.0}, {1, 0, 1.0}, {2, 1, 1.0}, {0, 2, 1.0},
          {3, 4, 1.0}, {4, 5, 1.0}, {5, 3, 1.0}, {4, 3, 1.0}, {5, 4, 1.0}, {3, 5, 1.0},
          {2, 3, 5.0}, {3, 2, 5.0}});
  const auto p = perron_pair(a);
  const auto raw = edge_impacts_first_order(a, p, 1.0, false);
  CHECK(raw[0].edge.h + raw[0].edge.k == 5);  // a bridge direction leads

  RecommendOptions rec;
  rec.top_k = 4;
  const auto plan = recommend_interventions(a, p, rec);
  REQUIRE(plan.ranked.size() == 4);
  CHECK(*plan.ranked[0].preserves_irreducibility);
  CHECK(*plan.ranked[1].preserves_irreducibility);
  CHECK_FALSE(*plan.ranked[2].preserves_irreducibility);
  CHECK_FALSE(*plan.ranked[3].preserves_irreducibility);

  rec.require_irreducible = false;
  const auto loose = recommend_interventions(a, p, rec);
  CHECK_FALSE(loose.ranked[0].preserves_irreducibility.has_value());
  CHECK(loose.ranked[0].edge == raw[0].edge);

  rec.mode = InterventionMode::downweight;
  rec.epsilon = 0.5;
  const auto down = recommend_interventions(a, p, rec);
  CHECK(*down.ranked[0].preserves_irreducibility);
  CHECK(down.epsilon == 0.5);

  rec.top_k = 0;
  CHECK_THROWS_AS(recommend_interventions(a, p, rec), ValidationError);
}

TEST_CASE("reducible input needs force") {
  const auto a = SparseAdjacency::from_edges(3, {{0, 1, 1.0}, {1, 0, 1.0}, {1, 2, 1.0}});
  const auto p = perron_pair(a);
  RecommendOptions rec;
  CHECK_THROWS_AS(recommend_interventions(a, p, rec), ValidationError);
  rec.force = true;
  CHECK_NOTHROW(recommend_interventions(a, p, rec));
}

TEST_CASE("parallel exact rescoring matches serial") {
  std::mt19937_64 rng(7);
  const auto a = random_irreducible(rng, 60, 200);
  const auto p = perron_pair(a);
  RecommendOptions rec;
  rec.top_k = 20;
  rec.exact_rescore = true;
  rec.require_irreducible = false;
  SolverOptions serial, parallel;
  parallel.threads = 4;
  const auto s = recommend_interventions(a, p, rec, serial);
  const auto q = recommend_interventions(a, p, rec, parallel);
  REQUIRE(s.ranked.size() == q.ranked.size());
  for (std::size_t i = 0; i < s.ranked.size(); ++i) {
    CHECK(s.ranked[i].edge == q.ranked[i].edge);
    CHECK(*s.ranked[i].exact_impact == *q.ranked[i].exact_impact);
  }
}

TEST_CASE("plan CSV") {
  const auto a = path_toeplitz(5, 1.0, 1.0);
  RecommendOptions rec;
  rec.top_k = 2;
  rec.mode = InterventionMode::downweight;
  rec.epsilon = 0.1;
  rec.exact_rescore = true;
  const auto plan = recommend_interventions(a, perron_pair(a), rec);
  std::ostringstream out;
  write_plan_csv(out, plan, 1, 6);
  std::istringstream in(out.str());
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == "h,k,weight,alpha,first_order_impact,exact_impact,preserves_irreducibility");
  CHECK(row.rfind("2,3,1.000000,", 0) == 0);
  CHECK(row.substr(row.size() - 5) == ",true");
}

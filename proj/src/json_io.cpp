// Copyright 2026 The specrad Authors.
// SPDX-License-Identifier: Apache-2.0

#include "specrad/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace specrad {

using nlohmann::json;

json format_number(double x, const NumberFormat& fmt) {
  if (std::isnan(x)) return nullptr;
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (fmt.decimals < 0 || x == 0.0) return x;
  // Round through the decimal string so the stored double is the nearest
  // one to the printed digits, which then serializes without noise.
  char buf[64];
  if (std::abs(x) < 1e-3 && fmt.small_significant > 0)
    std::snprintf(buf, sizeof buf, "%.*e", fmt.small_significant - 1, x);
  else
    std::snprintf(buf, sizeof buf, "%.*f", fmt.decimals, x);
  const double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;
}

json format_vector(std::span<const double> xs, const NumberFormat& fmt) {
  json arr = json::array();
  for (double x : xs) arr.push_back(format_number(x, fmt));
  return arr;
}

json to_json(const PerronPair& pair, const NumberFormat& fmt, bool with_vectors) {
  json j;
  j["rho"] = format_number(pair.rho, fmt);
  j["kappa"] = format_number(pair.kappa, fmt);
  j["residual_right"] = format_number(pair.residual_right, fmt);
  j["residual_left"] = format_number(pair.residual_left, fmt);
  j["iterations"] = pair.iterations;
  j["converged"] = pair.converged;
  j["reducible_warning"] = pair.reducible_warning;
  j["solver"] = to_string(pair.path);
  if (with_vectors) {
    j["u"] = format_vector(pair.u, fmt);
    j["v"] = format_vector(pair.v, fmt);
  }
  return j;
}

json to_json(const SccReport& scc) {
  return {{"components", scc.component_count}, {"irreducible", scc.is_irreducible}};
}

json to_json(const StructuredConditionReport& r, const NumberFormat& fmt) {
  return {
      {"kind", to_string(r.kind)},
      {"epsilon", format_number(r.epsilon, fmt)},
      {"rho", format_number(r.rho, fmt)},
      {"rho_perturbed", format_number(r.rho_perturbed, fmt)},
      {"kappa", format_number(r.kappa_plain, fmt)},
      {"kappa_structured", format_number(r.kappa_structured, fmt)},
      {"sensitivity", format_number(r.sensitivity, fmt)},
      {"predicted_increase", format_number(r.predicted_increase, fmt)},
      {"measured_increase", format_number(r.measured_increase, fmt)},
  };
}

json to_json(const EdgeImpact& e, const NumberFormat& fmt, int index_base) {
  json j{
      {"h", e.edge.h + index_base},
      {"k", e.edge.k + index_base},
      {"weight", format_number(e.edge.weight, fmt)},
      {"alpha", format_number(e.alpha, fmt)},
      {"first_order_impact", format_number(e.first_order_impact, fmt)},
  };
  if (e.exact_impact) j["exact_impact"] = format_number(*e.exact_impact, fmt);
  if (e.rho_perturbed) j["rho_perturbed"] = format_number(*e.rho_perturbed, fmt);
  if (e.preserves_irreducibility) j["preserves_irreducibility"] = *e.preserves_irreducibility;
  return j;
}

json to_json(const InterventionPlan& plan, const NumberFormat& fmt, int index_base) {
  json ranked = json::array();
  for (const auto& e : plan.ranked) ranked.push_back(to_json(e, fmt, index_base));
  return {
      {"mode", plan.mode == InterventionMode::remove ? "remove" : "downweight"},
      {"epsilon", format_number(plan.epsilon, fmt)},
      {"symmetric", plan.symmetric},
      {"ranked", std::move(ranked)},
  };
}

json to_json(const SisTrajectory& t, const NumberFormat& fmt, bool with_states) {
  json j{
      {"dt", format_number(t.dt, fmt)},
      {"steps", t.steps},
      {"t_end", format_number(t.times.empty() ? 0.0 : t.times.back(), fmt)},
      {"max_final", format_number(t.max_final, fmt)},
      {"died_out", t.died_out},
  };
  if (with_states) {
    json states = json::array();
    for (std::size_t i = 0; i < t.times.size(); ++i)
      states.push_back({{"t", format_number(t.times[i], fmt)},
                        {"s", format_vector(t.states[i], fmt)}});
    j["trajectory"] = std::move(states);
  }
  return j;
}

json to_json(const SweepPoint& p, const NumberFormat& fmt) {
  return {{"beta", format_number(p.beta, fmt)},
          {"ratio", format_number(p.ratio, fmt)},
          {"max_final", format_number(p.max_final, fmt)},
          {"died_out", p.died_out}};
}

}  // namespace specrad

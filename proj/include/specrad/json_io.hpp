// Copyright 2026 The specrad Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <json.hpp>

#include "specrad/eigen_engine.hpp"
#include "specrad/graph.hpp"
#include "specrad/impact.hpp"
#include "specrad/perturbation.hpp"
#include "specrad/sis.hpp"

namespace specrad {

/// Rounding applied to every number in a report.
struct NumberFormat {
  /// Decimal places; negative keeps full double precision.
  int decimals = 6;
  /// Nonzero values below 10^-3 in magnitude keep this many significant
  /// digits instead, so small impacts do not print as 0.000000.
  int small_significant = 6;

  static NumberFormat full() { return {-1, -1}; }
};

/// x rounded per `fmt`; non-finite values become null or "inf" strings.
nlohmann::json format_number(double x, const NumberFormat& fmt);
nlohmann::json format_vector(std::span<const double> xs, const NumberFormat& fmt);

nlohmann::json to_json(const PerronPair& pair, const NumberFormat& fmt, bool with_vectors);
nlohmann::json to_json(const SccReport& scc);
nlohmann::json to_json(const StructuredConditionReport& r, const NumberFormat& fmt);
nlohmann::json to_json(const EdgeImpact& e, const NumberFormat& fmt, int index_base);
nlohmann::json to_json(const InterventionPlan& plan, const NumberFormat& fmt, int index_base);
nlohmann::json to_json(const SisTrajectory& t, const NumberFormat& fmt, bool with_states);
nlohmann::json to_json(const SweepPoint& p, const NumberFormat& fmt);

}  // namespace specrad

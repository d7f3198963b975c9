// Copyright 2026 The specrad Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <vector>

#include "specrad/graph.hpp"

namespace specrad {

// Iterative Tarjan; an explicit call stack keeps deep chains (long paths in
// large sparse graphs) off the machine stack.
SccReport strongly_connected_components(const SparseAdjacency& a) {
  const Index n = a.n();
  const auto offsets = a.row_offsets();
  const auto cols = a.col_indices();

  constexpr Index unvisited = -1;
  std::vector<Index> order(n, unvisited), low(n, 0), comp(n, unvisited);
  std::vector<char> on_stack(n, 0);
  std::vector<Index> stack;
  std::vector<std::pair<Index, Index>> calls;  // (node, next edge position)
  Index counter = 0, components = 0;

  for (Index root = 0; root < n; ++root) {
    if (order[root] != unvisited) continue;
    calls.emplace_back(root, offsets[root]);
    order[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;

    while (!calls.empty()) {
      auto& [v, pos] = calls.back();
      if (pos < offsets[v + 1]) {
        const Index w = cols[pos++];
        if (order[w] == unvisited) {
          order[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          calls.emplace_back(w, offsets[w]);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], order[w]);
        }
        continue;
      }
      const Index done = v;
      calls.pop_back();
      if (!calls.empty()) {
        const Index parent = calls.back().first;
        low[parent] = std::min(low[parent], low[done]);
      }
      if (low[done] == order[done]) {
        Index w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = components;
        } while (w != done);
        ++components;
      }
    }
  }

  SccReport report;
  report.component_count = components;
  report.component_of = std::move(comp);
  report.is_irreducible = components == 1 && n > 1;
  return report;
}

bool is_irreducible(const SparseAdjacency& a) {
  return strongly_connected_components(a).is_irreducible;
}

}  // namespace specrad

// Copyright 2026 The specrad Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>

namespace specrad {

/// 0 -> std::thread::hardware_concurrency() (at least 1).
unsigned resolve_threads(unsigned requested);

/// Splits [0, count) into contiguous chunks, one per worker, and calls
/// body(begin, end) for each. Runs inline when threads <= 1.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace specrad

// Copyright 2026 The specrad Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>

namespace specrad::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Runs one command line. Reports go to `out`; usage text and diagnostics to
/// `err`. Returns 0 on success, 1 on computation or data failure (with a
/// JSON error object on `out`), 2 on usage errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace specrad::cli

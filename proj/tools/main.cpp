// Copyright 2026 The specrad Authors.
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "specrad/cli.hpp"

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  return specrad::cli::run(argc, argv, std::cout, std::cerr);
}

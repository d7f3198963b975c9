// Copyright 2026 The specrad Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace specrad {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. `line()` is 1-based; 0 when no line applies.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Input that parses but violates a model invariant (negative weight,
/// duplicate edge, out-of-range index, bad parameter).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure could not produce a meaningful answer
/// (overflow, defective Perron root, unstable integration).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace specrad

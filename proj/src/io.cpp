// Copyright 2026 The specrad Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cctype>
#include <cmath>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "specrad/error.hpp"
#include "specrad/graph.hpp"

namespace specrad {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

Index parse_index(std::string_view tok, std::size_t line) {
  Index v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError("expected integer node index, got '" + std::string(tok) + "'", line);
  return v;
}

double parse_weight(std::string_view tok, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError("expected numeric weight, got '" + std::string(tok) + "'", line);
  return v;
}

void check_weight(double w, std::size_t line) {
  const std::string where = "line " + std::to_string(line) + ": ";
  if (!std::isfinite(w)) throw ValidationError(where + "non-finite weight");
  if (w < 0.0) throw ValidationError(where + "negative weight");
  if (w == 0.0) throw ValidationError(where + "zero weight");
}

// Accepts "# nodes: N" / "# nodes N" so that isolated trailing nodes survive
// a TSV round trip.
bool parse_nodes_comment(std::string_view body, Index& n) {
  auto toks = split_ws(body);
  if (toks.size() != 2) return false;
  std::string_view key = toks[0];
  if (key == "nodes:" || key == "nodes") {
    n = parse_index(toks[1], 0);
    return true;
  }
  return false;
}

LoadResult load_tsv(std::istream& in, int index_base) {
  std::vector<EdgeRef> edges;
  Index self_loops = 0;
  Index declared_n = -1;
  Index max_index = -1;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    const auto hash = line.find_first_of("#%");
    if (hash != std::string_view::npos) {
      Index n = 0;
      if (hash == 0 && line[0] == '#' && parse_nodes_comment(line.substr(1), n))
        declared_n = n;
      line = line.substr(0, hash);
    }
    const auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (toks.size() != 2 && toks.size() != 3)
      throw ParseError("expected 'src dst [weight]', found " + std::to_string(toks.size()) +
                           " fields",
                       line_no);
    const Index h = parse_index(toks[0], line_no) - index_base;
    const Index k = parse_index(toks[1], line_no) - index_base;
    const double w = toks.size() == 3 ? parse_weight(toks[2], line_no) : 1.0;
    if (h < 0 || k < 0)
      throw ValidationError("line " + std::to_string(line_no) + ": index below base " +
                            std::to_string(index_base));
    check_weight(w, line_no);
    if (declared_n >= 0 && (h >= declared_n || k >= declared_n))
      throw ValidationError("line " + std::to_string(line_no) +
                            ": index exceeds declared node count");
    if (h == k) {
      ++self_loops;
      max_index = std::max(max_index, h);
      continue;
    }
    max_index = std::max({max_index, h, k});
    edges.push_back({h, k, w});
  }
  const Index n = declared_n >= 0 ? declared_n : max_index + 1;
  if (n < 1) throw ParseError("edge list is empty", 0);
  LoadResult r;
  r.matrix = SparseAdjacency::from_edges(n, std::move(edges));
  r.self_loops_dropped = self_loops;
  return r;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

// MatrixMarket indices are 1-based by definition; index_base does not apply.
LoadResult load_matrix_market(std::istream& in) {
  std::string raw;
  std::size_t line_no = 0;
  if (!std::getline(in, raw)) throw ParseError("empty MatrixMarket stream", 1);
  ++line_no;
  const auto header = split_ws(raw);
  if (header.size() != 5 || lower(header[0]) != "%%matrixmarket" ||
      lower(header[1]) != "matrix")
    throw ParseError("missing '%%MatrixMarket matrix' banner", line_no);
  if (lower(header[2]) != "coordinate")
    throw ParseError("only coordinate MatrixMarket files are supported", line_no);
  const std::string field = lower(header[3]);
  const std::string symmetry = lower(header[4]);
  if (field != "real" && field != "integer" && field != "pattern")
    throw ParseError("unsupported MatrixMarket field '" + field + "'", line_no);
  if (symmetry != "general" && symmetry != "symmetric")
    throw ParseError("unsupported MatrixMarket symmetry '" + symmetry + "'", line_no);
  const bool pattern = field == "pattern";
  const bool symmetric = symmetry == "symmetric";

  Index rows = -1, cols = -1, entries = -1, seen = 0, self_loops = 0;
  std::vector<EdgeRef> edges;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (!line.empty() && line[0] == '%') continue;
    const auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (rows < 0) {
      if (toks.size() != 3) throw ParseError("expected 'rows cols entries'", line_no);
      rows = parse_index(toks[0], line_no);
      cols = parse_index(toks[1], line_no);
      entries = parse_index(toks[2], line_no);
      if (rows != cols) throw ValidationError("adjacency matrix must be square");
      if (rows < 1 || entries < 0) throw ValidationError("invalid MatrixMarket dimensions");
      edges.reserve(static_cast<std::size_t>(symmetric ? 2 * entries : entries));
      continue;
    }
    const std::size_t want = pattern ? 2 : 3;
    if (toks.size() != want)
      throw ParseError("expected " + std::to_string(want) + " fields per entry", line_no);
    const Index h = parse_index(toks[0], line_no) - 1;
    const Index k = parse_index(toks[1], line_no) - 1;
    const double w = pattern ? 1.0 : parse_weight(toks[2], line_no);
    if (h < 0 || k < 0 || h >= rows || k >= rows)
      throw ValidationError("line " + std::to_string(line_no) + ": index out of range");
    check_weight(w, line_no);
    ++seen;
    if (h == k) {
      ++self_loops;
      continue;
    }
    edges.push_back({h, k, w});
    if (symmetric) edges.push_back({k, h, w});
  }
  if (rows < 0) throw ParseError("missing size line", line_no);
  if (seen != entries)
    throw ParseError("expected " + std::to_string(entries) + " entries, found " +
                         std::to_string(seen),
                     line_no);
  LoadResult r;
  r.matrix = SparseAdjacency::from_edges(rows, std::move(edges));
  r.self_loops_dropped = self_loops;
  return r;
}

std::string format_weight(double w) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", w);
  return buf;
}

}  // namespace

LoadResult load_edge_list(std::istream& in, EdgeFormat format, int index_base) {
  if (index_base != 0 && index_base != 1)
    throw ValidationError("index base must be 0 or 1");
  return format == EdgeFormat::tsv ? load_tsv(in, index_base) : load_matrix_market(in);
}

LoadResult load_edge_file(const std::string& path, EdgeFormat format, int index_base) {
  std::ifstream in(path);
  if (!in) throw Error("file not found: " + path);
  return load_edge_list(in, format, index_base);
}

EdgeFormat format_from_path(const std::string& path) {
  const auto dot = path.rfind('.');
  if (dot != std::string::npos && lower(path.substr(dot)) == ".mtx")
    return EdgeFormat::matrix_market;
  return EdgeFormat::tsv;
}

void write_edge_list(std::ostream& out, const SparseAdjacency& a, int index_base) {
  out << "# nodes: " << a.n() << '\n';
  for (const auto& e : a.edges())
    out << e.h + index_base << '\t' << e.k + index_base << '\t' << format_weight(e.weight)
        << '\n';
}

void write_matrix_market(std::ostream& out, const SparseAdjacency& a) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.n() << ' ' << a.n() << ' ' << a.m() << '\n';
  for (const auto& e : a.edges())
    out << e.h + 1 << ' ' << e.k + 1 << ' ' << format_weight(e.weight) << '\n';
}

}  // namespace specrad
